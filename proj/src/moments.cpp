#include "homsys/moments.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "homsys/errors.hpp"
#include "homsys/quadrature.hpp"

namespace homsys {

namespace {

constexpr int kMaxTailPanels = 60;
constexpr int kNearZeroLevels = 40;

}  // namespace

double gamma(const HFunction& f, double a, double b, double tol) {
    if (!(b > 0.0)) throw DomainError("gamma requires b > 0");
    if (!(a >= 0.0)) throw DomainError("gamma requires a >= 0");
    if (!(tol > 0.0)) throw DomainError("gamma requires tol > 0");
    if (f.trivial()) return 0.0;

    const double r = r_of(f);
    // Relative root tolerance: the tail of T is tiny but integrated against t^a.
    const double t_tol = tol / 100.0;
    auto integrand = [&](double t) {
        const double T = t_of(f, t, t_tol * 1e-6, t_tol);
        return T == 0.0 ? 0.0 : std::pow(t, a) * std::pow(T, b);
    };

    // T may blow up logarithmically at 0, so seed dyadic breakpoints toward 0.
    const double head = std::max(r + 1.0, 1.0);
    std::vector<double> cuts{r};
    for (int k = 1; k <= kNearZeroLevels; ++k) cuts.push_back(head * std::ldexp(1.0, -k));
    for (double k : f.g().kinks())
        if (std::abs(k) > 0.0) cuts.push_back(std::abs(k));
    auto first = quad::integrate(integrand, 0.0, head, 0.5 * tol, cuts, 20000);
    if (!first.converged)
        throw IntegrationFailure("gamma: head panel did not converge", first.value);
    double total = first.value;

    double L = head;
    for (int k = 0; k < kMaxTailPanels; ++k) {
        if (t_of(f, L, t_tol) == 0.0) return total;
        const double budget = tol * std::ldexp(1.0, -k - 2);
        auto panel = quad::integrate(integrand, L, 2.0 * L, budget, cuts, 20000);
        total += panel.value;
        if (std::abs(panel.value) < tol * 1e-3) return total;
        L *= 2.0;
    }
    throw IntegrationFailure("gamma: tail panels did not decay", total);
}

double m_eta(const HFunction& f, double eta, double tol) {
    if (!(eta > 0.0 && eta <= 1.0)) throw DomainError("m_eta requires eta in (0, 1]");
    return std::max(gamma(f, 1.0 + eta, 1.0, tol), gamma(f, 0.0, 2.0 + eta, tol));
}

double alpha(const GFunction& g, double tol) {
    if (g.is_zero()) return 0.0;
    double upper = g.support_radius();
    if (!std::isfinite(upper)) upper = 60.0 * g.scale();  // softplus tail below s^2 e^-60
    std::vector<double> cuts;
    for (double k : g.kinks())
        if (k > 0.0) cuts.push_back(k);
    auto res = quad::integrate([&](double t) { return g(t); }, 0.0, upper, tol, cuts, 20000);
    if (!res.converged) throw IntegrationFailure("alpha did not converge", res.value);
    return res.value;
}

double c_star(const ModelSpec& m, double tol) {
    m.check();
    if (!nontrivial(m)) throw DegenerateModel("c* vanishes: every atom is max or min");
    double acc = 0.0;
    for (const auto& at : m.atoms)
        if (!at.f.trivial())
            acc += at.weight * (gamma(at.f, 0.0, 2.0, tol) + 2.0 * gamma(at.f, 1.0, 1.0, tol));
    return 2.25 * acc;
}

double check_ipp(const HFunction& f, double a, double b, double tol) {
    if (!(a >= 1.0 && b >= 1.0)) throw DomainError("check_ipp requires a, b >= 1");
    return a * gamma(swap(f), a - 1.0, b, tol) - b * gamma(f, b - 1.0, a, tol);
}

MomentTable moment_table(const HFunction& f, double eta, double tol) {
    MomentTable t;
    t.eta = eta;
    t.r = r_of(f);
    t.gamma01 = gamma(f, 0.0, 1.0, tol);
    t.gamma02 = gamma(f, 0.0, 2.0, tol);
    t.gamma11 = gamma(f, 1.0, 1.0, tol);
    t.gamma_1eta_1 = gamma(f, 1.0 + eta, 1.0, tol);
    t.gamma_0_2eta = gamma(f, 0.0, 2.0 + eta, tol);
    t.m_eta = std::max(t.gamma_1eta_1, t.gamma_0_2eta);
    return t;
}

}  // namespace homsys
