#include "homsys/evolve.hpp"

#include <algorithm>
#include <cmath>

#include "homsys/errors.hpp"
#include "homsys/moments.hpp"
#include "homsys/parallel.hpp"

namespace homsys {

double lambda_of(std::span<const double> psi, const GridCDF& Psi, const HFunction& f, double v, double tol) {
    const int m = Psi.m();
    if (static_cast<int>(psi.size()) != m + 1) throw InconsistentDensity("psi and Psi differ in length");
    const double h = Psi.h();
    double cum = Psi.atom_neg_inf(), worst = 0.0;
    for (int k = 0; k < m; ++k) {
        cum += 0.5 * h * (psi[k] + psi[k + 1]);
        worst = std::max(worst, std::abs(cum - Psi.cdf()[k + 1]));
    }
    if (worst > 1e-3) throw InconsistentDensity("psi does not integrate to Psi");

    auto dens = [&](double x) {
        if (x <= Psi.lo() || x >= Psi.hi()) return 0.0;
        const double u = (x - Psi.lo()) / h;
        const int k = std::min(static_cast<int>(u), m - 1);
        const double w = u - k;
        return (1.0 - w) * psi[k] + w * psi[k + 1];
    };
    auto cdf = [&](double x) { return Psi.at(x); };
    // nodes are kinks of the interpolated density; keep the ones within reach
    std::vector<double> nodes;
    const double reach = std::max(8.0, 4.0 * r_of(f) + 4.0);
    for (int k = 0; k <= m; ++k)
        if (std::abs(Psi.x(k) - v) < reach) nodes.push_back(Psi.x(k));
    return lambda_integral(dens, cdf, f, v, Psi.lo(), Psi.hi(), tol, nodes);
}

Stepper::Stepper(ModelSpec model, double lo, double hi, int m, double tol, int threads)
    : model_(std::move(model)), lo_(lo), hi_(hi), h_((hi - lo) / m), m_(m), tol_(tol), threads_(threads) {
    model_.check();
    if (m < 2 || !(lo < hi)) throw DomainError("Stepper needs lo < hi and m >= 2");
    shift_.resize(model_.atoms.size());
    for (std::size_t a = 0; a < model_.atoms.size(); ++a) {
        const auto& f = model_.atoms[a].f;
        if (f.trivial()) continue;
        const double r = r_of(f);
        auto& sh = shift_[a];
        for (int k = 0; k < m_; ++k) {
            const double t = (k + 0.5) * h_;
            const double T = t_of(f, t, tol_ * 1e-3, 1e-12);
            if (T == 0.0 && t > r) break;
            if (t > r + 1.0 && T < 0.1 * h_) break;
            const double u = std::min(T / h_, static_cast<double>(2 * m_ + 2));
            const int c = static_cast<int>(u);
            sh.push_back({c, u - c});
        }
    }
}

Eigen::ArrayXd Stepper::lambda(const GridCDF& d, std::size_t atom) const {
    const int m = m_;
    Eigen::ArrayXd out = Eigen::ArrayXd::Zero(m + 1);
    const auto& sh = shift_.at(atom);
    if (sh.empty()) return out;
    const int e = model_.atoms[atom].f.eps();
    int smax = 0;
    for (const auto& s : sh) smax = std::max(smax, s.cells + 1);
    const int K = static_cast<int>(sh.size());
    const int pad = std::max(K, smax) + 2;

    // cdf padded with 0 on the left and 1 on the right; cell masses padded with 0
    Eigen::ArrayXd cdf(m + 1 + 2 * pad);
    cdf.head(pad).setZero();
    cdf.segment(pad, m + 1) = d.cdf();
    cdf.tail(pad).setOnes();
    Eigen::ArrayXd mass = Eigen::ArrayXd::Zero(m + 2 * pad);
    mass.segment(pad, m) = d.cell_mass();
    const Eigen::ArrayXd& base = d.cdf();

    parallel_for(static_cast<std::size_t>(m + 1), threads_, [&](std::size_t b, std::size_t end) {
        const int j0 = static_cast<int>(b), len = static_cast<int>(end - b);
        Eigen::ArrayXd acc = Eigen::ArrayXd::Zero(len);
        const auto psi_v = base.segment(j0, len);
        for (int k = 0; k < K; ++k) {
            const auto [c, w] = sh[k];
            if (e > 0) {
                // cell (x_{j-k-1}, x_{j-k}) against Psi(x_j - T_k)
                const auto ms = mass.segment(pad + j0 - k - 1, len);
                const auto lo_s = cdf.segment(pad + j0 - c - 1, len);
                const auto hi_s = cdf.segment(pad + j0 - c, len);
                acc += ms * (psi_v - ((1.0 - w) * hi_s + w * lo_s));
            } else {
                // cell (x_{j+k}, x_{j+k+1}) against Psi(x_j + T_k)
                const auto ms = mass.segment(pad + j0 + k, len);
                const auto lo_s = cdf.segment(pad + j0 + c, len);
                const auto hi_s = cdf.segment(pad + j0 + c + 1, len);
                acc -= ms * (((1.0 - w) * lo_s + w * hi_s) - psi_v);
            }
        }
        out.segment(j0, len) = acc;
    });
    return out;
}

GridCDF Stepper::step(const GridCDF& d, StepStats* stats) const {
    if (d.m() != m_ || std::abs(d.lo() - lo_) > 1e-12 * (1 + std::abs(lo_)) ||
        std::abs(d.hi() - hi_) > 1e-12 * (1 + std::abs(hi_)))
        throw DomainError("step: law is not on the stepper grid");
    if (d.atom_neg_inf() != 0.0) throw DomainError("step: atoms at -inf are not supported");
    const Eigen::ArrayXd& P = d.cdf();
    Eigen::ArrayXd out = Eigen::ArrayXd::Zero(m_ + 1);
    for (std::size_t a = 0; a < model_.atoms.size(); ++a) {
        const auto& at = model_.atoms[a];
        Eigen::ArrayXd per = at.f.eps() > 0 ? Eigen::ArrayXd(P.square()) : Eigen::ArrayXd(2.0 * P - P.square());
        if (!shift_[a].empty()) per -= lambda(d, a);
        out += at.weight * per;
    }
    StepStats st;
    st.left_mass = out[0];
    st.right_deficit = 1.0 - out[m_];
    if (st.left_mass > 1e-9 || st.right_deficit > 1e-9)
        throw RegridRequired("law left the grid: mass " + fmt(st.left_mass) + " below lo, " +
                             fmt(st.right_deficit) + " above hi");
    out[0] = 0.0;
    out[m_] = 1.0;
    double run = 0.0;
    for (int k = 0; k <= m_; ++k) {
        double v = std::clamp(out[k], 0.0, 1.0);
        if (v < run) {
            st.clamp_budget += run - v;
            v = run;
        }
        out[k] = run = v;
    }
    if (stats) *stats = st;
    return GridCDF(lo_, hi_, std::move(out));
}

GridCDF step(const GridCDF& d, const ModelSpec& model, double tol, StepStats* stats) {
    return Stepper(model, d.lo(), d.hi(), d.m(), tol).step(d, stats);
}

GridCDF uniform_on_grid(double lo, double hi, int m, double a, double b) {
    if (!(a < b)) throw DomainError("uniform law needs a < b");
    return GridCDF::tabulate(lo, hi, m, [&](double x) { return std::clamp((x - a) / (b - a), 0.0, 1.0); });
}

std::pair<double, double> default_domain(double c, long n_max) {
    const double tau = std::cbrt(c * static_cast<double>(std::max(1L, n_max)));
    return {-1.5 * tau - 8.0, 1.5 * tau + 8.0};
}

EvolveRun run(const ModelSpec& model, const GridCDF* init, double x0, long n_steps, std::vector<long> checkpoints,
              const EvolveOptions& opt) {
    EvolveRun res;
    const auto rep = classify(model, opt.tol);
    if (rep.regime != Regime::cbrt)
        res.warnings.push_back(std::string("regime is ") + to_string(rep.regime) +
                               ", the cubic limit and (c* n)^(1/3) scaling are not expected to apply");
    try {
        res.c_star = c_star(model, opt.tol);
    } catch (const DegenerateModel&) {
        res.warnings.push_back("degenerate model: c* = 0, checkpoints use scale 1");
        res.c_star = 0.0;
    }
    const double c = res.c_star > 0.0 ? res.c_star : 1.0;
    auto [lo, hi] = default_domain(c, n_steps);
    lo += std::min(0.0, x0);
    hi += std::max(0.0, x0);
    if (init) {
        lo = std::min(lo, init->lo());
        hi = std::max(hi, init->hi());
    }
    res.lo = lo;
    res.hi = hi;
    const int m = opt.m;
    const double h = (hi - lo) / m;
    GridCDF d = init ? GridCDF::tabulate(lo, hi, m, [&](double x) { return init->at(x); })
                     : uniform_on_grid(lo, hi, m, x0 - h, x0 + h);

    std::sort(checkpoints.begin(), checkpoints.end());
    checkpoints.erase(std::unique(checkpoints.begin(), checkpoints.end()), checkpoints.end());
    Stepper st(model, lo, hi, m, opt.tol, opt.threads);
    double budget = 0.0;
    auto record = [&](long n) {
        const double scale = res.c_star > 0.0 ? std::cbrt(res.c_star * static_cast<double>(n)) : 1.0;
        auto r = d.rescale(scale);
        res.checkpoints.push_back({n, scale, r, ks(r, LimitLaw::cubic), budget});
    };
    std::size_t next = 0;
    while (next < checkpoints.size() && checkpoints[next] <= 0) ++next;
    for (long n = 1; n <= n_steps; ++n) {
        StepStats s;
        d = st.step(d, &s);
        budget += s.clamp_budget;
        if (budget > opt.clamp_abort)
            throw NumericalError("clamp budget " + fmt(budget) + " exceeded at n = " + std::to_string(n));
        while (next < checkpoints.size() && checkpoints[next] == n) {
            record(n);
            ++next;
        }
    }
    return res;
}

}  // namespace homsys
