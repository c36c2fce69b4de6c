#include "homsys/proofcheck.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>

#include "homsys/errors.hpp"
#include "homsys/evolve.hpp"
#include "homsys/parallel.hpp"
#include "homsys/rng.hpp"

namespace homsys {

ProofParams ProofParams::defaults(double c_star, double eta, double delta, double delta1) {
    ProofParams p;
    p.eta = eta;
    p.delta = delta;
    p.delta1 = delta1;
    p.rho = 1.0 / (1.0 + eta / 2.0);
    p.rho_tilde = p.rho / 2.0;
    p.kappa = (1.0 - p.rho) / 4.0;
    p.c_star = c_star;
    p.check();
    return p;
}

void ProofParams::check() const {
    auto need = [](bool ok, const char* what) {
        if (!ok) throw DomainError(std::string("proof parameters: ") + what);
    };
    need(eta > 0 && eta <= 1, "eta must lie in (0, 1]");
    need(delta > 0 && delta < 1, "delta must lie in (0, 1)");
    need(delta1 > 0 && delta1 < delta / 9, "delta1 must lie in (0, delta/9)");
    need(rho > 1 / (1 + eta) && rho < 1, "rho must lie in (1/(1+eta), 1)");
    need(kappa > 0 && kappa < std::min({2 - 2 * rho, 1 - 2 * rho_tilde, eta}) / 3,
         "kappa must lie in (0, min(2-2rho, 1-2rho~, eta)/3)");
    need(rho_tilde > 0 && rho_tilde < (1 - 3 * kappa) / 2, "rho~ must lie in (0, (1-3kappa)/2)");
    need(c_star > 0 && std::isfinite(c_star), "c* must be positive");
}

namespace {

double tau_of(const ProofParams& p, long n) { return std::cbrt(p.c_star * double(n)); }

// x^2 / (x^2 s - s^3/3) with s = x - x^rho~
double normalizer(double x, double rt) {
    const double s = x - std::pow(x, rt);
    return x * x / (x * x * s - s * s * s / 3.0);
}

}  // namespace

ScheduleRow schedule(const ProofParams& p, long n) {
    if (n < 1) throw DomainError("schedule needs n >= 1");
    ScheduleRow r;
    r.n = n;
    r.tau = tau_of(p, n);
    r.sigma = r.tau - std::pow(r.tau, p.rho);
    r.beta = tau_of(p, n + 1) - r.tau;
    r.q = p.delta1 * (1.0 - std::pow(double(n), -p.kappa));
    const double norm = r.tau * r.tau * r.sigma - r.sigma * r.sigma * r.sigma / 3.0;
    if (!(r.sigma > 0) || !(norm > 0))
        throw ScheduleInfeasible("schedule: sigma_n <= 0 at n = " + std::to_string(n));
    r.a = 1.0 / (2.0 * norm);
    const double target = r.tau * r.tau / norm;
    auto h = [&](double x) {
        const double s = x - std::pow(x, p.rho_tilde);
        if (!(s > 0)) return std::numeric_limits<double>::infinity();
        return normalizer(x, p.rho_tilde) - target;
    };
    double lo = r.sigma, hi = r.tau;
    const double hlo = h(lo), hhi = h(hi);
    if (!(hlo > 0 && hhi <= 0))
        throw ScheduleInfeasible("schedule: no tau~ root in [sigma_n, tau_n] at n = " + std::to_string(n) +
                                 " (h(sigma) = " + std::to_string(hlo) + ", h(tau) = " + std::to_string(hhi) + ")");
    while (hi - lo > 1e-12 * hi) {
        const double mid = 0.5 * (lo + hi);
        (h(mid) > 0 ? lo : hi) = mid;
    }
    r.tau_tilde = hi;
    r.sigma_tilde = r.tau_tilde - std::pow(r.tau_tilde, p.rho_tilde);
    r.a_tilde = r.a * r.tau * r.tau / (r.tau_tilde * r.tau_tilde);
    return r;
}

double psi_n(const ScheduleRow& r, double v) {
    if (v >= 0) return v < r.sigma ? r.a * (r.tau * r.tau - v * v) : 0.0;
    return v >= -r.sigma_tilde ? r.a_tilde * (r.tau_tilde * r.tau_tilde - v * v) : 0.0;
}

double Psi_n(const ScheduleRow& r, double v) {
    if (v >= r.sigma) return 1.0;
    if (v >= 0) return 0.5 + r.a * r.tau * r.tau * v - r.a * v * v * v / 3.0;
    if (v < -r.sigma_tilde) return 0.0;
    const double s = r.sigma_tilde;
    return r.a_tilde * r.tau_tilde * r.tau_tilde * (v + s) - r.a_tilde / 3.0 * (v * v * v + s * s * s);
}

double delta_Psi(const ProofParams& p, const ScheduleRow& r, const ScheduleRow& r1, double v) {
    return Psi_n(r1, v + p.delta * r.beta) - Psi_n(r, v);
}

double expected_lambda(const ModelSpec& m, const ScheduleRow& r, double v, double tol) {
    const std::array<double, 3> breaks{-r.sigma_tilde, 0.0, r.sigma};
    auto dens = [&](double x) { return psi_n(r, x); };
    auto cdf = [&](double x) { return Psi_n(r, x); };
    double s = 0;
    for (const auto& at : m.atoms)
        s += at.weight * lambda_integral(dens, cdf, at.f, v, -r.sigma_tilde, r.sigma, tol, breaks);
    return s;
}

std::vector<double> default_vgrid(const ProofParams& p, long n, std::size_t m) {
    const auto r = schedule(p, n), r1 = schedule(p, n + 1);
    const double lo = -r.sigma_tilde - 2.0, hi = r1.sigma - p.delta * r.beta;
    std::vector<double> v(m);
    for (std::size_t i = 0; i < m; ++i) v[i] = lo + (hi - lo) * double(i) / double(m);
    return v;
}

LambdaReport lambda_condition(const ModelSpec& m, const ProofParams& p, long n, std::span<const double> v_grid,
                              double tol, int threads) {
    if (classify(m).regime != Regime::cbrt) throw DomainError("lambda_condition needs a cube-root model");
    const auto r = schedule(p, n), r1 = schedule(p, n + 1);
    const double vmax = r1.sigma - p.delta * r.beta;
    for (double v : v_grid)
        if (!(v < vmax)) throw DomainError("v grid must lie below sigma_{n+1} - delta beta_n");
    const double dq = (1 - r.q) * (1 - r.q);
    const double c_dpsi = (1 - r1.q) / dq, c_q = (r1.q - r.q) / dq;

    LambdaReport out;
    out.n = n;
    out.v.assign(v_grid.begin(), v_grid.end());
    out.residual.resize(v_grid.size());
    parallel_for(v_grid.size(), threads, [&](std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i) {
            const double v = v_grid[i];
            out.residual[i] = expected_lambda(m, r, v, tol) + c_dpsi * delta_Psi(p, r, r1, v) +
                              c_q * (1 - Psi_n(r, v));
        }
    });
    const auto it = std::min_element(out.residual.begin(), out.residual.end());
    out.min_residual = it == out.residual.end() ? 0.0 : *it;
    out.argmin = it == out.residual.end() ? 0.0 : out.v[std::size_t(it - out.residual.begin())];
    return out;
}

N0Scan find_n0(const ModelSpec& m, const ProofParams& p, long n_lo, long n_hi, std::size_t grid, int samples,
               double tol, int threads) {
    N0Scan scan;
    long n0 = 1;
    while (n0 < n_lo) n0 *= 2;
    for (; n0 <= n_hi; n0 *= 2) {
        bool ok = true;
        for (int k = 0; k < samples && ok; ++k) {
            const long n = n0 + long(std::llround(double(n0) * k / double(std::max(samples - 1, 1))));
            LambdaReport rep;
            try {
                const auto vg = default_vgrid(p, n, grid);
                rep = lambda_condition(m, p, n, vg, tol, threads);
            } catch (const ScheduleInfeasible&) {
                rep.n = n;
                rep.min_residual = -std::numeric_limits<double>::infinity();
            }
            rep.v.clear();
            rep.residual.clear();
            ok = rep.min_residual >= 0;
            scan.rows.push_back(rep);
        }
        if (ok) {
            scan.n0 = n0;
            break;
        }
    }
    return scan;
}

double c0_from_lambda0(const ProofParams& p, long n0, double lambda0) {
    if (!(lambda0 > 0)) throw DomainError("lambda0 must be positive");
    return -std::log(lambda0) + schedule(p, n0).sigma;
}

double lower_bound(const ProofParams& p, long n, double x, double c0) {
    const auto r = schedule(p, n);
    return (1 - r.q) * (1 - Psi_n(r, (x + p.delta) * r.tau + c0));
}

double lower_bound_limit(const ProofParams& p, double x) {
    const double y = std::clamp(x + p.delta, -1.0, 1.0);
    return (1 - p.delta1) * (2 - 3 * y + y * y * y) / 4;
}

double law_V(const ModelSpec& m, const ProofParams&, const ScheduleRow& r, double v, double tol) {
    const double P = r.q + (1 - r.q) * Psi_n(r, v);
    const std::array<double, 3> breaks{-r.sigma_tilde, 0.0, r.sigma};
    auto dens = [&](double x) { return psi_n(r, x); };
    auto cdf = [&](double x) { return Psi_n(r, x); };
    double s = 0;
    for (const auto& at : m.atoms) {
        const double base = at.f.eps() > 0 ? P * P : 2 * P - P * P;
        const double lam = lambda_integral(dens, cdf, at.f, v, -r.sigma_tilde, r.sigma, tol, breaks);
        s += at.weight * (base - (1 - r.q) * (1 - r.q) * lam);
    }
    return s;
}

namespace {

// Inverse of q + (1-q) Psi_n; returns -inf on the atom.
double sample_Z(const ScheduleRow& r, double u) {
    if (u < r.q) return -std::numeric_limits<double>::infinity();
    const double w = (u - r.q) / (1 - r.q);
    double lo = -r.sigma_tilde, hi = r.sigma;
    for (int i = 0; i < 100 && hi - lo > 1e-13 * (1 + std::abs(hi)); ++i) {
        const double mid = 0.5 * (lo + hi);
        (Psi_n(r, mid) < w ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

// log F(e^x, e^y) with -inf inputs handled by the boundary limits
double apply_log(const HFunction& f, double x, double y) {
    const bool xi = std::isinf(x), yi = std::isinf(y);
    if (xi && yi) return -std::numeric_limits<double>::infinity();
    if (xi || yi) return f.eps() > 0 ? (xi ? y : x) : -std::numeric_limits<double>::infinity();
    return f.eval_log(x, y);
}

}  // namespace

DominationReport domination_check(const ModelSpec& m, const ProofParams& p, long n, std::size_t N,
                                  std::uint64_t seed, std::span<const double> v_grid, int threads) {
    const auto r = schedule(p, n), r1 = schedule(p, n + 1);
    DominationReport out;
    out.n = n;
    out.v.assign(v_grid.begin(), v_grid.end());
    out.law_V.resize(v_grid.size());
    out.law_Z1.resize(v_grid.size());
    parallel_for(v_grid.size(), threads, [&](std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i) {
            const double v = v_grid[i];
            out.law_V[i] = law_V(m, p, r, v);
            out.law_Z1[i] = r1.q + (1 - r1.q) * Psi_n(r1, v + p.delta * r.beta);
        }
    });
    out.min_gap = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < v_grid.size(); ++i) {
        const double gap = out.law_Z1[i] - out.law_V[i];
        out.min_gap = std::min(out.min_gap, gap);
        if (gap < -1e-12) ++out.violations;
    }

    // Monte Carlo of V_n against the formula at every finite sample point.
    std::vector<double> s(N);
    parallel_for(N, threads, [&](std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i) {
            CounterRng rng(seed, static_cast<std::uint32_t>(i), 0);
            const double z = sample_Z(r, rng.uniform());
            const double zh = sample_Z(r, rng.uniform());
            const auto& at = m.atoms[sample_atom(m, rng.uniform())];
            s[i] = apply_log(at.f, z, zh);
        }
    });
    std::sort(s.begin(), s.end());
    // the law is tabulated on a fine grid over its finite support and read by
    // linear interpolation; the interpolation error is far below 1/sqrt(N)
    constexpr std::size_t kTab = 4096;
    const double lo = -r.sigma_tilde - max_r(m), hi = r.sigma + max_r(m);
    std::vector<double> tab(kTab + 1);
    parallel_for(kTab + 1, threads, [&](std::size_t b, std::size_t e) {
        for (std::size_t k = b; k < e; ++k) tab[k] = law_V(m, p, r, lo + (hi - lo) * double(k) / double(kTab), 1e-10);
    });
    auto law = [&](double x) {
        if (x <= lo) return law_V(m, p, r, x, 1e-10);
        if (x >= hi) return 1.0;
        const double u = (x - lo) / (hi - lo) * double(kTab);
        const auto k = std::min<std::size_t>(static_cast<std::size_t>(u), kTab - 1);
        const double w = u - double(k);
        return (1 - w) * tab[k] + w * tab[k + 1];
    };
    std::vector<double> cdf(N, 0.0);
    for (std::size_t i = 0; i < N; ++i)
        if (std::isfinite(s[i])) cdf[i] = law(s[i]);
    double d = 0;
    std::size_t i = 0;
    while (i < N && !std::isfinite(s[i])) ++i;
    // atom at -infinity: the law puts q-dependent mass there
    if (i > 0 && i < N) d = std::max(d, std::abs(double(i) / double(N) - cdf[i]));
    for (; i < N;) {
        std::size_t j = i;
        while (j < N && s[j] == s[i]) ++j;
        d = std::max({d, std::abs(double(i) / double(N) - cdf[i]), std::abs(double(j) / double(N) - cdf[i])});
        i = j;
    }
    out.ks_formula_vs_mc = d;
    out.ks_budget = 3.0 / std::sqrt(double(N));
    return out;
}

bool schedule_ordering_holds(const ProofParams& p, const ScheduleRow& r, const ScheduleRow& r1) {
    const bool order = r.sigma <= r.sigma_tilde && r.sigma_tilde < r.tau_tilde && r.tau_tilde <= r.tau &&
                       r.tau < r.tau_tilde + 1.5 * std::pow(r.tau, 2 * p.rho - 1);
    const double da = r.a_tilde - r.a;
    const bool coeff = da >= 0 && da <= 3 * std::pow(r.tau, 2 * p.rho - 5);
    const double ds = r1.sigma - r.sigma;
    const bool incr = p.delta * r.beta <= ds && ds <= r.beta && r1.sigma + p.delta * r.beta < r.tau;
    return order && coeff && incr;
}

}  // namespace homsys
