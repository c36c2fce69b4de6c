#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "homsys/models.hpp"

namespace homsys {

/// Parameters of the lower-bound construction.
struct ProofParams {
    double eta = 1.0;
    double delta = 0.5;
    double delta1 = 0.05;
    double rho = 2.0 / 3.0;
    double rho_tilde = 1.0 / 3.0;
    double kappa = 1.0 / 12.0;
    double c_star = 4.5;

    /// rho = 1/(1 + eta/2), rho_tilde = rho/2, kappa = (1 - rho)/4.
    static ProofParams defaults(double c_star, double eta = 1.0, double delta = 0.5, double delta1 = 0.05);
    /// Throws DomainError naming the first violated interval constraint.
    void check() const;
};

struct ScheduleRow {
    long n = 0;
    double tau = 0, sigma = 0, a = 0;
    double tau_tilde = 0, sigma_tilde = 0, a_tilde = 0;
    double beta = 0, q = 0;
};

/// Throws ScheduleInfeasible when the normalization identity has no root in
/// [sigma, tau] (n too small for the parameters).
ScheduleRow schedule(const ProofParams& p, long n);

/// Piecewise-quadratic density: a(tau^2 - v^2) on [0, sigma), a~(tau~^2 - v^2)
/// on [-sigma~, 0). Its CDF is exact; Psi_n(0) = 1/2.
double psi_n(const ScheduleRow& r, double v);
double Psi_n(const ScheduleRow& r, double v);

/// Psi_{n+1}(v + delta beta_n) - Psi_n(v).
double delta_Psi(const ProofParams& p, const ScheduleRow& r, const ScheduleRow& r1, double v);

/// E[Lambda_{psi_n, F}(v)] over the model atoms.
double expected_lambda(const ModelSpec& m, const ScheduleRow& r, double v, double tol = 1e-11);

/// 'm' points uniformly on [-sigma~_n - 2, sigma_{n+1} - delta beta_n).
std::vector<double> default_vgrid(const ProofParams& p, long n, std::size_t m = 400);

struct LambdaReport {
    long n = 0;
    double min_residual = 0;
    double argmin = 0;
    std::vector<double> v, residual;
};

/// Residual E[Lambda] + (1-q_{n+1})/(1-q_n)^2 dPsi + (q_{n+1}-q_n)/(1-q_n)^2 (1 - Psi)
/// at each grid point. Requires a cube-root model and v < sigma_{n+1} - delta beta_n.
LambdaReport lambda_condition(const ModelSpec& m, const ProofParams& p, long n, std::span<const double> v_grid,
                              double tol = 1e-11, int threads = 1);

struct N0Scan {
    std::optional<long> n0;
    std::vector<LambdaReport> rows;  // v and residual vectors dropped
};

/// Tries dyadic candidates n0 = 2^k in [n_lo, n_hi]; a candidate is accepted
/// when 'samples' evenly spaced n in [n0, 2 n0] (endpoints included) all have a
/// nonnegative minimum residual on an m-point default grid.
N0Scan find_n0(const ModelSpec& m, const ProofParams& p, long n_lo, long n_hi, std::size_t grid = 400,
               int samples = 16, double tol = 1e-11, int threads = 1);

/// c0 = -log lambda0 + sigma_{n0}, for lambda0 with P(X_0 <= lambda0) < q_{n0}.
double c0_from_lambda0(const ProofParams& p, long n0, double lambda0);

/// (1 - q_n)[1 - Psi_n((x + delta) tau_n + c0)].
double lower_bound(const ProofParams& p, long n, double x, double c0 = 0.0);
/// (1 - delta1)(2 - 3y + y^3)/4 with y = x + delta clipped to [-1, 1].
double lower_bound_limit(const ProofParams& p, double x);

struct DominationReport {
    long n = 0;
    double ks_formula_vs_mc = 0;  // sup over sample points
    double ks_budget = 0;         // 3 / sqrt(N)
    double min_gap = 0;           // min over grid of P(Z_{n+1} < v + delta beta) - P(V_n < v)
    std::size_t violations = 0;
    std::vector<double> v, law_V, law_Z1;
};

/// P(V_n < v) for V_n = log F(e^Z, e^Z^), Z with atom q_n at -infinity.
double law_V(const ModelSpec& m, const ProofParams& p, const ScheduleRow& r, double v, double tol = 1e-11);

DominationReport domination_check(const ModelSpec& m, const ProofParams& p, long n, std::size_t N,
                                  std::uint64_t seed, std::span<const double> v_grid, int threads = 1);

/// Ordering and increment relations that hold for n beyond a threshold.
bool schedule_ordering_holds(const ProofParams& p, const ScheduleRow& r, const ScheduleRow& r1);

/// Smallest dyadic n in [1, n_max] from which pred holds at every later dyadic
/// point up to n_max; nullopt if it fails at n_max.
template <class Pred>
std::optional<long> dyadic_threshold(long n_max, Pred&& pred) {
    std::optional<long> first;
    for (long n = 1; n <= n_max; n *= 2) {
        bool ok = false;
        try {
            ok = pred(n);
        } catch (const std::exception&) {
            ok = false;
        }
        if (!ok) first.reset();
        else if (!first) first = n;
    }
    return first;
}

}  // namespace homsys
