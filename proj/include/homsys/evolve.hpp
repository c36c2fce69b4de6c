#pragma once

#include <span>
#include <string>
#include <vector>

#include "homsys/dist.hpp"
#include "homsys/hfun.hpp"
#include "homsys/models.hpp"
#include "homsys/quadrature.hpp"

namespace homsys {

/// int_0^inf psi(v - eps t) [Psi(v) - Psi(v - eps T_F(t))] dt for callable
/// psi/Psi whose density vanishes outside [lo, hi]. breaks are v-space kinks of psi.
template <class Dens, class Cdf>
double lambda_integral(const Dens& psi, const Cdf& Psi, const HFunction& f, double v, double lo, double hi,
                       double tol, std::span<const double> breaks = {}) {
    if (f.trivial()) return 0.0;
    const int e = f.eps();
    // t range where the density factor can be nonzero
    double t_max = e > 0 ? v - lo : hi - v;
    if (!(t_max > 0.0)) return 0.0;
    const double t_tol = tol * 1e-3;
    // past r_F, T is nonincreasing and reaches 0 for compactly supported profiles
    const double r = r_of(f);
    if (f.g().support_radius() < 1e300) {
        double a = r, b = std::max(2.0 * r, 1.0);
        while (t_of(f, b, t_tol) > 0.0) b *= 2.0;
        // T(b) == 0; shrink to the first zero
        for (int i = 0; i < 200 && b - a > 1e-13 * b; ++i) {
            const double mid = 0.5 * (a + b);
            (t_of(f, mid, t_tol) > 0.0 ? a : b) = mid;
        }
        t_max = std::min(t_max, b);
    }
    const double Pv = Psi(v);
    auto integrand = [&](double t) {
        const double T = t_of(f, t, t_tol, t_tol);
        if (T == 0.0) return 0.0;
        return psi(v - e * t) * (Pv - Psi(v - e * T));
    };
    // breaks are v-space kinks of psi; map them to t
    std::vector<double> cuts{r};
    for (double b : breaks) cuts.push_back(e > 0 ? v - b : b - v);
    return quad::integrate(integrand, 0.0, t_max, tol, cuts, 20000).value;
}

/// Lambda at v from a nodal density psi and its CDF Psi on the same grid.
/// Throws InconsistentDensity when the trapezoid integral of psi departs
/// from Psi by more than 1e-3.
double lambda_of(std::span<const double> psi, const GridCDF& Psi, const HFunction& f, double v, double tol = 1e-9);

struct StepStats {
    double clamp_budget = 0.0;  // total size of negative increments removed
    double left_mass = 0.0;     // output CDF at lo before pinning
    double right_deficit = 0.0; // 1 - output CDF at hi before pinning
};

/// One step of the law recursion on a fixed grid. Per atom the new CDF is
/// Psi^2 - Lambda (eps = +1) or 2 Psi - Psi^2 - Lambda (eps = -1), with
/// Lambda discretised by cell masses against T at cell midpoints.
class Stepper {
public:
    Stepper(ModelSpec model, double lo, double hi, int m, double tol = 1e-10, int threads = 1);

    GridCDF step(const GridCDF& d, StepStats* stats = nullptr) const;
    /// Lambda of one atom at every node.
    Eigen::ArrayXd lambda(const GridCDF& d, std::size_t atom) const;

    const ModelSpec& model() const { return model_; }
    /// Number of midpoint T values kept for the atom.
    std::size_t cutoff(std::size_t atom) const { return shift_[atom].size(); }

private:
    struct Shift {
        int cells;     // floor(T / h)
        double frac;   // T / h - cells
    };
    ModelSpec model_;
    double lo_, hi_, h_;
    int m_;
    double tol_;
    int threads_;
    std::vector<std::vector<Shift>> shift_;
};

GridCDF step(const GridCDF& d, const ModelSpec& model, double tol = 1e-10, StepStats* stats = nullptr);

/// Uniform law on [a, b] tabulated on [lo, hi].
GridCDF uniform_on_grid(double lo, double hi, int m, double a, double b);

struct EvolveCheckpoint {
    long n = 0;
    double scale = 1.0;
    GridCDF rescaled;
    double ks = 0.0;
    double clamp_budget = 0.0;  // accumulated since n = 0
};

struct EvolveOptions {
    int m = 8192;
    double tol = 1e-10;
    int threads = 1;
    double clamp_abort = 1e-6;
};

struct EvolveRun {
    std::vector<EvolveCheckpoint> checkpoints;
    std::vector<std::string> warnings;
    double c_star = 0.0;
    double lo = 0.0, hi = 0.0;
};

/// Grid [-1.5 tau - 8, 1.5 tau + 8] with tau = (c* n_max)^(1/3).
std::pair<double, double> default_domain(double c, long n_max);

/// Evolves from a point mass at log X_0 = x0 (smeared over two cells) or
/// from init re-tabulated on the run grid; rescales by (c* n)^(1/3).
EvolveRun run(const ModelSpec& model, const GridCDF* init, double x0, long n_steps, std::vector<long> checkpoints,
              const EvolveOptions& opt = {});

}  // namespace homsys
