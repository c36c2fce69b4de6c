#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include <Eigen/Core>
#include <json.hpp>

namespace homsys {

/// CDF of a log-scale variable sampled on a uniform grid lo + k h, k = 0..m,
/// linearly interpolated between nodes. cdf[0] is the mass at -inf.
class GridCDF {
public:
    GridCDF() = default;
    /// Throws DomainError unless lo < hi, m >= 1, cdf is nondecreasing,
    /// cdf[0] = atom and cdf[m] = 1 within 1e-12. The ends are then set exactly.
    GridCDF(double lo, double hi, Eigen::ArrayXd cdf, double atom_neg_inf = 0.0);

    template <class F>
    static GridCDF tabulate(double lo, double hi, int m, F&& cdf_fn) {
        Eigen::ArrayXd c(m + 1);
        const double h = (hi - lo) / m;
        for (int k = 0; k <= m; ++k) c[k] = cdf_fn(lo + h * k);
        return GridCDF(lo, hi, std::move(c));
    }

    /// Empirical CDF over [min - pad, max + pad]. All-equal samples give a
    /// two-cell grid with the degenerate flag set.
    static GridCDF from_samples(std::span<const double> samples, int m, double pad);

    double lo() const { return lo_; }
    double hi() const { return hi_; }
    int m() const { return static_cast<int>(cdf_.size()) - 1; }
    double h() const { return (hi_ - lo_) / m(); }
    double x(int k) const { return lo_ + h() * k; }
    double atom_neg_inf() const { return atom_; }
    bool degenerate() const { return degenerate_; }
    const Eigen::ArrayXd& cdf() const { return cdf_; }

    double at(double x) const;
    /// Smallest x with at(x) >= q; flat stretches resolve to their left end.
    double quantile(double q) const;
    /// Mass in each cell, cdf[k+1] - cdf[k].
    Eigen::ArrayXd cell_mass() const;
    /// Central-difference density at nodes, one-sided at the ends.
    Eigen::ArrayXd density() const;
    /// Law of X / s.
    GridCDF rescale(double s) const;
    /// Law of -X on [-hi, -lo]; requires no atom at -inf.
    GridCDF reflect() const;

private:
    double lo_ = 0.0, hi_ = 1.0;
    Eigen::ArrayXd cdf_;
    double atom_ = 0.0;
    bool degenerate_ = false;
};

enum class LimitLaw { cubic, linear_half };
const char* to_string(LimitLaw law);

/// (2 + 3y - y^3)/4 on [-1, 1] or y^2 on [0, 1], clamped outside.
double limit_cdf(LimitLaw law, double y);
double limit_density(LimitLaw law, double y);

/// Sup distance over the grid nodes.
double ks(const GridCDF& a, LimitLaw b);
/// Sup distance over the union of both node sets.
double ks(const GridCDF& a, const GridCDF& b);
/// Exact distance between the empirical CDF of sorted samples and a continuous law.
double ks(std::span<const double> sorted, LimitLaw law);
double ks(std::span<const double> sorted, const GridCDF& ref);
/// Two-sample distance; both inputs sorted.
double ks_two_sample(std::span<const double> a, std::span<const double> b);

/// Columns x,cdf,cdf_limit,density.
void write_csv(std::ostream& os, const GridCDF& d, LimitLaw law);
nlohmann::json summary_json(long n, double scale, double ks_value, const GridCDF& d);

/// Fixed-width text for a double that round-trips exactly.
std::string fmt(double v);

}  // namespace homsys
