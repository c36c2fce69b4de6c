#include "homsys/dist.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "homsys/errors.hpp"

namespace homsys {

GridCDF::GridCDF(double lo, double hi, Eigen::ArrayXd cdf, double atom_neg_inf)
    : lo_(lo), hi_(hi), cdf_(std::move(cdf)), atom_(atom_neg_inf) {
    if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi)) throw DomainError("GridCDF needs finite lo < hi");
    if (cdf_.size() < 2) throw DomainError("GridCDF needs at least one cell");
    if (!(atom_ >= 0.0 && atom_ <= 1.0)) throw DomainError("atom at -inf must be a probability");
    const Eigen::Index m = cdf_.size() - 1;
    if (std::abs(cdf_[0] - atom_) > 1e-12) throw DomainError("cdf[0] must equal the atom at -inf");
    if (std::abs(cdf_[m] - 1.0) > 1e-12) throw DomainError("cdf must reach 1 at the right end");
    for (Eigen::Index k = 0; k < m; ++k)
        if (!(cdf_[k + 1] >= cdf_[k])) throw DomainError("cdf must be nondecreasing");
    cdf_[0] = atom_;
    cdf_[m] = 1.0;
}

GridCDF GridCDF::from_samples(std::span<const double> samples, int m, double pad) {
    if (samples.empty()) throw DomainError("from_samples needs at least one sample");
    if (!(pad > 0.0)) throw DomainError("from_samples needs pad > 0");
    if (m < 1) throw DomainError("from_samples needs m >= 1");
    std::vector<double> s(samples.begin(), samples.end());
    std::sort(s.begin(), s.end());
    const double mn = s.front(), mx = s.back();
    if (mn == mx) {
        GridCDF g(mn - pad, mn + pad, Eigen::Array3d(0.0, 1.0, 1.0));
        g.degenerate_ = true;
        return g;
    }
    const double lo = mn - pad, hi = mx + pad, h = (hi - lo) / m;
    Eigen::ArrayXd c(m + 1);
    std::size_t i = 0;
    const double n = static_cast<double>(s.size());
    for (int k = 0; k <= m; ++k) {
        const double xk = k == m ? hi : lo + h * k;
        while (i < s.size() && s[i] <= xk) ++i;
        c[k] = static_cast<double>(i) / n;
    }
    c[m] = 1.0;
    return GridCDF(lo, hi, std::move(c));
}

double GridCDF::at(double x) const {
    if (x <= lo_) return atom_;
    if (x >= hi_) return 1.0;
    const double u = (x - lo_) / h();
    const int k = std::min(static_cast<int>(u), m() - 1);
    const double w = u - k;
    return (1.0 - w) * cdf_[k] + w * cdf_[k + 1];
}

double GridCDF::quantile(double q) const {
    if (q <= cdf_[0]) return lo_;
    const int mm = m();
    const auto* begin = cdf_.data();
    const auto* it = std::lower_bound(begin, begin + mm + 1, q);
    if (it == begin + mm + 1) return hi_;
    const int k = static_cast<int>(it - begin);
    const double c0 = cdf_[k - 1], c1 = cdf_[k];
    const double w = c1 > c0 ? (q - c0) / (c1 - c0) : 1.0;
    return x(k - 1) + w * h();
}

Eigen::ArrayXd GridCDF::cell_mass() const {
    const Eigen::Index m = cdf_.size() - 1;
    return cdf_.tail(m) - cdf_.head(m);
}

Eigen::ArrayXd GridCDF::density() const {
    const int mm = m();
    const double hh = h();
    Eigen::ArrayXd d(mm + 1);
    d[0] = (cdf_[1] - cdf_[0]) / hh;
    d[mm] = (cdf_[mm] - cdf_[mm - 1]) / hh;
    if (mm > 1) d.segment(1, mm - 1) = (cdf_.tail(mm - 1) - cdf_.head(mm - 1)) / (2.0 * hh);
    return d;
}

GridCDF GridCDF::rescale(double s) const {
    if (!(s > 0.0)) throw DomainError("rescale needs s > 0");
    GridCDF g(lo_ / s, hi_ / s, cdf_, atom_);
    g.degenerate_ = degenerate_;
    return g;
}

GridCDF GridCDF::reflect() const {
    if (atom_ != 0.0) throw DomainError("reflect needs a law without an atom at -inf");
    const Eigen::ArrayXd c = 1.0 - cdf_.reverse();
    return GridCDF(-hi_, -lo_, c);
}

const char* to_string(LimitLaw law) { return law == LimitLaw::cubic ? "cubic" : "linear_half"; }

double limit_cdf(LimitLaw law, double y) {
    if (law == LimitLaw::cubic) {
        if (y <= -1.0) return 0.0;
        if (y >= 1.0) return 1.0;
        return (2.0 + 3.0 * y - y * y * y) / 4.0;
    }
    if (y <= 0.0) return 0.0;
    if (y >= 1.0) return 1.0;
    return y * y;
}

double limit_density(LimitLaw law, double y) {
    if (law == LimitLaw::cubic) return std::abs(y) < 1.0 ? 0.75 * (1.0 - y * y) : 0.0;
    return y > 0.0 && y < 1.0 ? 2.0 * y : 0.0;
}

double ks(const GridCDF& a, LimitLaw b) {
    double d = 0.0;
    for (int k = 0; k <= a.m(); ++k) d = std::max(d, std::abs(a.cdf()[k] - limit_cdf(b, a.x(k))));
    return d;
}

double ks(const GridCDF& a, const GridCDF& b) {
    double d = 0.0;
    for (int k = 0; k <= a.m(); ++k) d = std::max(d, std::abs(a.cdf()[k] - b.at(a.x(k))));
    for (int k = 0; k <= b.m(); ++k) d = std::max(d, std::abs(b.cdf()[k] - a.at(b.x(k))));
    return d;
}

namespace {
template <class Cdf>
double ks_samples(std::span<const double> s, Cdf&& F) {
    if (s.empty()) throw DomainError("ks needs a nonempty sample");
    const double n = static_cast<double>(s.size());
    double d = 0.0;
    std::size_t i = 0;
    while (i < s.size()) {
        std::size_t j = i;
        while (j < s.size() && s[j] == s[i]) ++j;  // ties jump together
        const double f = F(s[i]);
        d = std::max({d, std::abs(static_cast<double>(i) / n - f), std::abs(static_cast<double>(j) / n - f)});
        i = j;
    }
    return d;
}
}  // namespace

double ks(std::span<const double> sorted, LimitLaw law) {
    return ks_samples(sorted, [law](double x) { return limit_cdf(law, x); });
}

double ks(std::span<const double> sorted, const GridCDF& ref) {
    return ks_samples(sorted, [&](double x) { return ref.at(x); });
}

double ks_two_sample(std::span<const double> a, std::span<const double> b) {
    if (a.empty() || b.empty()) throw DomainError("ks needs nonempty samples");
    const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < a.size() && j < b.size()) {
        const double x = std::min(a[i], b[j]);
        while (i < a.size() && a[i] == x) ++i;
        while (j < b.size() && b[j] == x) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    return d;
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_csv(std::ostream& os, const GridCDF& d, LimitLaw law) {
    const auto dens = d.density();
    os << "x,cdf,cdf_limit,density\n";
    for (int k = 0; k <= d.m(); ++k) {
        const double xk = d.x(k);
        os << fmt(xk) << ',' << fmt(d.cdf()[k]) << ',' << fmt(limit_cdf(law, xk)) << ',' << fmt(dens[k]) << '\n';
    }
}

nlohmann::json summary_json(long n, double scale, double ks_value, const GridCDF& d) {
    nlohmann::json q;
    const std::pair<const char*, double> levels[] = {{"0.05", 0.05}, {"0.25", 0.25}, {"0.5", 0.5}, {"0.75", 0.75}, {"0.95", 0.95}};
    for (auto [key, p] : levels) q[key] = d.quantile(p);
    return {{"n", n}, {"scale", scale}, {"ks", ks_value}, {"quantiles", q}};
}

}  // namespace homsys
