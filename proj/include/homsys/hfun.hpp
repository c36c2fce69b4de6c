#pragma once

#include <string>
#include <vector>

namespace homsys {

/// Log-scale profile G of a function in the class H. Nonnegative, 1-Lipschitz
/// and unimodal about 0, vanishing at both infinities.
class GFunction {
public:
    enum class Kind { zero, softplus, tent, table };

    static GFunction zero();
    /// s * log(1 + exp(-|z|/s)), the profile of the power mean with |alpha| = s.
    static GFunction softplus(double s);
    /// max(0, 1 - s_plus z) for z >= 0 and max(0, 1 + s_minus z) for z < 0.
    static GFunction tent(double s_plus, double s_minus);
    /// Piecewise-linear over the uniform grid lo + k (hi - lo)/(size - 1).
    /// Zero outside [lo, hi]. Checked by validate_table, not here.
    static GFunction table(double lo, double hi, std::vector<double> values);

    double operator()(double z) const;
    GFunction reflect() const;  // z -> g(-z)

    Kind kind() const { return kind_; }
    bool is_zero() const;
    /// Points where the profile has a kink, in increasing order.
    std::vector<double> kinks() const;
    /// Smallest Z such that g vanishes outside [-Z, Z]; +inf for softplus.
    double support_radius() const;

    double s_plus() const { return a_; }
    double s_minus() const { return b_; }
    double scale() const { return a_; }
    double lo() const { return a_; }
    double hi() const { return b_; }
    const std::vector<double>& values() const { return values_; }

    bool operator==(const GFunction&) const = default;

private:
    Kind kind_ = Kind::zero;
    double a_ = 0.0, b_ = 0.0;
    std::vector<double> values_;
};

/// Throws InvalidProfile if g breaks nonnegativity, the side monotonicity,
/// the 1-Lipschitz bound (|dg| <= dz + 1e-12 per cell) or vanishing at infinity.
void validate_profile(const GFunction& g);

/// Member of H stored as the pair (eps, G):
/// log F(e^x, e^y) = (eps > 0 ? max : min)(x, y) + eps * G(x - y).
class HFunction {
public:
    /// Unchecked; use from_g for validated construction.
    HFunction(int eps, GFunction g, std::string label = {});

    int eps() const { return eps_; }
    const GFunction& g() const { return g_; }
    const std::string& label() const { return label_; }

    /// log F(e^a, e^b).
    double eval_log(double a, double b) const {
        const double base = eps_ > 0 ? (a > b ? a : b) : (a < b ? a : b);
        return base + eps_ * g_(a - b);
    }

    /// True for max and min.
    bool trivial() const { return g_.is_zero(); }

private:
    int eps_;
    GFunction g_;
    std::string label_;
};

HFunction from_g(const GFunction& g, int eps, std::string label = {});
const GFunction& g_of(const HFunction& f);

double eval(const HFunction& f, double x, double y);

HFunction star(const HFunction& f);
HFunction invert(const HFunction& f);
HFunction swap(const HFunction& f);

/// sup{z >= 0 : F*(e^-t, e^-z) >= 1} by bisection; the bracket is shrunk
/// to width tol + rel_tol * (lower end).
double t_of(const HFunction& f, double t, double tol = 1e-12, double rel_tol = 0.0);
/// log F*(1, 1) = G(0).
double r_of(const HFunction& f);

namespace fns {
HFunction sum();
HFunction parallel();
HFunction max();
HFunction min();
HFunction hipster_plus();
HFunction hipster_minus();
HFunction power_mean(double alpha);
HFunction tent(double s_plus, double s_minus, int eps = 1);
}  // namespace fns

struct ValidationReport {
    bool ok = true;
    std::vector<std::string> violations;
};

/// Probes homogeneity, monotonicity, the eps side bound and the boundary
/// limits on a log-spaced grid over [1e-6, 1e6], plus the profile checks.
ValidationReport validate(const HFunction& f, int probes = 41);

}  // namespace homsys
