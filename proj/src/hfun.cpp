#include "homsys/hfun.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "homsys/errors.hpp"

namespace homsys {

GFunction GFunction::zero() { return {}; }

GFunction GFunction::softplus(double s) {
    if (!(s > 0.0) || !std::isfinite(s)) throw InvalidProfile("softplus scale must be positive");
    GFunction g;
    g.kind_ = Kind::softplus;
    g.a_ = s;
    return g;
}

GFunction GFunction::tent(double s_plus, double s_minus) {
    if (!(s_plus > 0.0 && s_plus <= 1.0 && s_minus > 0.0 && s_minus <= 1.0))
        throw InvalidProfile("tent slopes must lie in (0, 1]");
    GFunction g;
    g.kind_ = Kind::tent;
    g.a_ = s_plus;
    g.b_ = s_minus;
    return g;
}

GFunction GFunction::table(double lo, double hi, std::vector<double> values) {
    if (!(lo < hi) || values.size() < 2) throw InvalidProfile("table needs lo < hi and at least two nodes");
    GFunction g;
    g.kind_ = Kind::table;
    g.a_ = lo;
    g.b_ = hi;
    g.values_ = std::move(values);
    return g;
}

double GFunction::operator()(double z) const {
    switch (kind_) {
        case Kind::zero:
            return 0.0;
        case Kind::softplus:
            return a_ * std::log1p(std::exp(-std::abs(z) / a_));
        case Kind::tent:
            return z >= 0.0 ? std::max(0.0, 1.0 - a_ * z) : std::max(0.0, 1.0 + b_ * z);
        case Kind::table: {
            if (!(z >= a_ && z <= b_)) return 0.0;
            const double h = (b_ - a_) / static_cast<double>(values_.size() - 1);
            const double u = (z - a_) / h;
            auto k = static_cast<std::size_t>(u);
            if (k >= values_.size() - 1) return values_.back();
            const double w = u - static_cast<double>(k);
            return (1.0 - w) * values_[k] + w * values_[k + 1];
        }
    }
    return 0.0;
}

GFunction GFunction::reflect() const {
    switch (kind_) {
        case Kind::zero:
        case Kind::softplus:
            return *this;
        case Kind::tent:
            return tent(b_, a_);
        case Kind::table: {
            std::vector<double> v(values_.rbegin(), values_.rend());
            return table(-b_, -a_, std::move(v));
        }
    }
    return *this;
}

bool GFunction::is_zero() const {
    if (kind_ == Kind::zero) return true;
    if (kind_ == Kind::table)
        return std::all_of(values_.begin(), values_.end(), [](double v) { return v == 0.0; });
    return false;
}

std::vector<double> GFunction::kinks() const {
    switch (kind_) {
        case Kind::zero:
            return {};
        case Kind::softplus:
            return {0.0};
        case Kind::tent:
            return {-1.0 / b_, 0.0, 1.0 / a_};
        case Kind::table: {
            std::vector<double> out(values_.size());
            const double h = (b_ - a_) / static_cast<double>(values_.size() - 1);
            for (std::size_t k = 0; k < values_.size(); ++k) out[k] = a_ + h * static_cast<double>(k);
            return out;
        }
    }
    return {};
}

double GFunction::support_radius() const {
    switch (kind_) {
        case Kind::zero:
            return 0.0;
        case Kind::softplus:
            return std::numeric_limits<double>::infinity();
        case Kind::tent:
            return std::max(1.0 / a_, 1.0 / b_);
        case Kind::table:
            return std::max(std::abs(a_), std::abs(b_));
    }
    return 0.0;
}

void validate_profile(const GFunction& g) {
    if (g.kind() != GFunction::Kind::table) return;  // closed forms are valid by construction
    const auto& v = g.values();
    const double h = (g.hi() - g.lo()) / static_cast<double>(v.size() - 1);
    auto fail = [](const std::string& m) { throw InvalidProfile(m); };
    if (!(g.lo() <= 0.0 && g.hi() >= 0.0)) fail("table range must contain 0");
    if (std::abs(v.front()) > 1e-12 || std::abs(v.back()) > 1e-12)
        fail("table profile must vanish at its endpoints");
    for (std::size_t k = 0; k < v.size(); ++k) {
        if (!(v[k] >= 0.0) || !std::isfinite(v[k])) fail("table profile must be finite and nonnegative");
        if (k + 1 == v.size()) break;
        const double z0 = g.lo() + h * static_cast<double>(k);
        const double z1 = z0 + h;
        const double dv = v[k + 1] - v[k];
        std::ostringstream where;
        where << " on cell [" << z0 << ", " << z1 << "]";
        if (std::abs(dv) > h + 1e-12) fail("Lipschitz violation" + where.str());
        if (z1 <= 0.0 && dv < -1e-12) fail("profile decreasing left of 0" + where.str());
        if (z0 >= 0.0 && dv > 1e-12) fail("profile increasing right of 0" + where.str());
    }
}

HFunction::HFunction(int eps, GFunction g, std::string label)
    : eps_(eps >= 0 ? 1 : -1), g_(std::move(g)), label_(std::move(label)) {}

HFunction from_g(const GFunction& g, int eps, std::string label) {
    if (eps != 1 && eps != -1) throw DomainError("eps must be +1 or -1");
    validate_profile(g);
    return HFunction(eps, g, std::move(label));
}

const GFunction& g_of(const HFunction& f) { return f.g(); }

double eval(const HFunction& f, double x, double y) {
    if (!(x > 0.0 && y > 0.0)) throw DomainError("F is defined on positive arguments only");
    return std::exp(f.eval_log(std::log(x), std::log(y)));
}

namespace {
std::string suffixed(const std::string& label, const char* suffix) {
    return label.empty() ? label : label + suffix;
}
}  // namespace

// log F^inv(e^x, e^y) = -log F(e^-x, e^-y) = phi_{-eps}(x, y) + (-eps) G(y - x).
HFunction invert(const HFunction& f) {
    return HFunction(-f.eps(), f.g().reflect(), suffixed(f.label(), "^inv"));
}

HFunction star(const HFunction& f) { return f.eps() > 0 ? f : invert(f); }

HFunction swap(const HFunction& f) {
    return HFunction(f.eps(), f.g().reflect(), suffixed(f.label(), "^#"));
}

double t_of(const HFunction& f, double t, double tol, double rel_tol) {
    if (!(t > 0.0)) throw DomainError("t_of requires t > 0");
    if (!(tol > 0.0)) throw DomainError("t_of requires tol > 0");
    const HFunction s = star(f);
    // log F*(e^-t, e^-z), nonincreasing in z
    auto h = [&](double z) { return s.eval_log(-t, -z); };
    double lo = 0.0;
    double hi = std::max(1.0, r_of(f) + 1.0);
    while (h(hi) >= 0.0) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e300) return std::numeric_limits<double>::infinity();
    }
    while (hi - lo > tol + rel_tol * lo) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        (h(mid) >= 0.0 ? lo : hi) = mid;
    }
    return lo;
}

double r_of(const HFunction& f) { return f.g()(0.0); }

namespace fns {
HFunction sum() { return HFunction(1, GFunction::softplus(1.0), "sum"); }
HFunction parallel() { return HFunction(-1, GFunction::softplus(1.0), "parallel"); }
HFunction max() { return HFunction(1, GFunction::zero(), "max"); }
HFunction min() { return HFunction(-1, GFunction::zero(), "min"); }
HFunction hipster_plus() { return HFunction(1, GFunction::tent(1.0, 1.0), "hipster+"); }
HFunction hipster_minus() { return HFunction(-1, GFunction::tent(1.0, 1.0), "hipster-"); }

HFunction power_mean(double alpha) {
    if (!(std::abs(alpha) >= 1e-3) || !std::isfinite(alpha))
        throw DomainError("power_mean requires |alpha| >= 1e-3");
    std::ostringstream os;
    os << "power_mean(" << alpha << ")";
    return HFunction(alpha > 0 ? 1 : -1, GFunction::softplus(std::abs(alpha)), os.str());
}

HFunction tent(double s_plus, double s_minus, int eps) {
    std::ostringstream os;
    os << "tent(" << s_plus << "," << s_minus << ")";
    return from_g(GFunction::tent(s_plus, s_minus), eps, os.str());
}
}  // namespace fns

ValidationReport validate(const HFunction& f, int probes) {
    ValidationReport rep;
    auto note = [&](const std::string& m) {
        rep.ok = false;
        rep.violations.push_back(m);
    };
    try {
        validate_profile(f.g());
    } catch (const InvalidProfile& e) {
        note(e.what());
    }
    const auto& g = f.g();
    if (g.kind() == GFunction::Kind::softplus || g.kind() == GFunction::Kind::tent) {
        // closed forms: still probe the profile shape
        for (int i = 0; i <= 400; ++i) {
            const double z0 = -20.0 + 0.1 * i, z1 = z0 + 0.1;
            const double d = g(z1) - g(z0);
            if (g(z0) < 0.0) note("negative profile");
            if (std::abs(d) > 0.1 + 1e-12) note("Lipschitz violation");
        }
    }

    std::vector<double> grid(static_cast<std::size_t>(probes));
    for (int i = 0; i < probes; ++i)
        grid[static_cast<std::size_t>(i)] = std::pow(10.0, -6.0 + 12.0 * i / (probes - 1));
    auto where = [](double x, double y) {
        std::ostringstream os;
        os << " at (" << x << ", " << y << ")";
        return os.str();
    };
    const double as[] = {1e-6, 1e-3, 0.5, 7.0, 1e6};
    for (double x : grid) {
        for (double y : grid) {
            const double v = eval(f, x, y);
            for (double a : as) {
                const double va = eval(f, a * x, a * y);
                if (std::abs(va - a * v) > 1e-12 * a * v) note("homogeneity" + where(x, y));
            }
            if (f.eps() > 0 && v < std::max(x, y) * (1 - 1e-15)) note("below max" + where(x, y));
            if (f.eps() < 0 && v > std::min(x, y) * (1 + 1e-15)) note("above min" + where(x, y));
            const double xp = x * 1.07;
            if (eval(f, xp, y) < v * (1 - 1e-14)) note("not monotone in x" + where(x, y));
            if (eval(f, y, xp) < eval(f, y, x) * (1 - 1e-14)) note("not monotone in y" + where(y, x));
        }
    }
    // limits: eps = +1 as x -> 0, eps = -1 as x -> inf, checked in log scale
    const double far = 700.0;
    for (double ly : {-5.0, 0.0, 5.0}) {
        const double a = f.eps() > 0 ? ly - far : ly + far;
        if (std::abs(f.eval_log(a, ly) - ly) > 1e-6 || std::abs(f.eval_log(ly, a) - ly) > 1e-6)
            note("boundary limit fails at log y = " + std::to_string(ly));
    }
    // cap the list so a broken function does not flood the report
    if (rep.violations.size() > 20) rep.violations.resize(20);
    return rep;
}

}  // namespace homsys
