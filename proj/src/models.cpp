#include "homsys/models.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "homsys/errors.hpp"
#include "homsys/moments.hpp"

namespace homsys {

void ModelSpec::check() const {
    if (atoms.empty()) throw DomainError("model has no atoms");
    double s = 0.0;
    for (const auto& a : atoms) {
        if (!(a.weight > 0.0)) throw DomainError("atom weights must be positive");
        s += a.weight;
    }
    if (std::abs(s - 1.0) > 1e-12) throw DomainError("atom weights must sum to 1");
}

const char* to_string(Regime r) {
    switch (r) {
        case Regime::bounded: return "bounded";
        case Regime::linear: return "linear";
        case Regime::sqrt: return "sqrt";
        case Regime::cbrt: return "cbrt";
        case Regime::unknown: return "unknown";
    }
    return "unknown";
}

namespace {

void check_p(double p) {
    if (!(p >= 0.0 && p <= 1.0)) throw DomainError("p must lie in [0, 1]");
}

// Two-atom mixture that drops a zero-weight side.
ModelSpec two_atoms(double p, HFunction a, HFunction b, std::string name) {
    ModelSpec m;
    m.name = std::move(name);
    if (p > 0.0) m.atoms.push_back({p, std::move(a)});
    if (p < 1.0) m.atoms.push_back({1.0 - p, std::move(b)});
    return m;
}

std::string with_param(const char* base, double p) {
    std::ostringstream os;
    os << base << ":" << p;
    return os.str();
}

std::vector<double> parse_list(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw DomainError("cannot parse number '" + item + "'");
        }
    }
    return out;
}

}  // namespace

namespace models {

ModelSpec resistance(double p) {
    check_p(p);
    return two_atoms(p, fns::sum(), fns::parallel(), with_param("resistance", p));
}

ModelSpec distance(double p) {
    check_p(p);
    return two_atoms(p, fns::sum(), fns::min(), with_param("distance", p));
}

ModelSpec hipster() { return two_atoms(0.5, fns::hipster_plus(), fns::hipster_minus(), "hipster"); }

ModelSpec lazy_hipster() { return two_atoms(0.5, fns::hipster_plus(), fns::min(), "lazy_hipster"); }

ModelSpec power_mean(const std::vector<double>& alphas, const std::vector<double>& weights) {
    if (alphas.empty()) throw DomainError("power_mean needs at least one alpha");
    if (!weights.empty() && weights.size() != alphas.size())
        throw DomainError("power_mean weights and alphas differ in length");
    ModelSpec m;
    std::ostringstream os;
    os << "power_mean:";
    for (std::size_t i = 0; i < alphas.size(); ++i) {
        const double w = weights.empty() ? 1.0 / static_cast<double>(alphas.size()) : weights[i];
        m.atoms.push_back({w, fns::power_mean(alphas[i])});
        os << (i ? "," : "") << alphas[i];
    }
    m.name = os.str();
    m.check();
    return m;
}

}  // namespace models

ModelSpec builtin(const std::string& spec) {
    std::string name = spec, arg;
    if (auto pos = spec.find(':'); pos != std::string::npos) {
        name = spec.substr(0, pos);
        arg = spec.substr(pos + 1);
    }
    auto one = [&](HFunction f) { return ModelSpec{{{1.0, std::move(f)}}, spec}; };
    auto scalar = [&]() {
        auto v = parse_list(arg);
        if (v.size() != 1) throw DomainError(name + " takes exactly one parameter");
        return v[0];
    };
    if (name == "resistance") return models::resistance(arg.empty() ? 0.5 : scalar());
    if (name == "distance") return models::distance(arg.empty() ? 0.5 : scalar());
    if (name == "hipster" && arg.empty()) return models::hipster();
    if (name == "lazy_hipster" && arg.empty()) return models::lazy_hipster();
    if (name == "power_mean") return models::power_mean(parse_list(arg));
    if (name == "sum") return one(fns::sum());
    if (name == "parallel") return one(fns::parallel());
    if (name == "max") return one(fns::max());
    if (name == "min") return one(fns::min());
    if (name == "hipster+") return one(fns::hipster_plus());
    if (name == "hipster-") return one(fns::hipster_minus());
    if (name == "tent") {
        auto v = parse_list(arg);
        if (v.size() != 2 && v.size() != 3) throw DomainError("tent takes s_plus,s_minus[,eps]");
        return one(fns::tent(v[0], v[1], v.size() == 3 && v[2] < 0 ? -1 : 1));
    }
    throw DomainError("unknown model '" + spec + "'");
}

ModelSpec invert_all(const ModelSpec& m) {
    ModelSpec out{{}, m.name + "^inv"};
    for (const auto& a : m.atoms) out.atoms.push_back({a.weight, invert(a.f)});
    return out;
}

bool nontrivial(const ModelSpec& m) {
    return std::any_of(m.atoms.begin(), m.atoms.end(), [](const Atom& a) { return !a.f.trivial(); });
}

CriticalityReport classify(const ModelSpec& m, double tol) {
    m.check();
    CriticalityReport r;
    double w_minus = 0.0;
    for (const auto& a : m.atoms) {
        const double al = alpha(a.f.g(), tol);
        if (a.f.eps() > 0) {
            r.p += a.weight;
            r.alpha_plus += a.weight * al;
        } else {
            w_minus += a.weight;
            r.alpha_minus += a.weight * al;
        }
        r.e_eps += a.weight * a.f.eps();
        if (!a.f.trivial()) r.e_gamma01_eps += a.weight * a.f.eps() * gamma(a.f, 0.0, 1.0, tol);
    }
    if (r.p > 0.0) r.alpha_plus /= r.p;
    if (w_minus > 0.0) r.alpha_minus /= w_minus;
    r.nontrivial = nontrivial(m);

    const double atol = 100.0 * tol;
    const bool half = std::abs(r.p - 0.5) < 1e-12;
    const bool ap = r.alpha_plus > atol, am = r.alpha_minus > atol;

    if (r.nontrivial && std::abs(r.e_eps) < 1e-12 && std::abs(r.e_gamma01_eps) < atol) {
        r.regime = Regime::cbrt;
        r.bucket = "L";
        r.heuristic = false;
        return r;
    }
    if (!r.nontrivial) {
        r.regime = Regime::bounded;  // max/min only: log X_n stays in the initial range
        r.bucket = "trivial";
        return r;
    }
    if (half) {
        if (std::abs(r.alpha_plus - r.alpha_minus) > atol) {
            r.regime = Regime::sqrt;
            r.bucket = "P";
        }
        return r;
    }
    if (ap && am) {
        r.regime = Regime::linear;
        r.bucket = "D0";
    } else if (ap) {
        r.regime = r.p > 0.5 ? Regime::linear : Regime::bounded;
        r.bucket = r.p > 0.5 ? "B+" : "B'+";
    } else if (am) {
        r.regime = r.p < 0.5 ? Regime::linear : Regime::bounded;
        r.bucket = r.p < 0.5 ? "B-" : "B'-";
    }
    return r;
}

std::size_t sample_atom(const ModelSpec& m, double u) {
    double cum = 0.0;
    for (std::size_t i = 0; i + 1 < m.atoms.size(); ++i) {
        cum += m.atoms[i].weight;
        if (u < cum) return i;
    }
    return m.atoms.size() - 1;
}

double max_r(const ModelSpec& m) {
    double r = 0.0;
    for (const auto& a : m.atoms) r = std::max(r, r_of(a.f));
    return r;
}

}  // namespace homsys
