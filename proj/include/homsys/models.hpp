#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "homsys/hfun.hpp"

namespace homsys {

struct Atom {
    double weight;
    HFunction f;
};

/// Finite mixture law of the random function F.
struct ModelSpec {
    std::vector<Atom> atoms;
    std::string name;

    /// Throws DomainError unless weights are positive and sum to 1 within 1e-12.
    void check() const;
};

enum class Regime { bounded, linear, sqrt, cbrt, unknown };
const char* to_string(Regime r);

struct CriticalityReport {
    double p = 0.0;              // P(eps = +1)
    double e_eps = 0.0;
    double e_gamma01_eps = 0.0;
    double alpha_plus = 0.0;     // E[int_0^inf G | eps = +1]
    double alpha_minus = 0.0;
    Regime regime = Regime::unknown;
    std::string bucket;          // parameter-space cell: L, P, D0, B+, B-, B'+, B'-
    bool heuristic = true;       // false only for the proved cbrt case
    bool nontrivial = false;     // some atom is not max or min
};

namespace models {
ModelSpec resistance(double p);
ModelSpec distance(double p);
ModelSpec hipster();
ModelSpec lazy_hipster();
ModelSpec power_mean(const std::vector<double>& alphas, const std::vector<double>& weights = {});
}  // namespace models

/// Looks up "resistance:0.5", "distance:0.4", "hipster", "lazy_hipster",
/// "power_mean:1,-1" (equal weights) and the bare family tags of single functions.
ModelSpec builtin(const std::string& spec);

ModelSpec invert_all(const ModelSpec& m);
bool nontrivial(const ModelSpec& m);

CriticalityReport classify(const ModelSpec& m, double tol = 1e-10);

/// Atom index for a uniform u in [0, 1).
std::size_t sample_atom(const ModelSpec& m, double u);

/// Largest G(0) across atoms.
double max_r(const ModelSpec& m);

}  // namespace homsys
