#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "homsys/dist.hpp"
#include "homsys/models.hpp"

namespace homsys {

/// Population standing in for the law of log X_n.
struct SamplePool {
    std::vector<double> values;
    long n = 0;
    std::uint64_t seed = 0;
    std::shared_ptr<const ModelSpec> model;
};

/// Pool of N copies of x0.
SamplePool make_pool(std::shared_ptr<const ModelSpec> model, std::size_t N, double x0, std::uint64_t seed);
/// Pool of N inverse-CDF draws from init.
SamplePool make_pool(std::shared_ptr<const ModelSpec> model, std::size_t N, const GridCDF& init,
                     std::uint64_t seed);

/// Slot i of the next pool is log F(e^a, e^b) with a, b drawn with
/// replacement from the current pool and F drawn from the model, all from the
/// stream keyed by (seed, i, n). Throws DomainError for pools smaller than 2.
void pool_step(SamplePool& pool, int threads = 1);

enum class Observable { log, value };

/// Limit law of (observable) / (constant n)^exponent.
struct SimTarget {
    LimitLaw law = LimitLaw::cubic;
    double constant = 1.0;
    double exponent = 1.0 / 3.0;
    Observable observable = Observable::log;
    std::string source;  // how the target was chosen
};

/// cbrt models: cubic law with c*; lazy hipster: y^2 with c = 2; distance(1/2):
/// y^2 with c = pi^2/6 on log Delta_n. Empty otherwise.
std::optional<SimTarget> default_target(const ModelSpec& model, double tol = 1e-10);

struct SimCheckpoint {
    long n = 0;
    double scale = 1.0;
    double ks = 0.0;
    std::vector<double> rescaled;  // sorted
    double max_abs_log = 0.0;
};

struct SimResult {
    SimTarget target;
    std::vector<SimCheckpoint> checkpoints;
    std::vector<std::string> warnings;
};

struct SimOptions {
    std::size_t N = 100000;
    std::uint64_t seed = 1;
    int threads = 1;
    double x0 = 0.0;                // log X_0 when init is null
    const GridCDF* init = nullptr;
    std::optional<SimTarget> target;  // default_target when empty
};

SimResult simulate(const ModelSpec& model, long n, std::vector<long> checkpoints, const SimOptions& opt = {});

enum class HipsterKind { symmetric, lazy };

/// Literal integer recursion xi U + (1 - xi) U^ + D 1{U = U^} from U_0 = 0,
/// D = +-1 (symmetric) or D in {0, 1} (lazy), run on a pool of size N.
std::vector<long> hipster_direct(HipsterKind kind, long n, std::size_t N, std::uint64_t seed, int threads = 1);
/// Same, returning the pool at each checkpoint (sorted, deduplicated).
std::vector<std::vector<long>> hipster_direct(HipsterKind kind, std::vector<long> checkpoints, std::size_t N,
                                              std::uint64_t seed, int threads = 1);

/// Empirical CDF of a checkpoint on an m-cell grid in the write_csv schema.
void write_checkpoint_csv(std::ostream& os, const SimCheckpoint& cp, LimitLaw law, int m = 2000);

/// n * max G(0) + max |log X_0|.
double support_bound(const ModelSpec& model, long n, double max_abs_log_x0);

}  // namespace homsys
