#include "homsys/mc.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "homsys/errors.hpp"
#include "homsys/model_io.hpp"
#include "homsys/moments.hpp"
#include "homsys/parallel.hpp"
#include "homsys/rng.hpp"

namespace homsys {

namespace {
// step counter reserved for initial draws
constexpr std::uint32_t kInitStream = 0xffffffffu;
}  // namespace

SamplePool make_pool(std::shared_ptr<const ModelSpec> model, std::size_t N, double x0, std::uint64_t seed) {
    if (N < 2) throw DomainError("pool needs at least two samples");
    model->check();
    return {std::vector<double>(N, x0), 0, seed, std::move(model)};
}

SamplePool make_pool(std::shared_ptr<const ModelSpec> model, std::size_t N, const GridCDF& init,
                     std::uint64_t seed) {
    auto pool = make_pool(std::move(model), N, 0.0, seed);
    if (init.atom_neg_inf() != 0.0) throw DomainError("pool initial law must not charge -inf");
    for (std::size_t i = 0; i < N; ++i) {
        CounterRng r(seed, i, kInitStream);
        pool.values[i] = init.quantile(r.uniform());
    }
    return pool;
}

void pool_step(SamplePool& pool, int threads) {
    const std::size_t N = pool.values.size();
    if (N < 2) throw DomainError("pool needs at least two samples");
    const auto& atoms = pool.model->atoms;
    const ModelSpec& model = *pool.model;
    const auto step = static_cast<std::uint32_t>(pool.n);
    const std::vector<double>& old = pool.values;
    std::vector<double> next(N);
    parallel_for(N, threads, [&](std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i) {
            CounterRng r(pool.seed, i, step);
            const double a = old[r.index(N)];
            const double c = old[r.index(N)];
            next[i] = atoms[sample_atom(model, r.uniform())].f.eval_log(a, c);
        }
    });
    pool.values = std::move(next);
    ++pool.n;
}

std::optional<SimTarget> default_target(const ModelSpec& model, double tol) {
    const auto rep = classify(model, tol);
    if (rep.regime == Regime::cbrt)
        return SimTarget{LimitLaw::cubic, c_star(model, tol), 1.0 / 3.0, Observable::log, "cbrt regime, c*"};
    const auto h = model_hash(model);
    if (h == model_hash(models::lazy_hipster()))
        return SimTarget{LimitLaw::linear_half, 2.0, 0.5, Observable::log, "lazy hipster, c = 2"};
    if (h == model_hash(models::distance(0.5)))
        return SimTarget{LimitLaw::linear_half, std::numbers::pi * std::numbers::pi / 6.0, 0.5, Observable::log,
                         "critical distance, c = pi^2/6 on log Delta_n"};
    return std::nullopt;
}

SimResult simulate(const ModelSpec& model, long n, std::vector<long> checkpoints, const SimOptions& opt) {
    if (n < 1) throw DomainError("simulate needs n >= 1");
    if (opt.N < 1000) throw DomainError("simulate needs a pool of at least 1000");
    SimResult res;
    auto target = opt.target ? opt.target : default_target(model);
    if (!target) {
        res.warnings.push_back("no proved limit law for this model; reporting log X_n against the cubic law, scale 1");
        target = SimTarget{LimitLaw::cubic, 1.0, 0.0, Observable::log, "none"};
    }
    res.target = *target;
    auto shared = std::make_shared<const ModelSpec>(model);
    SamplePool pool = opt.init ? make_pool(shared, opt.N, *opt.init, opt.seed) : make_pool(shared, opt.N, opt.x0, opt.seed);

    std::sort(checkpoints.begin(), checkpoints.end());
    checkpoints.erase(std::unique(checkpoints.begin(), checkpoints.end()), checkpoints.end());
    std::size_t next = 0;
    while (next < checkpoints.size() && checkpoints[next] <= 0) ++next;
    for (long k = 1; k <= n; ++k) {
        pool_step(pool, opt.threads);
        while (next < checkpoints.size() && checkpoints[next] == k) {
            SimCheckpoint cp;
            cp.n = k;
            cp.scale = std::pow(target->constant * static_cast<double>(k), target->exponent);
            cp.rescaled.resize(opt.N);
            for (std::size_t i = 0; i < opt.N; ++i) {
                const double v = pool.values[i];
                cp.max_abs_log = std::max(cp.max_abs_log, std::abs(v));
                cp.rescaled[i] = (target->observable == Observable::log ? v : std::exp(v)) / cp.scale;
            }
            std::sort(cp.rescaled.begin(), cp.rescaled.end());
            cp.ks = ks(cp.rescaled, target->law);
            res.checkpoints.push_back(std::move(cp));
            ++next;
        }
    }
    return res;
}

std::vector<std::vector<long>> hipster_direct(HipsterKind kind, std::vector<long> checkpoints, std::size_t N,
                                              std::uint64_t seed, int threads) {
    if (N < 2) throw DomainError("pool needs at least two samples");
    std::sort(checkpoints.begin(), checkpoints.end());
    checkpoints.erase(std::unique(checkpoints.begin(), checkpoints.end()), checkpoints.end());
    if (!checkpoints.empty() && checkpoints.front() < 0) throw DomainError("checkpoints must be nonnegative");
    std::vector<std::vector<long>> out;
    std::vector<long> cur(N, 0), nxt(N);
    std::size_t next = 0;
    const long n = checkpoints.empty() ? 0 : checkpoints.back();
    for (long k = 0;; ++k) {
        while (next < checkpoints.size() && checkpoints[next] == k) {
            out.push_back(cur);
            ++next;
        }
        if (k == n) break;
        const auto step = static_cast<std::uint32_t>(k);
        parallel_for(N, threads, [&](std::size_t b, std::size_t e) {
            for (std::size_t i = b; i < e; ++i) {
                CounterRng r(seed, i, step);
                const long u = cur[r.index(N)], uh = cur[r.index(N)];
                const bool xi = r.coin();
                const bool d = r.coin();
                long v = xi ? u : uh;
                if (u == uh) v += kind == HipsterKind::symmetric ? (d ? 1 : -1) : (d ? 1 : 0);
                nxt[i] = v;
            }
        });
        std::swap(cur, nxt);
    }
    return out;
}

std::vector<long> hipster_direct(HipsterKind kind, long n, std::size_t N, std::uint64_t seed, int threads) {
    if (n < 0) throw DomainError("n must be nonnegative");
    return hipster_direct(kind, std::vector<long>{n}, N, seed, threads).front();
}

void write_checkpoint_csv(std::ostream& os, const SimCheckpoint& cp, LimitLaw law, int m) {
    write_csv(os, GridCDF::from_samples(cp.rescaled, m, 0.05), law);
}

double support_bound(const ModelSpec& model, long n, double max_abs_log_x0) {
    return static_cast<double>(n) * max_r(model) + max_abs_log_x0;
}

}  // namespace homsys
