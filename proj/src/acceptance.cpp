#include "homsys/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

#include <fmt/format.h>

#include "homsys/errors.hpp"
#include "homsys/evolve.hpp"
#include "homsys/mc.hpp"
#include "homsys/moments.hpp"
#include "homsys/proofcheck.hpp"
#include "homsys/quadrature.hpp"
#include "homsys/serpar.hpp"

namespace homsys {

namespace {

// Riemann zeta by direct summation plus an Euler-Maclaurin tail.
double zeta(double s) {
    const int K = 1000;
    double sum = 0;
    for (int k = K - 1; k >= 1; --k) sum += std::pow(k, -s);
    const double k = K;
    sum += std::pow(k, 1 - s) / (s - 1) + 0.5 * std::pow(k, -s) + s / 12 * std::pow(k, -s - 1) -
           s * (s + 1) * (s + 2) / 720 * std::pow(k, -s - 3);
    return sum;
}

struct Checker {
    CriterionResult& r;
    void operator()(bool ok, std::string line) {
        r.details.push_back((ok ? "ok   " : "FAIL ") + std::move(line));
        r.passed = r.passed && ok;
    }
};

void closed_form_moments(Checker& chk) {
    for (const auto& f : {fns::hipster_plus(), fns::hipster_minus()}) {
        const double g02 = gamma(f, 0, 2), g11 = gamma(f, 1, 1);
        chk(std::abs(g02 - 1) < 1e-9, fmt::format("{} Gamma(0,2) = {:.15g} (1)", f.label(), g02));
        chk(std::abs(g11 - 0.5) < 1e-9, fmt::format("{} Gamma(1,1) = {:.15g} (0.5)", f.label(), g11));
    }
    const auto f1 = fns::sum();
    const double z2 = zeta(2), z3 = zeta(3);
    const double g01 = gamma(f1, 0, 1), g11 = gamma(f1, 1, 1);
    chk(std::abs(g01 - z2) < 1e-8, fmt::format("sum Gamma(0,1) = {:.15g} (zeta(2) = {:.15g})", g01, z2));
    chk(std::abs(g11 - z3) < 1e-8, fmt::format("sum Gamma(1,1) = {:.15g} (zeta(3) = {:.15g})", g11, z3));
}

void constants(Checker& chk) {
    const double hip = c_star(models::hipster());
    chk(std::abs(hip - 4.5) < 1e-8, fmt::format("c*(hipster) = {:.15g} (4.5)", hip));
    const double res = c_star(models::resistance(0.5)), ref = 9 * zeta(3);
    chk(std::abs(res - ref) < 1e-6, fmt::format("c*(resistance 0.5) = {:.12g} (9 zeta(3) = {:.12g})", res, ref));
    const double pm = c_star(models::power_mean({1.0, -1.0}, {0.5, 0.5}));
    chk(std::abs(pm - res) < 1e-6, fmt::format("c*(power mean +-1) = {:.12g}", pm));
}

void ipp(Checker& chk) {
    const std::vector<HFunction> fs{fns::sum(), fns::hipster_plus(), fns::power_mean(1.7), fns::tent(1.0, 0.5)};
    const std::pair<double, double> ab[] = {{1, 2}, {2, 1}, {2, 2}};
    for (const auto& f : fs)
        for (auto [a, b] : ab) {
            const double d = check_ipp(f, a, b);
            chk(std::abs(d) < 1e-7, fmt::format("{} (a, b) = ({}, {}): defect {:.3e}", f.label(), a, b, d));
        }
}

void one_step(Checker& chk) {
    const std::size_t N = 100000;
    const double budget = 3.0 / std::sqrt(double(N));
    const auto init = uniform_on_grid(-4.0, 4.0, 4000, -1.0, 1.0);
    const char* specs[] = {"hipster",  "lazy_hipster", "resistance:0.5", "distance:0.5", "power_mean:1,-1",
                           "sum",      "parallel",     "max",            "min",          "hipster+",
                           "hipster-", "tent:1,0.5"};
    for (const char* spec : specs) {
        const auto m = builtin(spec);
        const auto out = step(init, m);
        std::vector<double> s(N);
        for (std::size_t i = 0; i < N; ++i) {
            CounterRng r(2024, i, 0);
            const double y = -1 + 2 * r.uniform(), yh = -1 + 2 * r.uniform();
            s[i] = m.atoms[sample_atom(m, r.uniform())].f.eval_log(y, yh);
        }
        std::sort(s.begin(), s.end());
        const double d = ks(s, out);
        chk(d <= budget, fmt::format("{}: KS {:.5f} (budget {:.5f})", spec, d, budget));
    }
}

void series_parallel(Checker& chk) {
    double worst = 0;
    int mismatches = 0;
    for (std::uint64_t seed = 1; seed <= 200; ++seed) {
        const auto g = random_sp_graph(0.5, 12, seed);
        const auto red = reduce(g);
        const auto ex = to_explicit(g);
        worst = std::max(worst, std::abs(resistance_exact(ex) - red.resistance) / red.resistance);
        if (distance_exact(ex) != red.distance) ++mismatches;
    }
    chk(worst < 1e-9, fmt::format("max relative resistance discrepancy {:.3e} (< 1e-9)", worst));
    chk(mismatches == 0, fmt::format("distance mismatches {} of 200", mismatches));
}

std::filesystem::path scratch_dir(const AcceptanceOptions& opt, const std::string& leaf) {
    auto dir = opt.out_dir.empty() ? std::filesystem::temp_directory_path() / "homsys-acceptance" : opt.out_dir;
    dir /= leaf;
    std::filesystem::create_directories(dir);
    return dir;
}

const std::vector<long> kCheckpoints{100, 1000, 10000};

struct ConvergenceRun {
    std::string spec;
    SimResult result;
};

std::vector<ConvergenceRun> run_convergence(const std::vector<std::string>& specs, int threads,
                                            const std::filesystem::path& dir) {
    std::vector<ConvergenceRun> runs;
    for (const auto& spec : specs) {
        SimOptions opt;
        opt.N = 100000;
        opt.seed = 1;
        opt.threads = threads;
        auto res = simulate(builtin(spec), kCheckpoints.back(), kCheckpoints, opt);
        for (const auto& cp : res.checkpoints) {
            std::string stem = spec;
            std::replace_if(stem.begin(), stem.end(), [](char c) { return c == ':' || c == ','; }, '_');
            std::ofstream os(dir / fmt::format("{}_n{}.csv", stem, cp.n));
            write_checkpoint_csv(os, cp, res.target.law);
        }
        runs.push_back({spec, std::move(res)});
    }
    return runs;
}

void convergence_verdicts(Checker& chk, const std::vector<ConvergenceRun>& runs) {
    for (const auto& run : runs) {
        const auto& cps = run.result.checkpoints;
        std::string ks_list;
        bool decreasing = true;
        for (std::size_t k = 0; k < cps.size(); ++k) {
            ks_list += fmt::format("{}{:.4f}", k ? " -> " : "", cps[k].ks);
            if (k > 0 && !(cps[k].ks < cps[k - 1].ks)) decreasing = false;
        }
        chk(decreasing, fmt::format("{}: KS {} strictly decreasing", run.spec, ks_list));
        chk(cps.back().ks < 0.1, fmt::format("{}: KS at n = {} is {:.4f} (< 0.1)", run.spec, cps.back().n, cps.back().ks));
    }
}

void cbrt_convergence(Checker& chk, const AcceptanceOptions& opt) {
    const auto runs = run_convergence({"hipster", "resistance:0.5", "power_mean:1,-1"}, opt.threads,
                                      scratch_dir(opt, "criterion6"));
    convergence_verdicts(chk, runs);
    const std::size_t N = 100000;
    const auto direct = hipster_direct(HipsterKind::symmetric, kCheckpoints, N, 2, opt.threads);
    const auto& fw = runs.front().result.checkpoints;
    const double budget = 3 * std::sqrt(2.0 / double(N));
    for (std::size_t k = 0; k < kCheckpoints.size(); ++k) {
        std::vector<double> a(direct[k].begin(), direct[k].end()), b(fw[k].rescaled.size());
        std::sort(a.begin(), a.end());
        for (std::size_t i = 0; i < b.size(); ++i) b[i] = std::round(fw[k].rescaled[i] * fw[k].scale);
        const double d = ks_two_sample(a, b);
        chk(d <= budget, fmt::format("hipster direct vs framework at n = {}: two-sample KS {:.4f} (budget {:.4f})",
                                     kCheckpoints[k], d, budget));
    }
}

void sqrt_convergence(Checker& chk, const AcceptanceOptions& opt) {
    const auto runs = run_convergence({"lazy_hipster", "distance:0.5"}, opt.threads, scratch_dir(opt, "criterion7"));
    convergence_verdicts(chk, runs);
}

void proof_machinery(Checker& chk) {
    const auto P = ProofParams::defaults(4.5);
    std::mt19937_64 gen(8);
    double worst = 0;
    for (long n : {1000L, 100000L}) {
        const auto r = schedule(P, n);
        std::uniform_real_distribution<double> u(-r.sigma_tilde, r.sigma);
        const double brk[] = {0.0};
        for (int i = 0; i < 100; ++i) {
            const double v = u(gen);
            const auto q = quad::integrate([&](double x) { return psi_n(r, x); }, -r.sigma_tilde, v, 1e-13, brk);
            worst = std::max(worst, std::abs(q.value - Psi_n(r, v)));
        }
    }
    chk(worst < 1e-10, fmt::format("Psi_n closed form vs quadrature: max error {:.3e}", worst));

    bool order = true, exact = true;
    for (long n = 2; n <= 1L << 24; n *= 2) {
        const auto r = schedule(P, n);
        order = order && r.sigma <= r.sigma_tilde && r.sigma_tilde < r.tau_tilde && r.tau_tilde <= r.tau;
        const double lhs = r.a_tilde * r.tau_tilde * r.tau_tilde, rhs = r.a * r.tau * r.tau;
        exact = exact && std::abs(lhs - rhs) <= 4 * std::numeric_limits<double>::epsilon() * rhs;
    }
    chk(order, "sigma <= sigma~ < tau~ <= tau on n = 2, 4, ..., 2^24");
    chk(exact, "a~ tau~^2 = a tau^2 to rounding on the same sweep");

    const auto big = schedule(P, 1000000);
    const double at3 = big.a * big.tau * big.tau * big.tau;
    chk(std::abs(at3 - 0.75) < 0.01, fmt::format("a_n tau_n^3 at n = 1e6 is {:.6f} (3/4 within 0.01)", at3));

    const auto scan = find_n0(models::hipster(), P, 1, 1000000);
    double best = -std::numeric_limits<double>::infinity();
    long best_n = 0;
    for (const auto& row : scan.rows)
        if (row.min_residual > best) best = row.min_residual, best_n = row.n;
    chk(scan.n0.has_value(),
        scan.n0 ? fmt::format("hipster Lambda condition holds on [n0, 2 n0] with n0 = {}", *scan.n0)
                : fmt::format("no n0 <= 1e6 found; largest minimum residual {:.3e} at n = {}", best, best_n));

    for (double x : {-0.5, 0.0, 0.5}) {
        const double lb = lower_bound(P, 1000000, x), lim = lower_bound_limit(P, x);
        chk(std::abs(lb - lim) < 0.05, fmt::format("lower bound at n = 1e6, x = {}: {:.5f} vs limit {:.5f}", x, lb, lim));
    }
}

bool same_bytes(const std::filesystem::path& a, const std::filesystem::path& b) {
    std::ifstream fa(a, std::ios::binary), fb(b, std::ios::binary);
    std::stringstream sa, sb;
    sa << fa.rdbuf();
    sb << fb.rdbuf();
    return fa && fb && sa.str() == sb.str();
}

void determinism(Checker& chk, const AcceptanceOptions& opt) {
    const std::vector<std::string> specs{"hipster", "resistance:0.5", "power_mean:1,-1"};
    const auto d1 = scratch_dir(opt, "criterion9_threads1"), d4 = scratch_dir(opt, "criterion9_threads4");
    run_convergence(specs, 1, d1);
    run_convergence(specs, 4, d4);
    int files = 0, equal = 0;
    for (const auto& e : std::filesystem::directory_iterator(d1)) {
        ++files;
        if (same_bytes(e.path(), d4 / e.path().filename())) ++equal;
    }
    chk(files == 9 && equal == files, fmt::format("{} of {} CSVs byte-identical across 1 and 4 threads", equal, files));
}

struct Spec {
    const char* name;
    double budget;
};
constexpr Spec kSpecs[kCriteria] = {
    {"closed-form moments", 1},       {"constants", 5},
    {"ipp identity", 10},             {"one-step oracle equivalence", 60},
    {"series-parallel dual oracle", 120}, {"limit law, cube-root regime", 600},
    {"limit law, square-root regime", 600}, {"proof machinery", 600},
    {"determinism", 600},
};

}  // namespace

CriterionResult run_criterion(int id, const AcceptanceOptions& opt) {
    if (id < 1 || id > kCriteria) throw DomainError("criterion id must lie in 1..9");
    CriterionResult r;
    r.id = id;
    r.name = kSpecs[id - 1].name;
    r.budget_seconds = kSpecs[id - 1].budget;
    r.passed = true;
    Checker chk{r};
    const auto t0 = std::chrono::steady_clock::now();
    try {
        switch (id) {
            case 1: closed_form_moments(chk); break;
            case 2: constants(chk); break;
            case 3: ipp(chk); break;
            case 4: one_step(chk); break;
            case 5: series_parallel(chk); break;
            case 6: cbrt_convergence(chk, opt); break;
            case 7: sqrt_convergence(chk, opt); break;
            case 8: proof_machinery(chk); break;
            case 9: determinism(chk, opt); break;
        }
    } catch (const std::exception& e) {
        chk(false, std::string("exception: ") + e.what());
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    chk(r.seconds < r.budget_seconds, fmt::format("runtime {:.1f} s (budget {:.0f} s)", r.seconds, r.budget_seconds));
    return r;
}

std::string format(const CriterionResult& r) {
    std::string s = fmt::format("{} {} {} ({:.1f} s / {:.0f} s)\n", r.passed ? "PASS" : "FAIL", r.id, r.name, r.seconds,
                                r.budget_seconds);
    for (const auto& d : r.details) s += "    " + d + "\n";
    return s;
}

}  // namespace homsys
