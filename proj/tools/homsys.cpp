#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "homsys/acceptance.hpp"
#include "homsys/errors.hpp"
#include "homsys/evolve.hpp"
#include "homsys/mc.hpp"
#include "homsys/model_io.hpp"
#include "homsys/moments.hpp"
#include "homsys/proofcheck.hpp"
#include "homsys/serpar.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace homsys;

namespace {

constexpr const char* kVersion = "0.1.0";
constexpr int kUsage = 64;

struct Common {
    std::string model;
    long n = 1000;
    std::size_t pool = 100000;
    std::uint64_t seed = 1;
    int grid = 8192;
    std::vector<long> checkpoints;
    double tol = 1e-10;
    double eta = 1.0, delta = 0.5, delta1 = 0.05;
    std::string out;
    int threads = 1;
};

json meta(const std::string& command, const Common& c, const ModelSpec* m, json tolerances) {
    json j{{"version", kVersion}, {"command", command}, {"seed", c.seed}, {"tolerances", std::move(tolerances)}};
    if (m) {
        j["model"] = m->name;
        j["model_hash"] = model_hash(*m);
    }
    return j;
}

// Writes to --out when given, else stdout.
void emit_json(const json& j, const std::string& out) {
    if (out.empty()) {
        std::cout << j.dump(2) << "\n";
        return;
    }
    const fs::path p(out);
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
    std::ofstream os(p);
    os << j.dump(2) << "\n";
    if (!os) throw std::runtime_error("cannot write " + out);
}

fs::path out_dir(const std::string& out) {
    fs::path d = out.empty() ? fs::path("homsys-out") : fs::path(out);
    fs::create_directories(d);
    return d;
}

void write_summary(const fs::path& dir, const json& j) {
    std::ofstream os(dir / "summary.json");
    os << j.dump(2) << "\n";
    if (!os) throw std::runtime_error("cannot write " + (dir / "summary.json").string());
}

std::vector<long> checkpoints_or_final(const Common& c) {
    return c.checkpoints.empty() ? std::vector<long>{c.n} : c.checkpoints;
}

int cmd_gamma(const Common& c) {
    const auto m = load_model(c.model);
    json atoms = json::array();
    for (const auto& at : m.atoms) {
        const auto t = moment_table(at.f, c.eta, c.tol);
        atoms.push_back({{"label", at.f.label()},
                         {"weight", at.weight},
                         {"eps", at.f.eps()},
                         {"r", t.r},
                         {"gamma01", t.gamma01},
                         {"gamma02", t.gamma02},
                         {"gamma11", t.gamma11},
                         {"alpha", alpha(at.f.g())}});
    }
    json j = meta("gamma", c, &m, {{"tol", c.tol}});
    j["atoms"] = atoms;
    try {
        j["c_star"] = c_star(m, c.tol);
    } catch (const DegenerateModel& e) {
        j["c_star"] = nullptr;
        j["c_star_note"] = e.what();
    }
    emit_json(j, c.out);
    return 0;
}

int cmd_classify(const Common& c) {
    const auto m = load_model(c.model);
    const auto r = classify(m, c.tol);
    json j = meta("classify", c, &m, {{"tol", c.tol}});
    j["p_plus"] = r.p;
    j["e_eps"] = r.e_eps;
    j["e_gamma01_eps"] = r.e_gamma01_eps;
    j["alpha_plus"] = r.alpha_plus;
    j["alpha_minus"] = r.alpha_minus;
    j["regime"] = to_string(r.regime);
    j["bucket"] = r.bucket;
    j["heuristic"] = r.heuristic;
    j["nontrivial"] = r.nontrivial;
    emit_json(j, c.out);
    return 0;
}

int cmd_simulate(const Common& c) {
    const auto m = load_model(c.model);
    SimOptions opt;
    opt.N = c.pool;
    opt.seed = c.seed;
    opt.threads = c.threads;
    const auto res = simulate(m, c.n, checkpoints_or_final(c), opt);
    const auto dir = out_dir(c.out);
    json cps = json::array();
    for (const auto& cp : res.checkpoints) {
        const auto name = "sim_n" + std::to_string(cp.n) + ".csv";
        std::ofstream os(dir / name);
        write_checkpoint_csv(os, cp, res.target.law);
        auto s = summary_json(cp.n, cp.scale, cp.ks, GridCDF::from_samples(cp.rescaled, 2000, 0.05));
        s["csv"] = name;
        s["max_abs_log"] = cp.max_abs_log;
        cps.push_back(s);
    }
    json j = meta("simulate", c, &m, {{"ks_budget_one_sample", 1.36 / std::sqrt(double(c.pool))}});
    j["pool"] = c.pool;
    j["target"] = {{"law", to_string(res.target.law)},
                   {"constant", res.target.constant},
                   {"exponent", res.target.exponent},
                   {"observable", res.target.observable == Observable::log ? "log" : "value"},
                   {"source", res.target.source}};
    j["checkpoints"] = cps;
    j["warnings"] = res.warnings;
    write_summary(dir, j);
    std::cout << j.dump(2) << "\n";
    return 0;
}

int cmd_evolve(const Common& c) {
    const auto m = load_model(c.model);
    EvolveOptions opt;
    opt.m = c.grid;
    opt.tol = c.tol;
    opt.threads = c.threads;
    const auto res = run(m, nullptr, 0.0, c.n, checkpoints_or_final(c), opt);
    const auto dir = out_dir(c.out);
    json cps = json::array();
    for (const auto& cp : res.checkpoints) {
        const auto name = "evolve_n" + std::to_string(cp.n) + ".csv";
        std::ofstream os(dir / name);
        write_csv(os, cp.rescaled, LimitLaw::cubic);
        auto s = summary_json(cp.n, cp.scale, cp.ks, cp.rescaled);
        s["csv"] = name;
        s["clamp_budget"] = cp.clamp_budget;
        cps.push_back(s);
    }
    json j = meta("evolve", c, &m, {{"tol", c.tol}, {"grid", c.grid}, {"clamp_abort", opt.clamp_abort}});
    j["c_star"] = res.c_star;
    j["domain"] = {res.lo, res.hi};
    j["checkpoints"] = cps;
    j["warnings"] = res.warnings;
    write_summary(dir, j);
    std::cout << j.dump(2) << "\n";
    return 0;
}

int cmd_serpar(const Common& c, double p, int seeds, bool check_exact) {
    if (seeds < 1) throw DomainError("--seeds must be positive");
    if (check_exact && c.n > 16) throw DomainError("--check-exact is capped at n = 16");
    const auto dir = out_dir(c.out);
    std::ofstream csv(dir / "serpar.csv");
    csv << "seed,R_reduce,R_exact,D_reduce,D_exact\n";
    double worst_r = 0, worst_d = 0;
    char buf[160];
    for (int k = 0; k < seeds; ++k) {
        const std::uint64_t seed = c.seed + std::uint64_t(k);
        const auto g = random_sp_graph(p, int(c.n), seed);
        const auto red = reduce(g);
        if (check_exact) {
            const auto ex = to_explicit(g);
            const double R = resistance_exact(ex), D = distance_exact(ex);
            worst_r = std::max(worst_r, std::abs(R - red.resistance) / red.resistance);
            worst_d = std::max(worst_d, std::abs(D - red.distance));
            std::snprintf(buf, sizeof buf, "%llu,%.17g,%.17g,%.17g,%.17g\n", (unsigned long long)seed, red.resistance,
                          R, red.distance, D);
        } else {
            std::snprintf(buf, sizeof buf, "%llu,%.17g,,%.17g,\n", (unsigned long long)seed, red.resistance,
                          red.distance);
        }
        csv << buf;
    }
    json j = meta("serpar", c, nullptr, {{"resistance_relative", 1e-9}});
    j["p"] = p;
    j["n"] = c.n;
    j["seeds"] = seeds;
    j["csv"] = "serpar.csv";
    if (check_exact) {
        j["max_relative_resistance_discrepancy"] = worst_r;
        j["max_distance_discrepancy"] = worst_d;
        j["agree"] = worst_r < 1e-9 && worst_d == 0;
    }
    write_summary(dir, j);
    std::cout << j.dump(2) << "\n";
    return check_exact && !(worst_r < 1e-9 && worst_d == 0) ? 1 : 0;
}

std::pair<long, long> parse_range(const std::string& s) {
    const auto colon = s.find(':');
    if (colon == std::string::npos) throw DomainError("--n-range expects a:b");
    try {
        const long a = std::stol(s.substr(0, colon)), b = std::stol(s.substr(colon + 1));
        if (a < 1 || b < a) throw DomainError("--n-range needs 1 <= a <= b");
        return {a, b};
    } catch (const std::logic_error&) {
        throw DomainError("--n-range expects integers a:b");
    }
}

int cmd_lambda(const Common& c, const std::string& range, int vgrid) {
    const auto m = load_model(c.model);
    const auto [a, b] = parse_range(range);
    const auto P = ProofParams::defaults(c_star(m, c.tol), c.eta, c.delta, c.delta1);
    const auto scan = find_n0(m, P, a, b, std::size_t(vgrid), 16, c.tol * 0.1, c.threads);
    const auto dir = out_dir(c.out);
    std::ofstream csv(dir / "lambda_check.csv");
    csv << "n,min_residual,argmin\n";
    char buf[128];
    for (const auto& r : scan.rows) {
        std::snprintf(buf, sizeof buf, "%ld,%.17g,%.17g\n", r.n, r.min_residual, r.argmin);
        csv << buf;
    }
    json j = meta("lambda-check", c, &m, {{"tol", c.tol}, {"vgrid", vgrid}});
    j["params"] = {{"eta", P.eta},     {"delta", P.delta},         {"delta1", P.delta1}, {"rho", P.rho},
                   {"rho_tilde", P.rho_tilde}, {"kappa", P.kappa}, {"c_star", P.c_star}};
    j["n_range"] = {a, b};
    j["n0_found"] = scan.n0.has_value();
    j["n0"] = scan.n0 ? json(*scan.n0) : json(nullptr);
    j["csv"] = "lambda_check.csv";
    write_summary(dir, j);
    std::cout << j.dump(2) << "\n";
    return 0;
}

int cmd_report(const Common& c, const std::vector<int>& ids_in) {
    std::vector<int> ids = ids_in;
    if (ids.empty())
        for (int k = 1; k <= kCriteria; ++k) ids.push_back(k);
    AcceptanceOptions opt;
    opt.threads = c.threads;
    if (!c.out.empty()) opt.out_dir = c.out;
    int failed = 0;
    json rows = json::array();
    for (int id : ids) {
        const auto r = run_criterion(id, opt);
        std::fputs(format(r).c_str(), stdout);
        std::fflush(stdout);
        if (!r.passed) ++failed;
        rows.push_back({{"id", r.id}, {"name", r.name}, {"passed", r.passed}, {"details", r.details}});
    }
    std::printf("%zu criteria, %d failed\n", ids.size(), failed);
    if (!c.out.empty()) {
        json j = meta("report", c, nullptr, json::object());
        j["criteria"] = rows;
        write_summary(out_dir(c.out), j);
    }
    return failed ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"random 1-homogeneous systems: moments, limit laws, simulation and proof checks"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);
    Common c;

    auto model_opt = [&](CLI::App* s) { s->add_option("--model", c.model, "builtin name or JSON spec file")->required(); };
    auto threads_opt = [&](CLI::App* s) {
        s->add_option("--threads", c.threads, "worker threads")->envname("HOMSYS_THREADS")->check(CLI::PositiveNumber);
    };
    auto out_opt = [&](CLI::App* s, const char* what) { s->add_option("--out", c.out, what); };

    auto* g = app.add_subcommand("gamma", "moment integrals and c* of a model");
    model_opt(g);
    g->add_option("--tol", c.tol, "quadrature tolerance");
    g->add_option("--eta", c.eta, "moment exponent slack");
    out_opt(g, "JSON output file (stdout when absent)");

    auto* cl = app.add_subcommand("classify", "criticality regime of a model");
    model_opt(cl);
    cl->add_option("--tol", c.tol, "tolerance");
    out_opt(cl, "JSON output file (stdout when absent)");

    auto* sim = app.add_subcommand("simulate", "pool Monte Carlo of log X_n");
    model_opt(sim);
    sim->add_option("--n", c.n, "steps")->check(CLI::PositiveNumber);
    sim->add_option("--pool", c.pool, "pool size")->check(CLI::Range(std::size_t{1000}, std::size_t{1} << 31));
    sim->add_option("--seed", c.seed, "seed");
    sim->add_option("--checkpoints", c.checkpoints, "checkpoint steps")->delimiter(',');
    threads_opt(sim);
    out_opt(sim, "output directory");

    auto* ev = app.add_subcommand("evolve", "deterministic law evolution on a grid");
    model_opt(ev);
    ev->add_option("--n", c.n, "steps")->check(CLI::PositiveNumber);
    ev->add_option("--grid", c.grid, "grid cells")->check(CLI::Range(16, 1 << 22));
    ev->add_option("--checkpoints", c.checkpoints, "checkpoint steps")->delimiter(',');
    ev->add_option("--tol", c.tol, "tolerance");
    threads_opt(ev);
    out_opt(ev, "output directory");

    double p = 0.5;
    int seeds = 1;
    bool check_exact = false;
    auto* sp = app.add_subcommand("serpar", "random series-parallel graphs");
    sp->add_option("--p", p, "series probability")->check(CLI::Range(0.0, 1.0));
    sp->add_option("--n", c.n, "growth rounds")->check(CLI::Range(0, 60));
    sp->add_option("--seeds", seeds, "number of seeds");
    sp->add_option("--seed", c.seed, "first seed");
    sp->add_flag("--check-exact", check_exact, "compare with Laplacian and shortest-path oracles");
    out_opt(sp, "output directory");

    std::string range = "1:1000000";
    int vgrid = 400;
    auto* lc = app.add_subcommand("lambda-check", "scan for n0 in the Lambda condition");
    model_opt(lc);
    lc->add_option("--eta", c.eta, "eta in (0, 1]");
    lc->add_option("--delta", c.delta, "delta in (0, 1)");
    lc->add_option("--delta1", c.delta1, "delta1 in (0, delta/9)");
    lc->add_option("--n-range", range, "a:b");
    lc->add_option("--vgrid", vgrid, "v-grid points")->check(CLI::Range(2, 1 << 20));
    lc->add_option("--tol", c.tol, "tolerance");
    threads_opt(lc);
    out_opt(lc, "output directory");

    std::vector<int> ids;
    auto* rep = app.add_subcommand("report", "run the acceptance suite");
    rep->add_option("--criterion", ids, "criterion ids (default: all)")->check(CLI::Range(1, kCriteria));
    threads_opt(rep);
    out_opt(rep, "directory for criterion CSVs and summary");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n\n" << app.help();
        return kUsage;
    }

    try {
        if (*g) return cmd_gamma(c);
        if (*cl) return cmd_classify(c);
        if (*sim) return cmd_simulate(c);
        if (*ev) return cmd_evolve(c);
        if (*sp) return cmd_serpar(c, p, seeds, check_exact);
        if (*lc) return cmd_lambda(c, range, vgrid);
        if (*rep) return cmd_report(c, ids);
    } catch (const ValidationError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 1;
    } catch (const NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return kUsage;
}
