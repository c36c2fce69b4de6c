#include <doctest.h>

#include <cmath>
#include <random>

#include "homsys/errors.hpp"
#include "homsys/evolve.hpp"
#include "homsys/proofcheck.hpp"
#include "homsys/quadrature.hpp"

using namespace homsys;

namespace {
const ProofParams P = ProofParams::defaults(4.5);

// symmetric density a(tau^2 - v^2) on |v| < sigma and its CDF
double phi(const ScheduleRow& r, double v) { return std::abs(v) < r.sigma ? r.a * (r.tau * r.tau - v * v) : 0.0; }
double Phi(const ScheduleRow& r, double v) {
    const double x = std::clamp(v, -r.sigma, r.sigma);
    return 0.5 + r.a * r.tau * r.tau * x - r.a * x * x * x / 3.0;
}
}  // namespace

TEST_CASE("parameter validation") {
    CHECK(P.rho == doctest::Approx(2.0 / 3.0));
    CHECK(P.rho_tilde == doctest::Approx(1.0 / 3.0));
    CHECK(P.kappa == doctest::Approx(1.0 / 12.0));
    CHECK_THROWS_AS(ProofParams::defaults(4.5, 1.0, 0.5, 0.06), DomainError);
    CHECK_THROWS_AS(ProofParams::defaults(4.5, 1.5), DomainError);
    CHECK_THROWS_AS(ProofParams::defaults(-1.0), DomainError);
    ProofParams bad = P;
    bad.rho = 0.4;
    CHECK_THROWS_AS(bad.check(), DomainError);
}

TEST_CASE("schedule rows") {
    const auto r = schedule(P, 1000);
    CHECK(r.tau == doctest::Approx(16.5096).epsilon(1e-5));
    CHECK(r.sigma == doctest::Approx(r.tau - std::pow(r.tau, 2.0 / 3.0)));
    CHECK(r.a_tilde * r.tau_tilde * r.tau_tilde == doctest::Approx(r.a * r.tau * r.tau).epsilon(1e-15));
    CHECK(r.sigma <= r.sigma_tilde);
    CHECK(r.sigma_tilde < r.tau_tilde);
    CHECK(r.tau_tilde <= r.tau);
    const auto big = schedule(P, 1000000);
    CHECK(std::abs(big.a * std::pow(big.tau, 3) - 0.75) > 0.01);  // slow: the gap decays like tau^(rho-1)
    CHECK(schedule(P, 100000000).a * std::pow(schedule(P, 100000000).tau, 3) <
          big.a * std::pow(big.tau, 3));
    double q = 0;
    for (long n = 1; n < 5000; ++n) {
        const double qn = P.delta1 * (1 - std::pow(double(n), -P.kappa));
        CHECK(qn >= q);
        q = qn;
    }
    CHECK_THROWS_AS(schedule(P, 0), DomainError);
    CHECK_THROWS_AS(schedule(ProofParams::defaults(0.5), 1), ScheduleInfeasible);
}

TEST_CASE("psi_n and Psi_n") {
    const auto r = schedule(P, 5000);
    CHECK(Psi_n(r, r.sigma) == 1.0);
    CHECK(Psi_n(r, r.sigma - 1e-9) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(Psi_n(r, 0.0) == 0.5);
    CHECK(Psi_n(r, -1e-12) == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(Psi_n(r, -r.sigma_tilde) == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(psi_n(r, -1e-14) == doctest::Approx(psi_n(r, 0.0)).epsilon(1e-12));
    std::mt19937_64 gen(4);
    std::uniform_real_distribution<double> u(-r.sigma_tilde - 1, r.sigma + 1);
    const double breaks[] = {0.0};
    double worst = 0;
    for (int i = 0; i < 100; ++i) {
        const double v = u(gen);
        const double lo = -r.sigma_tilde;
        if (v <= lo) {
            CHECK(Psi_n(r, v) == 0.0);
            continue;
        }
        const double hi = std::min(v, r.sigma);
        const auto q = quad::integrate([&](double x) { return psi_n(r, x); }, lo, hi, 1e-13, breaks);
        worst = std::max(worst, std::abs(q.value - Psi_n(r, v)));
    }
    CHECK(worst < 1e-10);
}

TEST_CASE("hipster expected Lambda matches its closed form") {
    const auto m = models::hipster();
    const auto r = schedule(P, 20000);
    for (double v = -r.sigma_tilde - 1.5; v < r.sigma + 1.5; v += 0.37) {
        const double a = Psi_n(r, v) - Psi_n(r, v - 1), b = Psi_n(r, v + 1) - Psi_n(r, v);
        CHECK(expected_lambda(m, r, v) == doctest::Approx(0.5 * (a * a - b * b)).epsilon(1e-9).scale(1e-6));
    }
}

TEST_CASE("reflection of Lambda for decreasing-side functions") {
    const auto r = schedule(P, 3000);
    auto dens = [&](double x) { return phi(r, x); };
    auto cdf = [&](double x) { return Phi(r, x); };
    const double br[] = {-r.sigma, r.sigma};
    for (const auto& f : {fns::hipster_minus(), fns::tent(0.7, 0.4, -1), fns::min()}) {
        const auto fs = star(f);
        for (double v : {-9.0, -3.3, -0.7, 0.0, 1.1, 4.0, 8.5}) {
            const double lhs = lambda_integral(dens, cdf, f, -v, -r.sigma, r.sigma, 1e-12, br);
            const double rhs = -lambda_integral(dens, cdf, fs, v, -r.sigma, r.sigma, 1e-12, br);
            CHECK(lhs == doctest::Approx(rhs).epsilon(1e-9).scale(1e-8));
        }
    }
}

TEST_CASE("increment bound on Phi_n") {
    std::mt19937_64 gen(9);
    for (long n : {100L, 10000L, 1000000L}) {
        const auto r = schedule(P, n);
        std::uniform_real_distribution<double> u(-r.tau, r.tau);
        for (int i = 0; i < 200; ++i) {
            double v = u(gen), w = u(gen);
            if (w > v) std::swap(v, w);
            CHECK(Phi(r, v) - Phi(r, w) <= 2 * r.a * r.tau * (v + r.tau) * (v - w) + 1e-15);
        }
    }
}

TEST_CASE("lambda_condition structure") {
    const auto m = models::hipster();
    const long n = 4096;
    const auto grid = default_vgrid(P, n, 50);
    const auto rep = lambda_condition(m, P, n, grid, 1e-11, 2);
    REQUIRE(rep.residual.size() == 50);
    const auto r = schedule(P, n), r1 = schedule(P, n + 1);
    // far below the support only the q term survives
    const double dq = (r1.q - r.q) / ((1 - r.q) * (1 - r.q));
    CHECK(rep.residual[0] == doctest::Approx(dq).epsilon(1e-12));
    CHECK(rep.residual[0] > 0);
    CHECK(rep.min_residual <= rep.residual[0]);
    CHECK(rep.argmin >= grid.front());
    CHECK_THROWS_AS(lambda_condition(models::resistance(0.3), P, n, grid), DomainError);
    const double over[] = {r1.sigma};
    CHECK_THROWS_AS(lambda_condition(m, P, n, over), DomainError);
    // a parallel run is identical
    CHECK(lambda_condition(m, P, n, grid, 1e-11, 1).residual == rep.residual);
}

TEST_CASE("max/min mixture has no Lambda term") {
    ModelSpec mm{{{0.5, fns::max()}, {0.5, fns::min()}}, "maxmin"};
    const auto r = schedule(P, 2000);
    for (double v : {-20.0, -3.0, 0.0, 2.5, 10.0}) {
        CHECK(expected_lambda(mm, r, v) == 0.0);
        const double Pz = r.q + (1 - r.q) * Psi_n(r, v);
        CHECK(law_V(mm, P, r, v) == doctest::Approx(Pz).epsilon(1e-15));
    }
}

TEST_CASE("lower bound") {
    const long n = 1000000;
    const auto r = schedule(P, n);
    CHECK(lower_bound(P, n, 1.0) == 0.0);
    CHECK(lower_bound(P, n, -1 - P.delta - 0.5) == doctest::Approx(1 - r.q));
    for (double x : {-0.5, 0.0, 0.5}) CHECK(std::abs(lower_bound(P, n, x) - lower_bound_limit(P, x)) < 0.05);
    const double c0 = c0_from_lambda0(P, 1000, 0.5);
    CHECK(c0 == doctest::Approx(std::log(2.0) + schedule(P, 1000).sigma));
    CHECK(lower_bound(P, n, 0.0, c0) <= lower_bound(P, n, 0.0));
    CHECK_THROWS_AS(c0_from_lambda0(P, 1000, 0.0), DomainError);
    // the gap closes along n
    CHECK(std::abs(lower_bound(P, 1L << 40, 0.0) - lower_bound_limit(P, 0.0)) <
          std::abs(lower_bound(P, n, 0.0) - lower_bound_limit(P, 0.0)));
}

TEST_CASE("law of V_n matches its Monte Carlo") {
    const auto m = models::hipster();
    const long n = 1000;
    const auto grid = default_vgrid(P, n, 60);
    const auto rep = domination_check(m, P, n, 100000, 17, grid, 4);
    CHECK(rep.ks_formula_vs_mc <= rep.ks_budget);
    const auto rep2 = domination_check(models::power_mean({1.0, -1.0}, {0.5, 0.5}), P, n, 100000, 18, grid, 4);
    CHECK(rep2.ks_formula_vs_mc <= rep2.ks_budget);
}

TEST_CASE("schedule asymptotics") {
    const auto t = dyadic_threshold(1L << 30, [](long n) {
        return schedule_ordering_holds(P, schedule(P, n), schedule(P, n + 1));
    });
    REQUIRE(t);
    MESSAGE("ordering threshold n = " << *t);
    double prev_up = 0, prev_down = std::numeric_limits<double>::infinity();
    for (long n = 1L << 10; n <= 1L << 30; n *= 4) {
        const auto r = schedule(P, n), r1 = schedule(P, n + 1);
        const double dq = r1.q - r.q;
        const double up = std::pow(r.tau, 5 - 2 * P.rho) * dq;
        const double down = r.a_tilde * r.a_tilde * std::pow(r.tau_tilde, 3 - P.eta) / dq;
        CHECK(up > prev_up);
        CHECK(down < prev_down);
        prev_up = up;
        prev_down = down;
    }
}
