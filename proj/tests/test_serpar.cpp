#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "homsys/errors.hpp"
#include "homsys/mc.hpp"
#include "homsys/serpar.hpp"

using namespace homsys;
using K = SPGraph::Kind;

TEST_CASE("forced growth") {
    SPGraph s;
    s.grow_all(K::series);
    const auto es = to_explicit(s);
    CHECK(distance_exact(es) == 2);
    CHECK(reduce(s).resistance == 2.0);
    SPGraph p;
    p.grow_all(K::parallel);
    CHECK(reduce(p).resistance == 0.5);
    CHECK(resistance_exact(to_explicit(p)) == doctest::Approx(0.5).epsilon(1e-14));
    s.grow_all(K::series);
    CHECK(distance_exact(to_explicit(s)) == 4);
    CHECK(reduce(s).distance == 4);
}

TEST_CASE("single edge and a hand example") {
    const SPGraph e;
    CHECK(reduce(e).resistance == 1.0);
    CHECK(reduce(e).distance == 1.0);
    CHECK(resistance_exact(to_explicit(e)) == doctest::Approx(1.0));
    CHECK(distance_exact(to_explicit(e)) == 1.0);
    SPGraph pe;
    pe.grow_all(K::parallel);
    const auto g = SPGraph::compose(K::series, pe, SPGraph{});
    CHECK(reduce(g).resistance == 1.5);
    CHECK(reduce(g).distance == 2.0);
    CHECK(resistance_exact(to_explicit(g)) == doctest::Approx(1.5).epsilon(1e-14));
    CHECK(distance_exact(to_explicit(g)) == 2.0);
}

TEST_CASE("edge count doubles") {
    CounterRng r(1, 0, 0);
    SPGraph g;
    for (int k = 1; k <= 10; ++k) {
        g.grow(0.5, r);
        CHECK(g.edge_count() == (std::size_t{1} << k));
        CHECK(to_explicit(g).edges.size() == g.edge_count());
    }
}

TEST_CASE("reduce agrees with the Laplacian and BFS oracles") {
    double worst = 0;
    for (std::uint64_t seed = 0; seed < 60; ++seed) {
        const int n = 4 + int(seed % 9);
        const auto g = random_sp_graph(0.5, n, seed);
        const auto r = reduce(g);
        const auto ex = to_explicit(g);
        const double re = resistance_exact(ex);
        worst = std::max(worst, std::abs(re - r.resistance) / r.resistance);
        CHECK(distance_exact(ex) == r.distance);
        CHECK(r.distance <= double(g.edge_count()));
        CHECK(r.resistance >= std::ldexp(1.0, -n) * (1 - 1e-12));
        CHECK(r.resistance <= std::ldexp(1.0, n) * (1 + 1e-12));
    }
    CHECK(worst < 1e-9);
}

TEST_CASE("all solvers agree") {
    const auto g = random_sp_graph(0.6, 11, 5);
    const auto ex = to_explicit(g);
    const double R = reduce(g).resistance;
    CHECK(std::abs(resistance_exact(ex, LaplacianSolver::cg) / R - 1) < 1e-9);
    CHECK(std::abs(resistance_exact(ex, LaplacianSolver::sparse_ldlt) / R - 1) < 1e-11);
    if (ex.nodes < 3000) CHECK(std::abs(resistance_exact(ex, LaplacianSolver::dense) / R - 1) < 1e-11);
}

TEST_CASE("flipped histories are reciprocal") {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        const auto g = random_sp_graph(0.5, 9, seed);
        CHECK(reduce(g).resistance * reduce(g.flip()).resistance == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("disconnected graphs are rejected") {
    ExplicitGraph g;
    g.nodes = 3;
    g.edges = {{0, 2}};
    CHECK_THROWS_AS(resistance_exact(g), StructuralError);
    CHECK_THROWS_AS(distance_exact(g), StructuralError);
    SPGraph big;
    for (int k = 0; k < 17; ++k) big.grow_all(K::parallel);
    CHECK_THROWS_AS(to_explicit(big), DomainError);
}

TEST_CASE("reduced resistances follow the recursion law") {
    const int n = 8, seeds = 4000;
    std::vector<double> a;
    for (int s = 0; s < seeds; ++s) a.push_back(std::log(reduce(random_sp_graph(0.5, n, 1000 + s)).resistance));
    std::sort(a.begin(), a.end());
    SimOptions opt;
    opt.N = 100000;
    opt.seed = 3;
    const auto sim = simulate(models::resistance(0.5), n, {n}, opt);
    std::vector<double> b = sim.checkpoints[0].rescaled;
    for (auto& v : b) v *= sim.checkpoints[0].scale;
    const double budget = 3 * std::sqrt(1.0 / seeds + 1.0 / opt.N);
    CHECK(ks_two_sample(a, b) <= budget);
}
