#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "homsys/rng.hpp"

namespace homsys {

/// Replacement history of a series-parallel graph as a binary tree stored in
/// a flat arena. Leaves are unit edges.
class SPGraph {
public:
    enum class Kind : std::uint8_t { leaf, series, parallel };
    struct Node {
        Kind kind = Kind::leaf;
        std::int32_t left = -1, right = -1;
    };

    /// The single edge a-z.
    SPGraph();

    /// Replaces every edge by a series pair (probability p) or a parallel pair.
    void grow(double p, CounterRng& rng);
    /// Same with the choice forced for every edge.
    void grow_all(Kind kind);

    /// Series and parallel exchanged everywhere.
    SPGraph flip() const;

    int rounds() const { return rounds_; }
    std::size_t edge_count() const { return leaves_; }
    const std::vector<Node>& nodes() const { return nodes_; }
    std::int32_t root() const { return 0; }

    /// Builds from explicit parts; for tests.
    static SPGraph compose(Kind kind, const SPGraph& a, const SPGraph& b);

private:
    std::int32_t copy_from(const SPGraph& g, std::int32_t at);
    std::vector<Node> nodes_;
    int rounds_ = 0;
    std::size_t leaves_ = 1;
};

struct Reduced {
    double resistance;
    double distance;
};

/// Tree fold: series adds, parallel takes harmonic sum / min.
Reduced reduce(const SPGraph& g);

/// n rounds from the single edge with the stream keyed by (seed, 0, round).
SPGraph random_sp_graph(double p, int n, std::uint64_t seed);

/// Node/edge multigraph derived from the history.
struct ExplicitGraph {
    int nodes = 0;
    int a = 0, z = 1;
    std::vector<std::pair<int, int>> edges;
};

/// Throws DomainError beyond 16 rounds.
ExplicitGraph to_explicit(const SPGraph& g);

enum class LaplacianSolver { automatic, dense, cg, sparse_ldlt };

/// Effective a-z resistance with unit edge resistances: solve L phi = e_a
/// with phi_z = 0. Dense LDLT up to 2000 nodes, else Jacobi-preconditioned CG.
/// Throws StructuralError if a and z are disconnected.
double resistance_exact(const ExplicitGraph& g, LaplacianSolver solver = LaplacianSolver::automatic);
/// Breadth-first a-z distance.
double distance_exact(const ExplicitGraph& g);

}  // namespace homsys
