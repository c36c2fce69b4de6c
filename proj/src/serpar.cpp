#include "homsys/serpar.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

#include <Eigen/Dense>
#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>

#include "homsys/errors.hpp"

namespace homsys {

SPGraph::SPGraph() : nodes_{Node{}} {}

void SPGraph::grow(double p, CounterRng& rng) {
    if (!(p >= 0.0 && p <= 1.0)) throw DomainError("p must lie in [0, 1]");
    const std::size_t n = nodes_.size();
    nodes_.reserve(n + 2 * leaves_);
    for (std::size_t i = 0; i < n; ++i) {
        if (nodes_[i].kind != Kind::leaf) continue;
        const Kind k = rng.uniform() < p ? Kind::series : Kind::parallel;
        const auto l = static_cast<std::int32_t>(nodes_.size());
        nodes_.push_back(Node{});
        nodes_.push_back(Node{});
        nodes_[i] = Node{k, l, l + 1};
    }
    leaves_ *= 2;
    ++rounds_;
}

void SPGraph::grow_all(Kind kind) {
    const std::size_t n = nodes_.size();
    for (std::size_t i = 0; i < n; ++i) {
        if (nodes_[i].kind != Kind::leaf) continue;
        const auto l = static_cast<std::int32_t>(nodes_.size());
        nodes_.push_back(Node{});
        nodes_.push_back(Node{});
        nodes_[i] = Node{kind, l, l + 1};
    }
    leaves_ *= 2;
    ++rounds_;
}

SPGraph SPGraph::flip() const {
    SPGraph out = *this;
    for (auto& nd : out.nodes_) {
        if (nd.kind == Kind::series) nd.kind = Kind::parallel;
        else if (nd.kind == Kind::parallel) nd.kind = Kind::series;
    }
    return out;
}

std::int32_t SPGraph::copy_from(const SPGraph& g, std::int32_t at) {
    const auto me = static_cast<std::int32_t>(nodes_.size());
    nodes_.push_back(Node{g.nodes_[at].kind, -1, -1});
    if (g.nodes_[at].kind != Kind::leaf) {
        const auto l = copy_from(g, g.nodes_[at].left);
        const auto r = copy_from(g, g.nodes_[at].right);
        nodes_[me].left = l;
        nodes_[me].right = r;
    }
    return me;
}

SPGraph SPGraph::compose(Kind kind, const SPGraph& a, const SPGraph& b) {
    SPGraph out;
    out.nodes_[0].kind = kind;
    const auto l = out.copy_from(a, 0);
    const auto r = out.copy_from(b, 0);
    out.nodes_[0].left = l;
    out.nodes_[0].right = r;
    out.leaves_ = a.leaves_ + b.leaves_;
    out.rounds_ = 1 + std::max(a.rounds_, b.rounds_);
    return out;
}

namespace {
Reduced fold(const std::vector<SPGraph::Node>& nodes, std::int32_t i) {
    const auto& nd = nodes[static_cast<std::size_t>(i)];
    if (nd.kind == SPGraph::Kind::leaf) return {1.0, 1.0};
    const Reduced l = fold(nodes, nd.left), r = fold(nodes, nd.right);
    if (nd.kind == SPGraph::Kind::series) return {l.resistance + r.resistance, l.distance + r.distance};
    return {1.0 / (1.0 / l.resistance + 1.0 / r.resistance), std::min(l.distance, r.distance)};
}
}  // namespace

Reduced reduce(const SPGraph& g) { return fold(g.nodes(), g.root()); }

SPGraph random_sp_graph(double p, int n, std::uint64_t seed) {
    SPGraph g;
    for (int k = 0; k < n; ++k) {
        CounterRng rng(seed, 0, static_cast<std::uint32_t>(k));
        g.grow(p, rng);
    }
    return g;
}

ExplicitGraph to_explicit(const SPGraph& g) {
    if (g.rounds() > 16) throw DomainError("explicit graphs are capped at 16 rounds");
    ExplicitGraph out;
    out.nodes = 2;
    out.edges.reserve(g.edge_count());
    // explicit stack instead of recursion: (tree node, u, v)
    std::vector<std::tuple<std::int32_t, int, int>> stack{{g.root(), 0, 1}};
    while (!stack.empty()) {
        auto [i, u, v] = stack.back();
        stack.pop_back();
        const auto& nd = g.nodes()[static_cast<std::size_t>(i)];
        switch (nd.kind) {
            case SPGraph::Kind::leaf:
                out.edges.emplace_back(u, v);
                break;
            case SPGraph::Kind::series: {
                const int w = out.nodes++;
                stack.emplace_back(nd.right, w, v);
                stack.emplace_back(nd.left, u, w);
                break;
            }
            case SPGraph::Kind::parallel:
                stack.emplace_back(nd.right, u, v);
                stack.emplace_back(nd.left, u, v);
                break;
        }
    }
    return out;
}

namespace {

std::vector<std::vector<int>> adjacency(const ExplicitGraph& g) {
    std::vector<std::vector<int>> adj(static_cast<std::size_t>(g.nodes));
    for (auto [u, v] : g.edges) {
        adj[static_cast<std::size_t>(u)].push_back(v);
        adj[static_cast<std::size_t>(v)].push_back(u);
    }
    return adj;
}

std::vector<int> bfs(const ExplicitGraph& g, int from) {
    const auto adj = adjacency(g);
    std::vector<int> dist(static_cast<std::size_t>(g.nodes), -1);
    std::queue<int> q;
    dist[static_cast<std::size_t>(from)] = 0;
    q.push(from);
    while (!q.empty()) {
        const int u = q.front();
        q.pop();
        for (int w : adj[static_cast<std::size_t>(u)])
            if (dist[static_cast<std::size_t>(w)] < 0) {
                dist[static_cast<std::size_t>(w)] = dist[static_cast<std::size_t>(u)] + 1;
                q.push(w);
            }
    }
    return dist;
}

}  // namespace

double distance_exact(const ExplicitGraph& g) {
    const int d = bfs(g, g.a)[static_cast<std::size_t>(g.z)];
    if (d < 0) throw StructuralError("a and z are disconnected");
    return d;
}

double resistance_exact(const ExplicitGraph& g, LaplacianSolver solver) {
    const auto reach = bfs(g, g.a);
    if (reach[static_cast<std::size_t>(g.z)] < 0) throw StructuralError("a and z are disconnected");
    if (std::any_of(reach.begin(), reach.end(), [](int d) { return d < 0; }))
        throw StructuralError("graph has nodes unreachable from a");

    // reduced Laplacian: node z removed, remaining nodes renumbered
    const int n = g.nodes - 1;
    auto idx = [&](int u) { return u < g.z ? u : u - 1; };
    if (solver == LaplacianSolver::automatic) solver = n <= 2000 ? LaplacianSolver::dense : LaplacianSolver::cg;

    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
    rhs[idx(g.a)] = 1.0;

    if (solver == LaplacianSolver::dense) {
        Eigen::MatrixXd L = Eigen::MatrixXd::Zero(n, n);
        for (auto [u, v] : g.edges) {
            if (u == v) continue;
            if (u != g.z) L(idx(u), idx(u)) += 1.0;
            if (v != g.z) L(idx(v), idx(v)) += 1.0;
            if (u != g.z && v != g.z) {
                L(idx(u), idx(v)) -= 1.0;
                L(idx(v), idx(u)) -= 1.0;
            }
        }
        const Eigen::VectorXd phi = L.ldlt().solve(rhs);
        return phi[idx(g.a)];
    }

    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(4 * g.edges.size());
    for (auto [u, v] : g.edges) {
        if (u == v) continue;
        if (u != g.z) trips.emplace_back(idx(u), idx(u), 1.0);
        if (v != g.z) trips.emplace_back(idx(v), idx(v), 1.0);
        if (u != g.z && v != g.z) {
            trips.emplace_back(idx(u), idx(v), -1.0);
            trips.emplace_back(idx(v), idx(u), -1.0);
        }
    }
    Eigen::SparseMatrix<double> L(n, n);
    L.setFromTriplets(trips.begin(), trips.end());
    if (solver == LaplacianSolver::sparse_ldlt) {
        Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(L);
        if (ldlt.info() != Eigen::Success) throw StructuralError("Laplacian factorization failed");
        return ldlt.solve(rhs)[idx(g.a)];
    }
    Eigen::ConjugateGradient<Eigen::SparseMatrix<double>, Eigen::Lower | Eigen::Upper,
                             Eigen::DiagonalPreconditioner<double>>
        cg;
    cg.setTolerance(1e-12);
    cg.setMaxIterations(20 * n);
    cg.compute(L);
    const Eigen::VectorXd phi = cg.solve(rhs);
    if (cg.info() != Eigen::Success) throw NumericalError("conjugate gradient did not converge");
    return phi[idx(g.a)];
}

}  // namespace homsys
