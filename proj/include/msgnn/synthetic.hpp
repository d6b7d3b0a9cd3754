#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "msgnn/dense.hpp"
#include "msgnn/graph.hpp"
#include "msgnn/rng.hpp"

namespace msgnn {

// C x C meta-graph adjacency: |F(k,l)| scales the edge probability between
// blocks k and l, the sign of F(k,l) sets the edge sign.
struct MetaGraph {
    RMat f;

    int num_blocks() const { return static_cast<int>(f.rows); }

    static MetaGraph from_matrix(RMat m) {
        if (m.rows != m.cols) throw std::invalid_argument("MetaGraph: matrix not square");
        for (double v : m.a)
            if (!(std::abs(v) <= 1.0)) throw std::invalid_argument("MetaGraph: entries must lie in [-1, 1]");
        return MetaGraph{std::move(m)};
    }
};

// Three-block meta-graph with directional noise gamma in [0, 0.5].
inline MetaGraph meta_f1(double gamma) {
    if (!(gamma >= 0.0 && gamma <= 0.5)) throw std::invalid_argument("meta_f1: gamma out of [0, 0.5]");
    RMat f(3, 3);
    const double g = gamma;
    f(0, 0) = 0.5;      f(0, 1) = g;        f(0, 2) = -g;
    f(1, 0) = 1.0 - g;  f(1, 1) = 0.5;      f(1, 2) = -0.5;
    f(2, 0) = -1.0 + g; f(2, 1) = -0.5;     f(2, 2) = 0.5;
    return MetaGraph::from_matrix(std::move(f));
}

// Four-block variant.
inline MetaGraph meta_f2(double gamma) {
    if (!(gamma >= 0.0 && gamma <= 0.5)) throw std::invalid_argument("meta_f2: gamma out of [0, 0.5]");
    RMat f(4, 4);
    const double g = gamma;
    f(0, 0) = 0.5;      f(0, 1) = g;        f(0, 2) = -g;    f(0, 3) = -g;
    f(1, 0) = 1.0 - g;  f(1, 1) = 0.5;      f(1, 2) = -0.5;  f(1, 3) = -g;
    f(2, 0) = -1.0 + g; f(2, 1) = -0.5;     f(2, 2) = 0.5;   f(2, 3) = -g;
    f(3, 0) = -1.0 + g; f(3, 1) = -1.0 + g; f(3, 2) = -1.0 + g; f(3, 3) = 0.5;
    return MetaGraph::from_matrix(std::move(f));
}

// Nondecreasing block sizes summing to n with max/min ratio close to rho:
// proportional to the geometric sequence rho^(t / (C-1)), largest-remainder
// rounding, then sorted.
inline std::vector<index_t> block_sizes(index_t n, int num_blocks, double rho) {
    if (num_blocks < 1 || n < num_blocks) throw std::invalid_argument("block_sizes: need n >= C >= 1");
    if (rho < 1.0) throw std::invalid_argument("block_sizes: rho must be >= 1");
    const int c = num_blocks;
    std::vector<double> weight(static_cast<std::size_t>(c), 1.0);
    if (c > 1)
        for (int t = 0; t < c; ++t)
            weight[static_cast<std::size_t>(t)] = std::pow(rho, static_cast<double>(t) / static_cast<double>(c - 1));
    double total = 0.0;
    for (double w : weight) total += w;

    std::vector<index_t> sizes(static_cast<std::size_t>(c));
    std::vector<std::pair<double, int>> remainders;
    index_t assigned = 0;
    for (int t = 0; t < c; ++t) {
        const double quota = static_cast<double>(n) * weight[static_cast<std::size_t>(t)] / total;
        sizes[static_cast<std::size_t>(t)] = static_cast<index_t>(std::floor(quota));
        assigned += sizes[static_cast<std::size_t>(t)];
        remainders.emplace_back(quota - std::floor(quota), t);
    }
    std::sort(remainders.begin(), remainders.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        return a.second < b.second;
    });
    for (index_t r = 0; r < n - assigned; ++r)
        ++sizes[static_cast<std::size_t>(remainders[static_cast<std::size_t>(r) % remainders.size()].second)];
    // every block must be populated
    std::sort(sizes.begin(), sizes.end());
    while (sizes.front() == 0) {
        ++sizes.front();
        --sizes.back();
        std::sort(sizes.begin(), sizes.end());
    }
    return sizes;
}

struct SdsbmParams {
    MetaGraph meta;
    index_t n = 0;
    double p = 0.0;
    double rho = 1.0;
    double eta = 0.0;
    std::uint64_t seed = 0;

    void validate() const {
        if (n < meta.num_blocks()) throw std::invalid_argument("SdsbmParams: n smaller than block count");
        if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("SdsbmParams: p out of [0, 1]");
        if (rho < 1.0) throw std::invalid_argument("SdsbmParams: rho must be >= 1");
        if (!(eta >= 0.0 && eta <= 0.5)) throw std::invalid_argument("SdsbmParams: eta out of [0, 0.5]");
    }
};

struct GeneratedGraph {
    SignedDiGraph graph;
    std::vector<int> labels;  // labels[node] = block
};

namespace detail {

// contiguous block assignment over a seeded shuffle of node ids
inline std::vector<int> assign_blocks(index_t n, const std::vector<index_t>& sizes, Rng& rng) {
    std::vector<index_t> ids(static_cast<std::size_t>(n));
    for (index_t i = 0; i < n; ++i) ids[static_cast<std::size_t>(i)] = i;
    rng.shuffle(ids);
    std::vector<int> labels(static_cast<std::size_t>(n), 0);
    index_t pos = 0;
    for (std::size_t b = 0; b < sizes.size(); ++b)
        for (index_t k = 0; k < sizes[b]; ++k) labels[static_cast<std::size_t>(ids[static_cast<std::size_t>(pos++)])] = static_cast<int>(b);
    return labels;
}

}  // namespace detail

// Signed directed stochastic block model: each ordered pair (i, j), i != j,
// carries an edge with probability p |F(k,l)|, signed by F(k,l); afterwards
// every edge sign flips independently with probability eta.
inline GeneratedGraph generate_sdsbm(const SdsbmParams& params) {
    params.validate();
    Rng rng(params.seed);
    const int c = params.meta.num_blocks();
    const std::vector<index_t> sizes = block_sizes(params.n, c, params.rho);
    std::vector<int> labels = detail::assign_blocks(params.n, sizes, rng);

    std::vector<Edge> edges;
    for (index_t i = 0; i < params.n; ++i) {
        const int k = labels[static_cast<std::size_t>(i)];
        for (index_t j = 0; j < params.n; ++j) {
            if (i == j) continue;
            const double f = params.meta.f(k, labels[static_cast<std::size_t>(j)]);
            const double prob = params.p * std::abs(f);
            if (prob <= 0.0) continue;
            if (rng.bernoulli(prob)) edges.push_back({i, j, f >= 0.0 ? 1.0 : -1.0});
        }
    }
    for (Edge& e : edges)
        if (rng.bernoulli(params.eta)) e.weight = -e.weight;

    GeneratedGraph out;
    out.graph = from_edge_list(edges, params.n);
    out.labels = std::move(labels);
    return out;
}

// Signed (undirected) stochastic block model: each unordered pair links with
// probability p, intra-cluster edges positive, inter-cluster negative, every
// sign flipped with probability eta. Stored as reciprocal directed edges.
inline GeneratedGraph generate_ssbm(index_t n, int num_clusters, double p, double rho, double eta,
                                    std::uint64_t seed) {
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("generate_ssbm: p out of [0, 1]");
    if (!(eta >= 0.0 && eta <= 0.5)) throw std::invalid_argument("generate_ssbm: eta out of [0, 0.5]");
    Rng rng(seed);
    const std::vector<index_t> sizes = block_sizes(n, num_clusters, rho);
    std::vector<int> labels = detail::assign_blocks(n, sizes, rng);

    struct Pair {
        index_t i, j;
        double w;
    };
    std::vector<Pair> pairs;
    for (index_t i = 0; i < n; ++i)
        for (index_t j = i + 1; j < n; ++j)
            if (rng.bernoulli(p))
                pairs.push_back({i, j, labels[static_cast<std::size_t>(i)] == labels[static_cast<std::size_t>(j)] ? 1.0 : -1.0});
    for (Pair& pr : pairs)
        if (rng.bernoulli(eta)) pr.w = -pr.w;

    std::vector<Edge> edges;
    edges.reserve(2 * pairs.size());
    for (const Pair& pr : pairs) {
        edges.push_back({pr.i, pr.j, pr.w});
        edges.push_back({pr.j, pr.i, pr.w});
    }
    GeneratedGraph out;
    out.graph = from_edge_list(edges, n);
    out.labels = std::move(labels);
    return out;
}

}  // namespace msgnn
