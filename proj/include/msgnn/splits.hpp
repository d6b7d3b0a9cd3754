#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "msgnn/graph.hpp"
#include "msgnn/rng.hpp"

namespace msgnn {

// The five link problems: sign (SP), direction (DP), direction + absence
// (3C), sign x direction (4C), sign x direction + absence (5C).
enum class LinkTask { sp, dp, c3, c4, c5 };

inline int num_classes(LinkTask t) {
    switch (t) {
        case LinkTask::sp: return 2;
        case LinkTask::dp: return 2;
        case LinkTask::c3: return 3;
        case LinkTask::c4: return 4;
        case LinkTask::c5: return 5;
    }
    return 0;
}

inline const char* link_task_name(LinkTask t) {
    switch (t) {
        case LinkTask::sp: return "SP";
        case LinkTask::dp: return "DP";
        case LinkTask::c3: return "3C";
        case LinkTask::c4: return "4C";
        case LinkTask::c5: return "5C";
    }
    return "?";
}

struct LabeledPair {
    index_t a = 0;
    index_t b = 0;
    int cls = 0;
};

struct LinkSplit {
    SignedDiGraph observed;  // input graph with test edges removed
    std::vector<LabeledPair> train;
    std::vector<LabeledPair> test;
    LinkTask task = LinkTask::sp;
    std::uint64_t seed = 0;
};

namespace detail {

inline bool task_uses_direction(LinkTask t) { return t != LinkTask::sp; }
inline bool task_has_none_class(LinkTask t) { return t == LinkTask::c3 || t == LinkTask::c5; }
inline int none_class(LinkTask t) { return t == LinkTask::c3 ? 2 : 4; }

}  // namespace detail

// Builds one seeded split. Edge-derived pairs keep their natural class
// frequencies; pairs whose reverse edge also exists would satisfy two class
// conditions and are discarded from the labels (the edges stay in the
// observed graph). "No edge" classes are filled by sampling non-edges to the
// mean of the edge-derived class sizes, separately for train and test.
inline LinkSplit split_links(const SignedDiGraph& g, LinkTask task, double test_frac,
                             std::uint64_t seed) {
    if (!(test_frac > 0.0 && test_frac < 1.0)) throw std::invalid_argument("split_links: test_frac out of (0, 1)");
    Rng rng(seed);

    struct Candidate {
        Edge edge;
        LabeledPair pair;
    };
    std::vector<Candidate> candidates;
    for (const Edge& e : g.edges()) {
        if (e.src == e.dst) continue;  // self-loops carry no pair label
        if (detail::task_uses_direction(task) && g.adj.contains(e.dst, e.src)) continue;
        Candidate c;
        c.edge = e;
        const bool flip = detail::task_uses_direction(task) && rng.bernoulli(0.5);
        c.pair.a = flip ? e.dst : e.src;
        c.pair.b = flip ? e.src : e.dst;
        switch (task) {
            case LinkTask::sp: c.pair.cls = e.weight > 0.0 ? 0 : 1; break;
            case LinkTask::dp:
            case LinkTask::c3: c.pair.cls = flip ? 1 : 0; break;
            case LinkTask::c4:
            case LinkTask::c5: c.pair.cls = (flip ? 2 : 0) + (e.weight > 0.0 ? 0 : 1); break;
        }
        candidates.push_back(std::move(c));
    }

    LinkSplit split;
    split.task = task;
    split.seed = seed;
    if (candidates.empty()) {
        split.observed = g;
        return split;  // everything discarded (e.g. fully reciprocal graph)
    }

    const int edge_classes = detail::task_has_none_class(task) ? num_classes(task) - 1 : num_classes(task);
    {
        std::vector<index_t> counts(static_cast<std::size_t>(edge_classes), 0);
        for (const Candidate& c : candidates) ++counts[static_cast<std::size_t>(c.pair.cls)];
        for (int cls = 0; cls < edge_classes; ++cls)
            if (counts[static_cast<std::size_t>(cls)] == 0)
                throw std::runtime_error(std::string("split_links: class ") + std::to_string(cls) +
                                         " is empty for task " + link_task_name(task));
    }

    std::vector<index_t> order(candidates.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<index_t>(i);
    rng.shuffle(order);
    const index_t n_test = std::llround(test_frac * static_cast<double>(candidates.size()));

    std::set<std::pair<index_t, index_t>> removed;
    for (index_t t = 0; t < static_cast<index_t>(order.size()); ++t) {
        const Candidate& c = candidates[static_cast<std::size_t>(order[static_cast<std::size_t>(t)])];
        if (t < n_test) {
            split.test.push_back(c.pair);
            removed.insert({c.edge.src, c.edge.dst});
        } else {
            split.train.push_back(c.pair);
        }
    }

    std::vector<Edge> kept;
    for (const Edge& e : g.edges())
        if (!removed.count({e.src, e.dst})) kept.push_back(e);
    split.observed = from_edge_list(kept, g.n);

    if (detail::task_has_none_class(task)) {
        std::set<std::pair<index_t, index_t>> used;  // unordered keys of sampled non-edges
        auto sample_none = [&](std::vector<LabeledPair>& into, index_t count) {
            index_t attempts = 0;
            const index_t cap = 200 * count + 1000;
            index_t found = 0;
            while (found < count) {
                if (++attempts > cap) throw std::runtime_error("split_links: not enough non-edges to sample");
                const index_t a = static_cast<index_t>(rng.uniform_int(static_cast<std::uint64_t>(g.n)));
                const index_t b = static_cast<index_t>(rng.uniform_int(static_cast<std::uint64_t>(g.n)));
                if (a == b) continue;
                if (g.adj.contains(a, b) || g.adj.contains(b, a)) continue;
                const auto key = std::minmax(a, b);
                if (used.count({key.first, key.second})) continue;
                used.insert({key.first, key.second});
                into.push_back({a, b, detail::none_class(task)});
                ++found;
            }
        };
        auto mean_class_size = [&](const std::vector<LabeledPair>& pairs) {
            return std::llround(static_cast<double>(pairs.size()) / static_cast<double>(edge_classes));
        };
        sample_none(split.train, mean_class_size(split.train));
        sample_none(split.test, mean_class_size(split.test));
    }
    return split;
}

inline LinkSplit split_links(const SignedDiGraph& g, LinkTask task, std::uint64_t seed) {
    return split_links(g, task, 0.2, seed);
}

// Stratified node split for semi-supervised clustering: per cluster 10% test,
// 10% validation, the rest training, with a seed subset of the training nodes
// carrying known labels.
struct NodeSplit {
    std::vector<index_t> train;
    std::vector<index_t> val;
    std::vector<index_t> test;
    std::vector<index_t> seeds;  // subset of train
};

inline NodeSplit split_nodes(std::span<const int> labels, double test_frac, double val_frac,
                             double seed_frac, std::uint64_t seed) {
    int max_label = -1;
    for (int l : labels) max_label = std::max(max_label, l);
    if (max_label < 0) throw std::invalid_argument("split_nodes: empty labels");
    std::vector<std::vector<index_t>> clusters(static_cast<std::size_t>(max_label) + 1);
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] < 0) throw std::invalid_argument("split_nodes: negative label");
        clusters[static_cast<std::size_t>(labels[i])].push_back(static_cast<index_t>(i));
    }

    Rng rng(seed);
    NodeSplit out;
    for (auto& members : clusters) {
        if (members.size() < 10) throw std::runtime_error("split_nodes: cluster too small");
        rng.shuffle(members);
        const index_t s = static_cast<index_t>(members.size());
        const index_t n_test = std::llround(test_frac * static_cast<double>(s));
        const index_t n_val = std::llround(val_frac * static_cast<double>(s));
        const index_t n_train = s - n_test - n_val;
        if (n_train <= 0) throw std::runtime_error("split_nodes: cluster too small");
        const index_t n_seed = std::max<index_t>(1, std::llround(seed_frac * static_cast<double>(n_train)));
        for (index_t i = 0; i < s; ++i) {
            const index_t node = members[static_cast<std::size_t>(i)];
            if (i < n_test) {
                out.test.push_back(node);
            } else if (i < n_test + n_val) {
                out.val.push_back(node);
            } else {
                out.train.push_back(node);
                if (i < n_test + n_val + n_seed) out.seeds.push_back(node);
            }
        }
    }
    return out;
}

inline NodeSplit split_nodes(std::span<const int> labels, std::uint64_t seed) {
    return split_nodes(labels, 0.1, 0.1, 0.1, seed);
}

}  // namespace msgnn
