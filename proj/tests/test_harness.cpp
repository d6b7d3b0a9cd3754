#include <catch2/catch_amalgamated.hpp>

#include <set>

#include "msgnn/features.hpp"
#include "msgnn/metrics.hpp"
#include "msgnn/splits.hpp"
#include "msgnn/synthetic.hpp"
#include "oracle.hpp"

using namespace msgnn;

namespace {

SignedDiGraph toy_graph() {
    return from_edge_list({{0, 1, 0.5},
                           {0, 2, -0.1},
                           {0, 3, 3.0},
                           {1, 0, -3.0},
                           {1, 3, 3.0},
                           {2, 0, 3.0},
                           {3, 1, -1.0},
                           {3, 2, 10.0}});
}

std::vector<double> node_row(const RMat& x, index_t i) {
    std::vector<double> row;
    for (index_t j = 0; j < x.cols; ++j) row.push_back(x(i, j));
    return row;
}

}  // namespace

TEST_CASE("feature tuples on the toy graph") {
    const SignedDiGraph g = toy_graph();
    auto raw = [](bool s, WeightMode w) { return FeatureSpec{s, w, /*standardize=*/false}; };

    CHECK(node_row(build_features(g, raw(false, WeightMode::none)), 0) == std::vector<double>{2.0, 3.0});
    CHECK(node_row(build_features(g, raw(false, WeightMode::net_sum)), 0) == std::vector<double>{0.0, 3.4});
    CHECK(node_row(build_features(g, raw(false, WeightMode::abs_sum)), 0) == std::vector<double>{6.0, 3.6});
    CHECK(node_row(build_features(g, raw(true, WeightMode::none)), 0) == std::vector<double>{1.0, 2.0, 1.0, 1.0});
    CHECK(node_row(build_features(g, raw(true, WeightMode::net_sum)), 0) ==
          std::vector<double>{3.0, 3.5, 3.0, 0.1});
}

TEST_CASE("feature columns standardize to zero mean unit variance") {
    Rng rng(8);
    const SignedDiGraph g = oracle::random_graph(rng, 40);
    const RMat x = build_features(g, FeatureSpec{true, WeightMode::net_sum, true});
    for (index_t j = 0; j < x.cols; ++j) {
        double mean = 0.0, var = 0.0;
        for (index_t i = 0; i < x.rows; ++i) mean += x(i, j);
        mean /= static_cast<double>(x.rows);
        for (index_t i = 0; i < x.rows; ++i) var += (x(i, j) - mean) * (x(i, j) - mean);
        var /= static_cast<double>(x.rows);
        CHECK(std::abs(mean) < 1e-12);
        CHECK((var == Catch::Approx(1.0).margin(1e-9) || var == 0.0));
    }
}

TEST_CASE("edge reversal swaps in and out columns") {
    Rng rng(18);
    for (int trial = 0; trial < 20; ++trial) {
        const SignedDiGraph g = oracle::random_graph(rng, 25);
        std::vector<Edge> reversed;
        for (const Edge& e : g.edges()) reversed.push_back({e.dst, e.src, e.weight});
        const SignedDiGraph gr = from_edge_list(reversed, g.n);
        const FeatureSpec spec{true, WeightMode::abs_sum, false};
        const RMat a = build_features(g, spec);
        const RMat b = build_features(gr, spec);
        for (index_t i = 0; i < g.n; ++i) {
            REQUIRE(a(i, 0) == b(i, 1));  // in+ <-> out+
            REQUIRE(a(i, 1) == b(i, 0));
            REQUIRE(a(i, 2) == b(i, 3));  // in- <-> out-
            REQUIRE(a(i, 3) == b(i, 2));
        }
    }
}

TEST_CASE("eigen features shape and sign structure") {
    const GeneratedGraph gen = generate_ssbm(90, 3, 0.3, 1.0, 0.0, 21);
    const RMat x = build_eigen_features(gen.graph, 3);
    CHECK(x.rows == gen.graph.n);
    CHECK(x.cols == 3);
    for (double v : x.a) CHECK(std::isfinite(v));
}

TEST_CASE("split_links SP") {
    SECTION("all-positive graph misses the negative class") {
        Rng rng(2);
        std::vector<Edge> edges;
        for (index_t i = 0; i < 30; ++i)
            for (index_t j = 0; j < 30; ++j)
                if (i != j && rng.bernoulli(0.2)) edges.push_back({i, j, 1.0});
        const SignedDiGraph g = from_edge_list(edges, 30);
        CHECK_THROWS_AS(split_links(g, LinkTask::sp, 0.2, 1), std::runtime_error);
    }
    SECTION("classes follow the edge signs and test edges leave the observed graph") {
        Rng rng(4);
        const SignedDiGraph g = oracle::random_graph(rng, 40);
        const LinkSplit split = split_links(g, LinkTask::sp, 0.2, 9);
        const double usable = static_cast<double>(split.train.size() + split.test.size());
        CHECK(std::abs(static_cast<double>(split.test.size()) - 0.2 * usable) <= 1.0);
        for (const LabeledPair& p : split.train) {
            REQUIRE(g.adj.contains(p.a, p.b));
            REQUIRE(p.cls == (g.adj.at(p.a, p.b) > 0 ? 0 : 1));
            REQUIRE(split.observed.adj.contains(p.a, p.b));
        }
        for (const LabeledPair& p : split.test) {
            REQUIRE(g.adj.contains(p.a, p.b));
            REQUIRE_FALSE(split.observed.adj.contains(p.a, p.b));
        }
    }
}

TEST_CASE("split_links DP discards reciprocal pairs") {
    const SignedDiGraph g = from_edge_list({{0, 1, 1.0}, {1, 0, -1.0}});
    const LinkSplit split = split_links(g, LinkTask::dp, 0.2, 3);
    CHECK(split.train.empty());
    CHECK(split.test.empty());
    CHECK(split.observed.num_edges() == 2);
}

TEST_CASE("split_links 3C classes verified exhaustively") {
    Rng rng(12);
    for (int trial = 0; trial < 10; ++trial) {
        const SignedDiGraph g = oracle::random_graph(rng, 12);
        LinkSplit split;
        try {
            split = split_links(g, LinkTask::c3, 0.2, 100 + trial);
        } catch (const std::runtime_error&) {
            continue;  // a class came out empty on this tiny graph
        }
        auto verify = [&](const std::vector<LabeledPair>& pairs) {
            for (const LabeledPair& p : pairs) {
                const bool fwd = g.adj.contains(p.a, p.b);
                const bool bwd = g.adj.contains(p.b, p.a);
                switch (p.cls) {
                    case 0: REQUIRE((fwd && !bwd)); break;
                    case 1: REQUIRE((bwd && !fwd)); break;
                    case 2: REQUIRE((!fwd && !bwd)); break;
                    default: FAIL("unknown class");
                }
            }
        };
        verify(split.train);
        verify(split.test);
    }
}

TEST_CASE("split_links 4C and 5C class uniqueness") {
    Rng rng(13);
    for (int trial = 0; trial < 10; ++trial) {
        const SignedDiGraph g = oracle::random_graph(rng, 14);
        for (const LinkTask task : {LinkTask::c4, LinkTask::c5}) {
            LinkSplit split;
            try {
                split = split_links(g, task, 0.2, 55 + trial);
            } catch (const std::runtime_error&) {
                continue;
            }
            auto verify = [&](const std::vector<LabeledPair>& pairs) {
                for (const LabeledPair& p : pairs) {
                    // count how many class conditions the pair satisfies
                    int conditions = 0;
                    if (g.adj.at(p.a, p.b) > 0) ++conditions;
                    if (g.adj.at(p.a, p.b) < 0) ++conditions;
                    if (g.adj.at(p.b, p.a) > 0) ++conditions;
                    if (g.adj.at(p.b, p.a) < 0) ++conditions;
                    if (task == LinkTask::c5 && !g.adj.contains(p.a, p.b) && !g.adj.contains(p.b, p.a))
                        ++conditions;
                    REQUIRE(conditions == 1);
                }
            };
            verify(split.train);
            verify(split.test);
        }
    }
}

TEST_CASE("split_links determinism") {
    Rng rng(14);
    // one-way edges with both signs so every 5C class is populated
    std::vector<Edge> edges;
    for (index_t i = 0; i < 30; ++i)
        for (index_t j = 0; j < 30; ++j) {
            if (i >= j) continue;
            if (!rng.bernoulli(0.3)) continue;
            edges.push_back({i, j, rng.bernoulli(0.5) ? 1.0 : -1.0});
        }
    const SignedDiGraph g = from_edge_list(edges, 30);
    const LinkSplit a = split_links(g, LinkTask::c5, 0.2, 777);
    const LinkSplit b = split_links(g, LinkTask::c5, 0.2, 777);
    REQUIRE(a.train.size() == b.train.size());
    REQUIRE(a.test.size() == b.test.size());
    for (std::size_t i = 0; i < a.train.size(); ++i) {
        CHECK(a.train[i].a == b.train[i].a);
        CHECK(a.train[i].b == b.train[i].b);
        CHECK(a.train[i].cls == b.train[i].cls);
    }
}

TEST_CASE("split_nodes") {
    SECTION("single 100-node cluster gives 10/10/80 with 8 seeds") {
        std::vector<int> labels(100, 0);
        const NodeSplit split = split_nodes(labels, 5);
        CHECK(split.test.size() == 10);
        CHECK(split.val.size() == 10);
        CHECK(split.train.size() == 80);
        CHECK(split.seeds.size() == 8);
    }
    SECTION("partitions disjoint and exhaustive") {
        Rng rng(15);
        for (int trial = 0; trial < 50; ++trial) {
            const int clusters = 1 + static_cast<int>(rng.uniform_int(4));
            std::vector<int> labels;
            for (int c = 0; c < clusters; ++c) {
                const int size = 10 + static_cast<int>(rng.uniform_int(60));
                labels.insert(labels.end(), size, c);
            }
            rng.shuffle(labels);
            const NodeSplit split = split_nodes(labels, trial);
            std::set<index_t> seen;
            for (const auto* part : {&split.train, &split.val, &split.test})
                for (index_t node : *part) REQUIRE(seen.insert(node).second);
            REQUIRE(seen.size() == labels.size());
            // seeds are training nodes
            const std::set<index_t> train_set(split.train.begin(), split.train.end());
            for (index_t node : split.seeds) REQUIRE(train_set.count(node));
            // per-cluster proportions within rounding
            for (int c = 0; c < clusters; ++c) {
                index_t cluster_size = 0, cluster_test = 0, cluster_val = 0;
                for (std::size_t i = 0; i < labels.size(); ++i) cluster_size += labels[i] == c;
                for (index_t node : split.test) cluster_test += labels[static_cast<std::size_t>(node)] == c;
                for (index_t node : split.val) cluster_val += labels[static_cast<std::size_t>(node)] == c;
                REQUIRE(std::abs(static_cast<double>(cluster_test) - 0.1 * static_cast<double>(cluster_size)) <= 1.0);
                REQUIRE(std::abs(static_cast<double>(cluster_val) - 0.1 * static_cast<double>(cluster_size)) <= 1.0);
            }
        }
    }
    SECTION("cluster too small") {
        std::vector<int> labels(9, 0);
        CHECK_THROWS_AS(split_nodes(labels, 1), std::runtime_error);
    }
}

TEST_CASE("accuracy") {
    const std::vector<int> a{0, 1, 2, 1};
    CHECK(accuracy(a, a) == 1.0);
    const std::vector<int> b{0, 1, 0, 0};
    CHECK(accuracy(a, b) == 0.5);
    CHECK_THROWS_AS(accuracy(std::vector<int>{}, std::vector<int>{}), std::invalid_argument);
}

TEST_CASE("ari") {
    SECTION("identical and relabeled partitions") {
        const std::vector<int> a{0, 0, 1, 1, 2, 2};
        CHECK(ari(a, a) == 1.0);
        const std::vector<int> renamed{5, 5, 9, 9, 7, 7};
        CHECK(ari(renamed, a) == 1.0);
    }
    SECTION("fixed fixture matches the pair-counting oracle") {
        const std::vector<int> pred{0, 0, 1, 1};
        const std::vector<int> truth{0, 0, 0, 1};
        const double want = oracle::ari_pairs(pred, truth);
        CHECK(ari(pred, truth) == Catch::Approx(want).margin(1e-15));
        // contingency hand count: index 1, expected 1, max 2.5
        CHECK(want == Catch::Approx(0.0).margin(1e-15));
    }
    SECTION("matches the brute-force pair oracle") {
        Rng rng(16);
        for (int trial = 0; trial < 50; ++trial) {
            const std::size_t n = 5 + rng.uniform_int(40);
            std::vector<int> x(n), y(n);
            for (std::size_t i = 0; i < n; ++i) {
                x[i] = static_cast<int>(rng.uniform_int(4));
                y[i] = static_cast<int>(rng.uniform_int(4));
            }
            REQUIRE(ari(x, y) == Catch::Approx(oracle::ari_pairs(x, y)).margin(1e-12));
        }
    }
    SECTION("uniform random labelings average near zero") {
        Rng rng(17);
        std::vector<int> truth(60);
        for (std::size_t i = 0; i < truth.size(); ++i) truth[i] = static_cast<int>(i % 3);
        double total = 0.0;
        const int draws = 1000;
        for (int d = 0; d < draws; ++d) {
            std::vector<int> random_labels(truth.size());
            for (int& v : random_labels) v = static_cast<int>(rng.uniform_int(3));
            total += ari(random_labels, truth);
        }
        CHECK(std::abs(total / draws) < 0.02);
    }
}
