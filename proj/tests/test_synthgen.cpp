#include <catch2/catch_amalgamated.hpp>

#include "msgnn/graph.hpp"
#include "msgnn/synthetic.hpp"

using namespace msgnn;

TEST_CASE("meta_f1 displays") {
    SECTION("gamma = 0") {
        const MetaGraph f = meta_f1(0.0);
        const double want[3][3] = {{0.5, 0.0, 0.0}, {1.0, 0.5, -0.5}, {-1.0, -0.5, 0.5}};
        for (index_t i = 0; i < 3; ++i)
            for (index_t j = 0; j < 3; ++j) REQUIRE(f.f(i, j) == want[i][j]);
    }
    SECTION("gamma = 0.5 first row") {
        const MetaGraph f = meta_f1(0.5);
        CHECK(f.f(0, 0) == 0.5);
        CHECK(f.f(0, 1) == 0.5);
        CHECK(f.f(0, 2) == -0.5);
    }
    SECTION("off-diagonal antisymmetry of magnitudes") {
        // |F(k,l) + F(l,k)| = 1 off the diagonal for every gamma
        for (double gamma : {0.0, 0.1, 0.25, 0.4, 0.5}) {
            const MetaGraph f = meta_f1(gamma);
            for (index_t k = 0; k < 3; ++k)
                for (index_t l = 0; l < 3; ++l) {
                    if (k == l) continue;
                    CHECK(std::abs(std::abs(f.f(k, l) + f.f(l, k)) - 1.0) < 1e-15);
                }
        }
    }
    SECTION("gamma out of range") {
        CHECK_THROWS_AS(meta_f1(-0.1), std::invalid_argument);
        CHECK_THROWS_AS(meta_f1(0.6), std::invalid_argument);
    }
}

TEST_CASE("meta_f2 displays") {
    SECTION("gamma = 0 last row") {
        const MetaGraph f = meta_f2(0.0);
        CHECK(f.f(3, 0) == -1.0);
        CHECK(f.f(3, 1) == -1.0);
        CHECK(f.f(3, 2) == -1.0);
        CHECK(f.f(3, 3) == 0.5);
    }
    SECTION("gamma = 0.5 upper-right block") {
        const MetaGraph f = meta_f2(0.5);
        CHECK(f.f(0, 1) == 0.5);
        CHECK(f.f(0, 2) == -0.5);
        CHECK(f.f(0, 3) == -0.5);
        CHECK(f.f(1, 2) == -0.5);
        CHECK(f.f(1, 3) == -0.5);
        CHECK(f.f(2, 3) == -0.5);
    }
    SECTION("always four blocks") {
        for (double gamma : {0.0, 0.25, 0.5}) CHECK(meta_f2(gamma).num_blocks() == 4);
    }
}

TEST_CASE("block sizes") {
    SECTION("equal split") {
        CHECK(block_sizes(1000, 4, 1.0) == std::vector<index_t>{250, 250, 250, 250});
    }
    SECTION("two blocks at rho 1.5") {
        CHECK(block_sizes(1000, 2, 1.5) == std::vector<index_t>{400, 600});
    }
    SECTION("conservation and monotonicity on random parameters") {
        Rng rng(3);
        for (int trial = 0; trial < 100; ++trial) {
            const int c = 1 + static_cast<int>(rng.uniform_int(8));
            const index_t n = c + static_cast<index_t>(rng.uniform_int(5000));
            const double rho = 1.0 + rng.uniform(0.0, 4.0);
            const auto sizes = block_sizes(n, c, rho);
            REQUIRE(static_cast<int>(sizes.size()) == c);
            index_t total = 0;
            for (std::size_t b = 0; b < sizes.size(); ++b) {
                REQUIRE(sizes[b] >= 1);
                if (b) REQUIRE(sizes[b] >= sizes[b - 1]);
                total += sizes[b];
            }
            REQUIRE(total == n);
        }
    }
    SECTION("ratio approximates rho") {
        const auto sizes = block_sizes(10000, 3, 2.0);
        const double ratio = static_cast<double>(sizes.back()) / static_cast<double>(sizes.front());
        CHECK(ratio == Catch::Approx(2.0).epsilon(0.01));
    }
}

TEST_CASE("sdsbm generation basics") {
    SECTION("p = 0 gives the empty graph") {
        const GeneratedGraph gen = generate_sdsbm({meta_f1(0.25), 60, 0.0, 1.0, 0.0, 9});
        CHECK(gen.graph.num_edges() == 0);
        CHECK(gen.labels.size() == 60);
    }
    SECTION("diagonal-only meta keeps edges positive and intra-cluster") {
        RMat f(2, 2);
        f(0, 0) = 1.0;
        f(1, 1) = 0.5;
        const GeneratedGraph gen =
            generate_sdsbm({MetaGraph::from_matrix(std::move(f)), 80, 0.5, 1.0, 0.0, 17});
        REQUIRE(gen.graph.num_edges() > 0);
        for (const Edge& e : gen.graph.edges()) {
            CHECK(e.weight == 1.0);
            CHECK(gen.labels[static_cast<std::size_t>(e.src)] == gen.labels[static_cast<std::size_t>(e.dst)]);
        }
    }
    SECTION("label block sizes match the size rule") {
        const GeneratedGraph gen = generate_sdsbm({meta_f1(0.0), 501, 0.05, 1.5, 0.1, 23});
        const auto want = block_sizes(501, 3, 1.5);
        std::vector<index_t> counts(3, 0);
        for (int l : gen.labels) ++counts[static_cast<std::size_t>(l)];
        std::sort(counts.begin(), counts.end());
        CHECK(counts == want);
    }
    SECTION("no self loops") {
        const GeneratedGraph gen = generate_sdsbm({meta_f1(0.0), 100, 0.3, 1.0, 0.2, 31});
        for (const Edge& e : gen.graph.edges()) CHECK(e.src != e.dst);
    }
    SECTION("determinism is byte-for-byte") {
        const SdsbmParams params{meta_f2(0.25), 150, 0.1, 1.5, 0.2, 77};
        const GeneratedGraph a = generate_sdsbm(params);
        const GeneratedGraph b = generate_sdsbm(params);
        REQUIRE(a.labels == b.labels);
        REQUIRE(a.graph.adj.col == b.graph.adj.col);
        REQUIRE(a.graph.adj.val == b.graph.adj.val);
        REQUIRE(a.graph.adj.row_ptr == b.graph.adj.row_ptr);
    }
    SECTION("parameter validation") {
        CHECK_THROWS_AS(generate_sdsbm({meta_f1(0.0), 100, 1.5, 1.0, 0.0, 1}), std::invalid_argument);
        CHECK_THROWS_AS(generate_sdsbm({meta_f1(0.0), 100, 0.1, 1.0, 0.7, 1}), std::invalid_argument);
        CHECK_THROWS_AS(generate_sdsbm({meta_f1(0.0), 2, 0.1, 1.0, 0.0, 1}), std::invalid_argument);
    }
}

TEST_CASE("sdsbm block-to-block frequencies concentrate") {
    // over 50 seeds the empirical C0->C1 frequency at gamma = 0 must be 0 and
    // C1->C0 must sit within 3 sigma of p
    const double p = 0.1;
    index_t trials_10 = 0, hits_10 = 0, hits_01 = 0;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const GeneratedGraph gen = generate_sdsbm({meta_f1(0.0), 300, p, 1.0, 0.0, seed});
        std::vector<index_t> counts(3, 0);
        for (int l : gen.labels) ++counts[static_cast<std::size_t>(l)];
        trials_10 += counts[1] * counts[0];
        for (const Edge& e : gen.graph.edges()) {
            const int ks = gen.labels[static_cast<std::size_t>(e.src)];
            const int kd = gen.labels[static_cast<std::size_t>(e.dst)];
            if (ks == 1 && kd == 0) ++hits_10;
            if (ks == 0 && kd == 1) ++hits_01;
        }
    }
    CHECK(hits_01 == 0);  // |F(0,1)| = 0 at gamma = 0
    const double mean = p * static_cast<double>(trials_10);
    const double sigma = std::sqrt(static_cast<double>(trials_10) * p * (1.0 - p));
    CHECK(std::abs(static_cast<double>(hits_10) - mean) <= 3.0 * sigma);
}

TEST_CASE("sdsbm degenerate undirected positive case") {
    // all-nonnegative symmetric meta with eta = 0 cannot produce negative
    // symmetrized entries
    RMat f(2, 2);
    f(0, 0) = 0.8;
    f(0, 1) = 0.3;
    f(1, 0) = 0.3;
    f(1, 1) = 0.6;
    const GeneratedGraph gen = generate_sdsbm({MetaGraph::from_matrix(std::move(f)), 120, 0.4, 1.0, 0.0, 5});
    const auto sym = symmetrized_adjacency(gen.graph);
    for (double v : sym.val) CHECK(v > 0.0);
}

TEST_CASE("ssbm generation") {
    SECTION("single cluster with eta = 0 is all positive") {
        const GeneratedGraph gen = generate_ssbm(60, 1, 0.2, 1.0, 0.0, 3);
        REQUIRE(gen.graph.num_edges() > 0);
        for (const Edge& e : gen.graph.edges()) CHECK(e.weight == 1.0);
    }
    SECTION("adjacency is exactly symmetric") {
        const GeneratedGraph gen = generate_ssbm(80, 3, 0.2, 1.5, 0.3, 11);
        for (const Edge& e : gen.graph.edges()) CHECK(gen.graph.adj.at(e.dst, e.src) == e.weight);
    }
    SECTION("eta = 0.5 makes the sign a fair coin") {
        index_t positive = 0, total = 0;
        for (std::uint64_t seed = 0; seed < 30; ++seed) {
            const GeneratedGraph gen = generate_ssbm(100, 2, 0.2, 1.0, 0.5, seed);
            for (const Edge& e : gen.graph.edges()) {
                if (e.src < e.dst) {  // one orientation per undirected pair
                    ++total;
                    if (e.weight > 0) ++positive;
                }
            }
        }
        const double mean = 0.5 * static_cast<double>(total);
        const double sigma = std::sqrt(static_cast<double>(total) * 0.25);
        CHECK(std::abs(static_cast<double>(positive) - mean) <= 3.0 * sigma);
    }
}

TEST_CASE("sdsbm total edge count concentrates") {
    const SdsbmParams base{meta_f1(0.25), 400, 0.08, 1.5, 0.0, 0};
    double expected = 0.0, variance = 0.0;
    index_t observed = 0;
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        SdsbmParams params = base;
        params.seed = seed;
        const GeneratedGraph gen = generate_sdsbm(params);
        observed += gen.graph.num_edges();
        // expectation from the realized label counts of this network
        std::vector<index_t> counts(3, 0);
        for (int l : gen.labels) ++counts[static_cast<std::size_t>(l)];
        for (index_t k = 0; k < 3; ++k)
            for (index_t l = 0; l < 3; ++l) {
                const double pairs = static_cast<double>(counts[static_cast<std::size_t>(k)]) *
                                         static_cast<double>(counts[static_cast<std::size_t>(l)]) -
                                     (k == l ? static_cast<double>(counts[static_cast<std::size_t>(k)]) : 0.0);
                const double prob = params.p * std::abs(params.meta.f(k, l));
                expected += pairs * prob;
                variance += pairs * prob * (1.0 - prob);
            }
    }
    CHECK(std::abs(static_cast<double>(observed) - expected) <= 4.0 * std::sqrt(variance));
}
