#pragma once

// Built-in property battery behind the `check` subcommand: theorem bounds,
// reduction identities, golden values, and a gradient probe.

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "msgnn/eig.hpp"
#include "msgnn/features.hpp"
#include "msgnn/maglap.hpp"
#include "msgnn/net.hpp"
#include "msgnn/synthetic.hpp"

namespace msgnn {

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

namespace detail {

inline SignedDiGraph random_check_graph(Rng& rng, index_t max_n) {
    const index_t n = 2 + static_cast<index_t>(rng.uniform_int(static_cast<std::uint64_t>(max_n - 1)));
    std::vector<Edge> edges;
    const double density = rng.uniform(0.05, 0.5);
    for (index_t i = 0; i < n; ++i)
        for (index_t j = 0; j < n; ++j) {
            if (i == j) continue;
            if (!rng.bernoulli(density)) continue;
            double w = rng.uniform(-5.0, 5.0);
            if (w == 0.0) w = 1.0;
            edges.push_back({i, j, w});
        }
    if (edges.empty()) edges.push_back({0, 1, 1.0});
    return from_edge_list(edges, n);
}

}  // namespace detail

inline CheckResult check_theorem_bounds(int corpus = 200, std::uint64_t seed = 1) {
    Rng rng(seed);
    double worst_low = 0.0, worst_high = 2.0;
    for (int trial = 0; trial < corpus; ++trial) {
        const SignedDiGraph g = detail::random_check_graph(rng, 50);
        const double q = rng.uniform(0.0, 1.0);
        const auto lu = eigh(laplacian_unnormalized(g, ChargeParameter(q)));
        const auto ln = eigh(laplacian_normalized(g, ChargeParameter(q)));
        worst_low = std::min({worst_low, lu.eigenvalues.front(), ln.eigenvalues.front()});
        worst_high = std::max(worst_high, ln.eigenvalues.back());
    }
    CheckResult r;
    r.name = "spectrum bounds (PSD, normalized in [0,2])";
    r.passed = worst_low >= -1e-9 && worst_high <= 2.0 + 1e-9;
    std::ostringstream os;
    os << "min eig " << worst_low << ", max normalized eig " << worst_high << " over " << corpus << " graphs";
    r.detail = os.str();
    return r;
}

inline CheckResult check_reduction_identities(std::uint64_t seed = 2) {
    Rng rng(seed);
    double worst = 0.0;
    for (int trial = 0; trial < 25; ++trial) {
        const SignedDiGraph g = detail::random_check_graph(rng, 25);
        // q = 0 matrix must be real
        const HermitianMatrix l0 = laplacian_unnormalized(g, ChargeParameter(0.0));
        for (const cplx& v : l0.m.val) worst = std::max(worst, std::abs(v.imag()));
        // rescaled unnormalized equals normalized when no node is isolated
        const auto deg = absolute_degree(g);
        bool touched = true;
        for (double d : deg) touched &= d > 1e-12;
        if (!touched) continue;
        const double q = rng.uniform(0.0, 1.0);
        const HermitianMatrix lu = laplacian_unnormalized(g, ChargeParameter(q));
        const HermitianMatrix ln = laplacian_normalized(g, ChargeParameter(q));
        for (index_t i = 0; i < g.n; ++i)
            for (index_t j = 0; j < g.n; ++j) {
                const cplx scaled = lu.m.at(i, j) / std::sqrt(deg[static_cast<std::size_t>(i)] *
                                                              deg[static_cast<std::size_t>(j)]);
                worst = std::max(worst, std::abs(scaled - ln.m.at(i, j)));
            }
    }
    CheckResult r;
    r.name = "reduction identities (q=0 real, D^-1/2 L_U D^-1/2 = L_N)";
    r.passed = worst <= 1e-12;
    r.detail = "worst deviation " + std::to_string(worst);
    return r;
}

inline CheckResult check_golden_values() {
    const SignedDiGraph g = from_edge_list({{0, 1, 0.5},
                                            {0, 2, -0.1},
                                            {0, 3, 3.0},
                                            {1, 0, -3.0},
                                            {1, 3, 3.0},
                                            {2, 0, 3.0},
                                            {3, 1, -1.0},
                                            {3, 2, 10.0}});
    bool ok = true;
    auto row = [&](const FeatureSpec& spec) {
        const RMat x = build_features(g, spec);
        std::vector<double> out;
        for (index_t j = 0; j < x.cols; ++j) out.push_back(x(0, j));
        return out;
    };
    ok &= row({false, WeightMode::none, false}) == std::vector<double>{2, 3};
    ok &= row({false, WeightMode::net_sum, false}) == std::vector<double>{0, 3.4};
    ok &= row({false, WeightMode::abs_sum, false}) == std::vector<double>{6, 3.6};
    ok &= row({true, WeightMode::none, false}) == std::vector<double>{1, 2, 1, 1};
    ok &= row({true, WeightMode::net_sum, false}) == std::vector<double>{3, 3.5, 3, 0.1};

    const SignedDiGraph one = from_edge_list({{0, 1, 1.0}});
    const HermitianMatrix h = hermitian_adjacency(one, ChargeParameter(0.25));
    ok &= std::abs(h.m.at(0, 1) - cplx(0.0, 0.5)) < 1e-15;
    ok &= std::abs(h.m.at(1, 0) - cplx(0.0, -0.5)) < 1e-15;

    CheckResult r;
    r.name = "golden values (degree tuples, one-way +-i/2 pair)";
    r.passed = ok;
    r.detail = ok ? "all matched exactly" : "mismatch";
    return r;
}

inline CheckResult check_gradients(std::uint64_t seed = 3) {
    Rng rng(seed);
    std::vector<Edge> edges;
    for (index_t i = 0; i < 10; ++i)
        for (index_t j = 0; j < 10; ++j)
            if (i != j && rng.bernoulli(0.3))
                edges.push_back({i, j, rng.bernoulli(0.5) ? 1.0 : -1.0});
    const SignedDiGraph g = from_edge_list(edges, 10);
    RMat x0(g.n, 3);
    for (double& v : x0.a) v = rng.normal();
    double worst = 0.0;
    for (const TaskKind task : {TaskKind::link, TaskKind::node}) {
        ModelConfig config;
        config.task = task;
        config.in_dim = 3;
        config.hidden = 4;
        config.num_classes = 3;
        config.q = 0.3;
        const HermitianMatrix lap = laplacian_normalized(g, ChargeParameter(config.q));
        MsgnnModel model = make_model(config, lap, 2.0, Rng::mix(seed, task == TaskKind::link));
        std::vector<NodePair> pairs{{0, 1}, {1, 2}, {2, 0}};
        Batch batch;
        if (task == TaskKind::link) batch.pairs = &pairs;
        batch.rows = {0, 1, 2};
        batch.labels = {0, 1, 2};
        const LossResult res = loss_and_grad(model, x0, batch);
        const auto grads = gradient_pointers(res.grads);
        const auto views = parameter_views(model);
        const double h = 1e-5;
        for (std::size_t v = 0; v < views.size(); ++v)
            for (std::size_t k = 0; k < views[v].size; ++k) {
                const double saved = views[v].data[k];
                views[v].data[k] = saved + h;
                const double up = loss_and_grad(model, x0, batch).loss;
                views[v].data[k] = saved - h;
                const double down = loss_and_grad(model, x0, batch).loss;
                views[v].data[k] = saved;
                const double numeric = (up - down) / (2.0 * h);
                const double rel = std::abs(numeric - grads[v][k]) /
                                   std::max({std::abs(numeric), std::abs(grads[v][k]), 1e-8});
                worst = std::max(worst, rel);
            }
    }
    CheckResult r;
    r.name = "analytic gradients vs central differences";
    r.passed = worst < 1e-4;
    r.detail = "worst relative error " + std::to_string(worst);
    return r;
}

inline CheckResult check_meta_graphs() {
    bool ok = true;
    const MetaGraph f1 = meta_f1(0.0);
    const double want1[3][3] = {{0.5, 0, 0}, {1, 0.5, -0.5}, {-1, -0.5, 0.5}};
    for (index_t i = 0; i < 3; ++i)
        for (index_t j = 0; j < 3; ++j) ok &= f1.f(i, j) == want1[i][j];
    const MetaGraph f2 = meta_f2(0.25);
    ok &= f2.f(1, 0) == 0.75 && f2.f(3, 2) == -0.75 && f2.f(0, 3) == -0.25;
    CheckResult r;
    r.name = "meta-graph displays F1/F2";
    r.passed = ok;
    r.detail = ok ? "entrywise match" : "mismatch";
    return r;
}

inline std::vector<CheckResult> run_property_checks(int corpus = 200, std::uint64_t seed = 1) {
    return {check_theorem_bounds(corpus, seed), check_reduction_identities(seed + 1), check_golden_values(),
            check_gradients(seed + 2), check_meta_graphs()};
}

}  // namespace msgnn
