#pragma once

#include <chrono>
#include <cmath>
#include <fstream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "msgnn/embedding.hpp"
#include "msgnn/features.hpp"
#include "msgnn/io.hpp"
#include "msgnn/kmeans.hpp"
#include "msgnn/metrics.hpp"
#include "msgnn/net.hpp"
#include "msgnn/splits.hpp"
#include "msgnn/synthetic.hpp"
#include "msgnn/version.hpp"

namespace msgnn {

enum class QMode { zero, q0, explicit_value, multiple_of_q0 };

// Resolves the charge parameter against a concrete graph. q0 on a graph with
// no directional information falls back to zero, which is what the value
// means there.
inline double resolve_q(QMode mode, const SignedDiGraph& g, double explicit_q = 0.0,
                        double multiple = 1.0) {
    switch (mode) {
        case QMode::zero: return 0.0;
        case QMode::explicit_value: return explicit_q;
        case QMode::q0:
        case QMode::multiple_of_q0: {
            double q0;
            try {
                q0 = q_max(g);
            } catch (const std::domain_error&) {
                return 0.0;
            }
            return mode == QMode::q0 ? q0 : multiple * q0;
        }
    }
    return 0.0;
}

inline std::string feature_spec_name(const FeatureSpec& spec) {
    std::string w = spec.weighted == WeightMode::none ? "F" : (spec.weighted == WeightMode::net_sum ? "T" : "T'");
    return std::string("(") + (spec.signed_split ? "T" : "F") + "," + w + ")";
}

struct ReportRow {
    std::string dataset;
    std::string task;
    double q = 0.0;
    std::string feature_spec;
    double mean = 0.0;
    double std_dev = 0.0;
    int n_runs = 0;
    double wall_seconds = 0.0;
    std::vector<double> runs;  // per-run values behind the summary
};

inline void write_report_csv(const std::string& path, const std::vector<ReportRow>& rows) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write report: " + path);
    out << "dataset,task,q,feature_spec,mean,std,n_runs,wall_seconds\n";
    out.precision(10);
    for (const ReportRow& r : rows)
        out << r.dataset << ',' << r.task << ',' << r.q << ",\"" << r.feature_spec << "\"," << r.mean << ','
            << r.std_dev << ',' << r.n_runs << ',' << r.wall_seconds << '\n';
}

inline void write_report_json(const std::string& path, const std::vector<ReportRow>& rows) {
    nlohmann::json doc = nlohmann::json::array();
    for (const ReportRow& r : rows) {
        doc.push_back({{"dataset", r.dataset},
                       {"task", r.task},
                       {"q", r.q},
                       {"feature_spec", r.feature_spec},
                       {"mean", r.mean},
                       {"std", r.std_dev},
                       {"n_runs", r.n_runs},
                       {"wall_seconds", r.wall_seconds},
                       {"runs", r.runs}});
    }
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write report: " + path);
    out << doc.dump(2) << '\n';
}

// Every run records the fully resolved configuration and derived seeds, so a
// rerun of the lockfile reproduces the outputs byte for byte.
inline void write_lockfile(const std::string& path, const std::string& command, nlohmann::json params,
                           std::uint64_t base_seed, const std::vector<std::uint64_t>& derived_seeds) {
    nlohmann::json doc{{"version", version_string},
                       {"command", command},
                       {"params", std::move(params)},
                       {"seed", base_seed},
                       {"derived_seeds", derived_seeds},
                       {"threads", thread_count()}};
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write lockfile: " + path);
    out << doc.dump(2) << '\n';
}

struct LinkExperimentConfig {
    std::string dataset = "dataset";
    LinkTask task = LinkTask::sp;
    QMode q_mode = QMode::q0;
    double q_explicit = 0.0;
    double q_multiple = 1.0;
    FeatureSpec features{true, WeightMode::net_sum, true};
    int hidden = 16;
    int num_layers = 2;
    int epochs = 300;
    int num_splits = 5;
    double test_frac = 0.2;
    std::uint64_t seed = 0;
};

struct LinkRunDetail {
    double test_accuracy = 0.0;
    std::uint64_t split_seed = 0;
    TrainHistory history;
    LinkSplit split;
    MsgnnModel model;  // trained parameters for this split
};

// The five-split protocol: split, build features on the observed graph,
// train for the fixed number of epochs, report mean and sample standard
// deviation of test accuracy.
inline ReportRow run_link_experiment(const SignedDiGraph& g, const LinkExperimentConfig& config,
                                     std::vector<LinkRunDetail>* details = nullptr) {
    const auto t0 = std::chrono::steady_clock::now();
    std::vector<double> accs;
    double resolved_q = 0.0;
    for (int s = 0; s < config.num_splits; ++s) {
        const std::uint64_t split_seed = Rng::mix(config.seed, static_cast<std::uint64_t>(s));
        LinkSplit split = split_links(g, config.task, config.test_frac, split_seed);
        if (split.train.empty() || split.test.empty())
            throw std::runtime_error("run_link_experiment: empty split (graph too small?)");

        const RMat x0 = build_features(split.observed, config.features);
        resolved_q = resolve_q(config.q_mode, split.observed, config.q_explicit, config.q_multiple);
        const HermitianMatrix lap = laplacian_normalized(split.observed, ChargeParameter(resolved_q));

        ModelConfig mc;
        mc.task = TaskKind::link;
        mc.in_dim = static_cast<int>(config.features.dim());
        mc.hidden = config.hidden;
        mc.num_classes = num_classes(config.task);
        mc.num_layers = config.num_layers;
        mc.q = resolved_q;
        MsgnnModel model = make_model(mc, lap, /*lambda_max=*/2.0, Rng::mix(split_seed, 0x6d6f64656cULL));

        std::vector<NodePair> train_pairs, test_pairs;
        Batch batch;
        batch.pairs = &train_pairs;
        for (const LabeledPair& p : split.train) {
            train_pairs.emplace_back(p.a, p.b);
            batch.rows.push_back(static_cast<index_t>(batch.rows.size()));
            batch.labels.push_back(p.cls);
        }
        TrainHistory history = train_link(model, x0, batch, config.epochs);

        std::vector<int> truth;
        for (const LabeledPair& p : split.test) {
            test_pairs.emplace_back(p.a, p.b);
            truth.push_back(p.cls);
        }
        const RMat probs = forward(model, x0, &test_pairs);
        const std::vector<int> pred = argmax_rows(probs);
        const double acc = accuracy(pred, truth);
        accs.push_back(acc);
        if (details)
            details->push_back({acc, split_seed, std::move(history), std::move(split), std::move(model)});
    }

    ReportRow row;
    row.dataset = config.dataset;
    row.task = link_task_name(config.task);
    row.q = resolved_q;
    row.feature_spec = feature_spec_name(config.features);
    row.n_runs = static_cast<int>(accs.size());
    for (double a : accs) row.mean += a;
    row.mean /= static_cast<double>(accs.size());
    if (accs.size() > 1) {
        double ss = 0.0;
        for (double a : accs) ss += (a - row.mean) * (a - row.mean);
        row.std_dev = std::sqrt(ss / static_cast<double>(accs.size() - 1));
    }
    row.runs = accs;
    row.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return row;
}

struct ClusterExperimentConfig {
    std::string dataset = "sdsbm";
    std::optional<SdsbmParams> sdsbm;  // regenerated per network with derived seeds
    // SSBM alternative
    bool use_ssbm = false;
    index_t ssbm_n = 0;
    int ssbm_clusters = 0;
    double ssbm_p = 0.0, ssbm_rho = 1.0, ssbm_eta = 0.0;

    double q = 0.25;
    bool eigen_features = false;  // undirected signed path
    int hidden = 16;
    int num_layers = 2;
    int max_epochs = 1000;
    int patience = 200;
    int num_networks = 5;
    int splits_per_network = 2;
    std::uint64_t seed = 0;
    bool run_baseline = true;
};

struct ClusterResult {
    ReportRow msgnn;     // standard error in std_dev
    ReportRow baseline;  // spectral k-means contrast, when enabled
};

// Paper protocol: several generated networks, two node splits each; per run
// train with seed-node supervision and early stopping on validation ARI,
// then report test ARI with standard error. The spectral baseline stacks the
// top C+1 eigenvectors of the same Laplacian and runs k-means.
inline ClusterResult run_cluster_experiment(const ClusterExperimentConfig& config) {
    const auto t0 = std::chrono::steady_clock::now();
    std::vector<double> net_aris, base_aris;
    int num_clusters = 0;

    for (int net = 0; net < config.num_networks; ++net) {
        const std::uint64_t net_seed = Rng::mix(config.seed, static_cast<std::uint64_t>(net));
        GeneratedGraph gen;
        if (config.use_ssbm) {
            gen = generate_ssbm(config.ssbm_n, config.ssbm_clusters, config.ssbm_p, config.ssbm_rho,
                                config.ssbm_eta, net_seed);
            num_clusters = config.ssbm_clusters;
        } else if (config.sdsbm) {
            SdsbmParams params = *config.sdsbm;
            params.seed = net_seed;
            gen = generate_sdsbm(params);
            num_clusters = params.meta.num_blocks();
        } else {
            throw std::invalid_argument("run_cluster_experiment: no generator configured");
        }

        const HermitianMatrix lap = laplacian_normalized(gen.graph, ChargeParameter(config.q));
        const RMat x0 = config.eigen_features
                            ? build_eigen_features(gen.graph, num_clusters)
                            : build_features(gen.graph, FeatureSpec{true, WeightMode::none, true});

        std::vector<int> base_labels;
        if (config.run_baseline) {
            const RMat embed = spectral_embed(lap, num_clusters + 1, EigOrder::largest);
            base_labels = kmeans(embed, num_clusters, Rng::mix(net_seed, 0x6b6d65616e73ULL)).labels;
        }

        for (int sp = 0; sp < config.splits_per_network; ++sp) {
            const std::uint64_t split_seed = Rng::mix(net_seed, 0x73706c6974ULL + static_cast<std::uint64_t>(sp));
            const NodeSplit split = split_nodes(gen.labels, split_seed);

            ModelConfig mc;
            mc.task = TaskKind::node;
            mc.in_dim = static_cast<int>(x0.cols);
            mc.hidden = config.hidden;
            mc.num_classes = num_clusters;
            mc.num_layers = config.num_layers;
            mc.q = config.q;
            MsgnnModel model = make_model(mc, lap, /*lambda_max=*/2.0, Rng::mix(split_seed, 0x6d6f64656cULL));

            Batch batch;
            batch.rows = split.seeds;
            for (index_t node : split.seeds) batch.labels.push_back(gen.labels[static_cast<std::size_t>(node)]);
            std::vector<int> val_truth;
            for (index_t node : split.val) val_truth.push_back(gen.labels[static_cast<std::size_t>(node)]);
            train_cluster(model, x0, batch, split.val, val_truth, config.max_epochs, config.patience);

            const std::vector<int> pred = argmax_rows(forward(model, x0));
            std::vector<int> test_pred, test_truth;
            for (index_t node : split.test) {
                test_pred.push_back(pred[static_cast<std::size_t>(node)]);
                test_truth.push_back(gen.labels[static_cast<std::size_t>(node)]);
            }
            net_aris.push_back(ari(test_pred, test_truth));

            if (config.run_baseline) {
                std::vector<int> b_pred, b_truth;
                for (index_t node : split.test) {
                    b_pred.push_back(base_labels[static_cast<std::size_t>(node)]);
                    b_truth.push_back(gen.labels[static_cast<std::size_t>(node)]);
                }
                base_aris.push_back(ari(b_pred, b_truth));
            }
        }
    }

    auto summarize = [&](const std::vector<double>& vals, const std::string& task) {
        ReportRow row;
        row.dataset = config.dataset;
        row.task = task;
        row.q = config.q;
        row.feature_spec = config.eigen_features ? "(eigen)" : "(T,F)";
        row.n_runs = static_cast<int>(vals.size());
        for (double v : vals) row.mean += v;
        if (!vals.empty()) row.mean /= static_cast<double>(vals.size());
        if (vals.size() > 1) {
            double ss = 0.0;
            for (double v : vals) ss += (v - row.mean) * (v - row.mean);
            // standard error, the clustering-figure convention
            row.std_dev = std::sqrt(ss / static_cast<double>(vals.size() - 1)) /
                          std::sqrt(static_cast<double>(vals.size()));
        }
        row.runs = vals;
        row.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        return row;
    };
    ClusterResult result;
    result.msgnn = summarize(net_aris, "cluster");
    if (config.run_baseline) result.baseline = summarize(base_aris, "cluster-spectral-baseline");
    return result;
}

}  // namespace msgnn
