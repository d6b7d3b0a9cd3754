// Command-line front end: synthetic generation, Laplacian/eigen dumps,
// link-prediction and clustering experiment runs, lead-lag network
// construction, and the built-in property checks.
//
// Exit codes: 0 success, 2 config error, 3 data error, 4 numerical failure.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "msgnn/check.hpp"
#include "msgnn/embedding.hpp"
#include "msgnn/experiment.hpp"
#include "msgnn/io.hpp"
#include "msgnn/version.hpp"

namespace fs = std::filesystem;
using namespace msgnn;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitData = 3;
constexpr int kExitNumerical = 4;

struct QOptions {
    std::string mode = "q0";  // zero | q0 | value | multiple
    double value = 0.25;
    double multiple = 1.0;
    CLI::Option* mode_option = nullptr;

    void attach(CLI::App* cmd) {
        mode_option = cmd->add_option("--q-mode", mode, "charge parameter mode: zero, q0, value, multiple")
                          ->check(CLI::IsMember({"zero", "q0", "value", "multiple"}));
        cmd->add_option("--q", value, "explicit charge parameter (with --q-mode value)");
        cmd->add_option("--q-multiple", multiple, "multiple of q0 (with --q-mode multiple)");
    }

    bool mode_given() const { return mode_option && mode_option->count() > 0; }

    QMode resolve_mode() const {
        if (mode == "zero") return QMode::zero;
        if (mode == "q0") return QMode::q0;
        if (mode == "value") return QMode::explicit_value;
        return QMode::multiple_of_q0;
    }
};

SignedDiGraph load_graph(const std::string& path, std::vector<std::string>* id_map = nullptr) {
    if (path.ends_with(".msg")) return read_graph_binary(path);
    EdgeListFile f = read_edge_csv(path);
    if (id_map) *id_map = f.id_map;
    return from_edge_list(f.edges);
}

FeatureSpec parse_features(const std::string& token) {
    // "(T,T)" shorthand used in the reports; also accepts "T,T" and "T,T'"
    std::string s = token;
    std::erase(s, '(');
    std::erase(s, ')');
    const auto comma = s.find(',');
    if (comma == std::string::npos) throw CLI::ValidationError("--features", "expected signed,weighted tuple");
    const std::string sig = s.substr(0, comma);
    const std::string wgt = s.substr(comma + 1);
    FeatureSpec spec;
    if (sig == "T")
        spec.signed_split = true;
    else if (sig == "F")
        spec.signed_split = false;
    else
        throw CLI::ValidationError("--features", "signed flag must be T or F");
    if (wgt == "F")
        spec.weighted = WeightMode::none;
    else if (wgt == "T")
        spec.weighted = WeightMode::net_sum;
    else if (wgt == "T'")
        spec.weighted = WeightMode::abs_sum;
    else
        throw CLI::ValidationError("--features", "weighted flag must be F, T or T'");
    return spec;
}

LinkTask parse_task(const std::string& token) {
    if (token == "sp") return LinkTask::sp;
    if (token == "dp") return LinkTask::dp;
    if (token == "3c") return LinkTask::c3;
    if (token == "4c") return LinkTask::c4;
    if (token == "5c") return LinkTask::c5;
    throw CLI::ValidationError("--task", "expected one of sp, dp, 3c, 4c, 5c");
}

void ensure_dir(const std::string& dir) { fs::create_directories(dir); }

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"magnetic signed Laplacian toolkit"};
    app.set_version_flag("--version", std::string(version_string));
    app.require_subcommand(1);

    // ---- generate ----
    auto* generate = app.add_subcommand("generate", "generate SDSBM/SSBM synthetic graphs");
    generate->require_subcommand(1);
    struct {
        std::string meta = "f1";
        double gamma = 0.0;
        std::int64_t n = 1000;
        double p = 0.1, rho = 1.5, eta = 0.0;
        std::uint64_t seed = 0;
        std::string out = ".";
        std::string name = "sdsbm";
        bool binary = false;
    } gen_sdsbm;
    auto* sdsbm_cmd = generate->add_subcommand("sdsbm", "signed directed stochastic block model");
    sdsbm_cmd->add_option("--meta", gen_sdsbm.meta, "meta-graph family: f1 or f2")
        ->check(CLI::IsMember({"f1", "f2"}));
    sdsbm_cmd->add_option("--gamma", gen_sdsbm.gamma, "directional noise in [0, 0.5]");
    sdsbm_cmd->add_option("--n", gen_sdsbm.n, "node count")->required();
    sdsbm_cmd->add_option("--p", gen_sdsbm.p, "edge density")->required();
    sdsbm_cmd->add_option("--rho", gen_sdsbm.rho, "largest/smallest block size ratio");
    sdsbm_cmd->add_option("--eta", gen_sdsbm.eta, "sign flip probability in [0, 0.5]");
    sdsbm_cmd->add_option("--seed", gen_sdsbm.seed, "random seed");
    sdsbm_cmd->add_option("--out", gen_sdsbm.out, "output directory");
    sdsbm_cmd->add_option("--name", gen_sdsbm.name, "output basename");
    sdsbm_cmd->add_flag("--binary", gen_sdsbm.binary, "also write the .msg binary container");

    struct {
        std::int64_t n = 1000;
        int c = 5;
        double p = 0.01, rho = 1.5, eta = 0.0;
        std::uint64_t seed = 0;
        std::string out = ".";
        std::string name = "ssbm";
    } gen_ssbm;
    auto* ssbm_cmd = generate->add_subcommand("ssbm", "signed (undirected) stochastic block model");
    ssbm_cmd->add_option("--n", gen_ssbm.n, "node count")->required();
    ssbm_cmd->add_option("--c", gen_ssbm.c, "cluster count")->required();
    ssbm_cmd->add_option("--p", gen_ssbm.p, "edge probability")->required();
    ssbm_cmd->add_option("--rho", gen_ssbm.rho, "size ratio");
    ssbm_cmd->add_option("--eta", gen_ssbm.eta, "wrong-sign probability");
    ssbm_cmd->add_option("--seed", gen_ssbm.seed, "random seed");
    ssbm_cmd->add_option("--out", gen_ssbm.out, "output directory");
    ssbm_cmd->add_option("--name", gen_ssbm.name, "output basename");

    // ---- laplacian ----
    struct {
        std::string graph;
        QOptions q;
        bool unnormalized = false;
        std::string out = "laplacian.csv";
    } lap_opts;
    auto* laplacian_cmd = app.add_subcommand("laplacian", "dump the magnetic signed Laplacian as CSV");
    laplacian_cmd->add_option("--graph", lap_opts.graph, "edge list CSV or .msg binary")->required();
    lap_opts.q.attach(laplacian_cmd);
    laplacian_cmd->add_flag("--unnormalized", lap_opts.unnormalized, "emit L_U instead of L_N");
    laplacian_cmd->add_option("--out", lap_opts.out, "output CSV path");

    // ---- eigs ----
    struct {
        std::string graph;
        QOptions q;
        std::int64_t k = 4;
        std::string order = "largest";
        bool unnormalized = false;
        bool power_lambda_max = false;
        std::string out = ".";
    } eig_opts;
    auto* eigs_cmd = app.add_subcommand("eigs", "eigendecomposition and spectral embedding dump");
    eigs_cmd->add_option("--graph", eig_opts.graph, "edge list CSV or .msg binary")->required();
    eig_opts.q.attach(eigs_cmd);
    eigs_cmd->add_option("--k", eig_opts.k, "number of eigenvectors to embed");
    eigs_cmd->add_option("--order", eig_opts.order, "largest or smallest")
        ->check(CLI::IsMember({"largest", "smallest"}));
    eigs_cmd->add_flag("--unnormalized", eig_opts.unnormalized, "use L_U instead of L_N");
    eigs_cmd->add_flag("--power-lambda-max", eig_opts.power_lambda_max,
                       "estimate lambda_max by power iteration instead of the bound 2");
    eigs_cmd->add_option("--out", eig_opts.out, "output directory");

    // ---- link ----
    struct {
        std::string graph;
        std::string dataset = "dataset";
        std::string task = "sp";
        QOptions q{.mode = "q0"};
        std::string features = "(T,T)";
        int hidden = 16;
        int epochs = 300;
        int splits = 5;
        double test_frac = 0.2;
        std::uint64_t seed = 0;
        bool q_sweep = false;
        std::string out = ".";
        std::string save_model;
    } link_opts;
    auto* link_cmd = app.add_subcommand("link", "run a link prediction experiment (5 seeded splits)");
    link_cmd->add_option("--graph", link_opts.graph, "edge list CSV or .msg binary")->required();
    link_cmd->add_option("--dataset", link_opts.dataset, "dataset name used in reports");
    link_cmd->add_option("--task", link_opts.task, "sp, dp, 3c, 4c or 5c")->required();
    link_opts.q.attach(link_cmd);
    link_cmd->add_option("--features", link_opts.features, "feature tuple, e.g. (T,T), (F,T')");
    link_cmd->add_option("--hidden", link_opts.hidden, "hidden width");
    link_cmd->add_option("--epochs", link_opts.epochs, "training epochs per split");
    link_cmd->add_option("--splits", link_opts.splits, "number of random splits");
    link_cmd->add_option("--test-frac", link_opts.test_frac, "test edge fraction");
    link_cmd->add_option("--seed", link_opts.seed, "base seed");
    link_cmd->add_flag("--q-sweep", link_opts.q_sweep, "report one row per multiple of q0");
    link_cmd->add_option("--out", link_opts.out, "output directory");
    link_cmd->add_option("--save-model", link_opts.save_model,
                         "write the last split's trained model to this checkpoint path");

    // ---- cluster ----
    struct {
        std::string generator = "sdsbm";  // sdsbm | ssbm
        std::string meta = "f1";
        double gamma = 0.0;
        std::int64_t n = 1000;
        int c = 5;
        double p = 0.1, rho = 1.5, eta = 0.0;
        double q = 0.25;
        bool q_zero = false;
        int networks = 5;
        int splits = 2;
        int hidden = 16;
        int max_epochs = 1000;
        int patience = 200;
        std::uint64_t seed = 0;
        bool no_baseline = false;
        std::string out = ".";
    } cluster_opts;
    auto* cluster_cmd = app.add_subcommand("cluster", "run the node clustering protocol on generated graphs");
    cluster_cmd->add_option("--generator", cluster_opts.generator, "sdsbm or ssbm")
        ->check(CLI::IsMember({"sdsbm", "ssbm"}));
    cluster_cmd->add_option("--meta", cluster_opts.meta, "meta-graph family for sdsbm")
        ->check(CLI::IsMember({"f1", "f2"}));
    cluster_cmd->add_option("--gamma", cluster_opts.gamma, "directional noise");
    cluster_cmd->add_option("--n", cluster_opts.n, "node count");
    cluster_cmd->add_option("--c", cluster_opts.c, "cluster count (ssbm)");
    cluster_cmd->add_option("--p", cluster_opts.p, "edge density");
    cluster_cmd->add_option("--rho", cluster_opts.rho, "size ratio");
    cluster_cmd->add_option("--eta", cluster_opts.eta, "sign flip probability");
    cluster_cmd->add_option("--q", cluster_opts.q, "charge parameter");
    cluster_cmd->add_flag("--q-zero", cluster_opts.q_zero, "force q = 0");
    cluster_cmd->add_option("--networks", cluster_opts.networks, "generated networks");
    cluster_cmd->add_option("--splits", cluster_opts.splits, "splits per network");
    cluster_cmd->add_option("--hidden", cluster_opts.hidden, "hidden width");
    cluster_cmd->add_option("--max-epochs", cluster_opts.max_epochs, "epoch cap");
    cluster_cmd->add_option("--patience", cluster_opts.patience, "early stopping patience");
    cluster_cmd->add_option("--seed", cluster_opts.seed, "base seed");
    cluster_cmd->add_flag("--no-baseline", cluster_opts.no_baseline, "skip the spectral k-means contrast");
    cluster_cmd->add_option("--out", cluster_opts.out, "output directory");

    // ---- fill ----
    struct {
        std::string returns;
        double frac = 0.2;
        std::string orientation = "semantic";
        bool dump_dense = false;
        std::string out = ".";
        std::string name = "fill";
    } fill_opts;
    auto* fill_cmd = app.add_subcommand("fill", "build a lead-lag network from a returns panel");
    fill_cmd->add_option("--returns", fill_opts.returns, "CSV: date column plus one column per stock")->required();
    fill_cmd->add_option("--frac", fill_opts.frac, "fraction of largest-magnitude edges kept");
    fill_cmd->add_option("--orientation", fill_opts.orientation,
                         "semantic (leader lagged) or literal (follower lagged)")
        ->check(CLI::IsMember({"semantic", "literal"}));
    fill_cmd->add_flag("--dump-dense", fill_opts.dump_dense, "also write the dense beta matrix");
    fill_cmd->add_option("--out", fill_opts.out, "output directory");
    fill_cmd->add_option("--name", fill_opts.name, "output basename");

    // ---- check ----
    struct {
        int corpus = 200;
        std::uint64_t seed = 1;
    } check_opts;
    auto* check_cmd = app.add_subcommand("check", "run the built-in property suites");
    check_cmd->add_option("--corpus", check_opts.corpus, "random graphs in the spectrum corpus");
    check_cmd->add_option("--seed", check_opts.seed, "corpus seed");

    // flat key=value config file: --config FILE expands to --key value pairs
    // in place, so it works after any subcommand
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    for (std::size_t i = 0; i < args.size(); ++i) {
        std::string file;
        std::size_t erase_count = 0;
        if (args[i] == "--config" && i + 1 < args.size()) {
            file = args[i + 1];
            erase_count = 2;
        } else if (args[i].starts_with("--config=")) {
            file = args[i].substr(9);
            erase_count = 1;
        }
        if (erase_count == 0) continue;
        std::ifstream in(file);
        if (!in) {
            std::cerr << "config error: cannot open config file " << file << "\n";
            return kExitConfig;
        }
        std::vector<std::string> expanded;
        std::string line;
        while (std::getline(in, line)) {
            const auto hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            const auto eq = line.find('=');
            if (eq == std::string::npos) continue;
            auto trim = [](std::string s) {
                while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.erase(s.begin());
                while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
                return s;
            };
            const std::string key = trim(line.substr(0, eq));
            const std::string value = trim(line.substr(eq + 1));
            if (key.empty()) continue;
            if (value == "false") continue;  // disabled flag
            expanded.push_back("--" + key);
            if (!value.empty() && value != "true") expanded.push_back(value);
        }
        args.erase(args.begin() + static_cast<std::ptrdiff_t>(i),
                   args.begin() + static_cast<std::ptrdiff_t>(i + erase_count));
        args.insert(args.begin() + static_cast<std::ptrdiff_t>(i), expanded.begin(), expanded.end());
        i += expanded.size();
        if (i) --i;
    }

    try {
        std::vector<char*> argv2;
        static std::string prog = argv[0];
        argv2.push_back(prog.data());
        for (std::string& a : args) argv2.push_back(a.data());
        app.parse(static_cast<int>(argv2.size()), argv2.data());
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    try {
        if (sdsbm_cmd->parsed()) {
            const MetaGraph meta = gen_sdsbm.meta == "f1" ? meta_f1(gen_sdsbm.gamma) : meta_f2(gen_sdsbm.gamma);
            const SdsbmParams params{meta, gen_sdsbm.n, gen_sdsbm.p, gen_sdsbm.rho, gen_sdsbm.eta, gen_sdsbm.seed};
            const GeneratedGraph gen = generate_sdsbm(params);
            ensure_dir(gen_sdsbm.out);
            const fs::path dir(gen_sdsbm.out);
            write_edge_csv((dir / (gen_sdsbm.name + "_edges.csv")).string(), gen.graph);
            write_labels_csv((dir / (gen_sdsbm.name + "_labels.csv")).string(), gen.labels);
            if (gen_sdsbm.binary) write_graph_binary((dir / (gen_sdsbm.name + ".msg")).string(), gen.graph);
            write_lockfile((dir / (gen_sdsbm.name + ".lock.json")).string(), "generate sdsbm",
                           {{"meta", gen_sdsbm.meta},
                            {"gamma", gen_sdsbm.gamma},
                            {"n", gen_sdsbm.n},
                            {"p", gen_sdsbm.p},
                            {"rho", gen_sdsbm.rho},
                            {"eta", gen_sdsbm.eta}},
                           gen_sdsbm.seed, {});
            std::cout << "wrote " << gen.graph.num_edges() << " edges over " << gen.graph.n << " nodes\n";
        } else if (ssbm_cmd->parsed()) {
            const GeneratedGraph gen =
                generate_ssbm(gen_ssbm.n, gen_ssbm.c, gen_ssbm.p, gen_ssbm.rho, gen_ssbm.eta, gen_ssbm.seed);
            ensure_dir(gen_ssbm.out);
            const fs::path dir(gen_ssbm.out);
            write_edge_csv((dir / (gen_ssbm.name + "_edges.csv")).string(), gen.graph);
            write_labels_csv((dir / (gen_ssbm.name + "_labels.csv")).string(), gen.labels);
            write_lockfile((dir / (gen_ssbm.name + ".lock.json")).string(), "generate ssbm",
                           {{"n", gen_ssbm.n},
                            {"c", gen_ssbm.c},
                            {"p", gen_ssbm.p},
                            {"rho", gen_ssbm.rho},
                            {"eta", gen_ssbm.eta}},
                           gen_ssbm.seed, {});
            std::cout << "wrote " << gen.graph.num_edges() << " edges over " << gen.graph.n << " nodes\n";
        } else if (laplacian_cmd->parsed()) {
            std::vector<std::string> id_map;
            const SignedDiGraph g = load_graph(lap_opts.graph, &id_map);
            if (!id_map.empty()) {
                std::ofstream ids(lap_opts.out + ".ids.csv");
                ids << "index,id\n";
                for (std::size_t i = 0; i < id_map.size(); ++i) ids << i << ',' << id_map[i] << '\n';
            }
            const double q = resolve_q(lap_opts.q.resolve_mode(), g, lap_opts.q.value, lap_opts.q.multiple);
            const HermitianMatrix l = lap_opts.unnormalized ? laplacian_unnormalized(g, ChargeParameter(q))
                                                            : laplacian_normalized(g, ChargeParameter(q));
            write_matrix_csv(lap_opts.out, l);
            write_lockfile(lap_opts.out + ".lock.json", "laplacian",
                           {{"graph", lap_opts.graph},
                            {"q", q},
                            {"normalized", !lap_opts.unnormalized}},
                           0, {});
            std::cout << "q = " << q << ", " << l.m.nnz() << " entries -> " << lap_opts.out << "\n";
        } else if (eigs_cmd->parsed()) {
            const SignedDiGraph g = load_graph(eig_opts.graph);
            const double q = resolve_q(eig_opts.q.resolve_mode(), g, eig_opts.q.value, eig_opts.q.multiple);
            const HermitianMatrix l = eig_opts.unnormalized ? laplacian_unnormalized(g, ChargeParameter(q))
                                                            : laplacian_normalized(g, ChargeParameter(q));
            ensure_dir(eig_opts.out);
            const fs::path dir(eig_opts.out);
            const EigenDecomposition eig = eigh(l);
            {
                std::ofstream vals((dir / "eigenvalues.csv").string());
                vals.precision(17);
                vals << "k,lambda\n";
                for (std::size_t k = 0; k < eig.eigenvalues.size(); ++k) vals << k << ',' << eig.eigenvalues[k] << '\n';
            }
            const RMat emb = spectral_embed(l, std::min<index_t>(eig_opts.k, g.n),
                                            eig_opts.order == "largest" ? EigOrder::largest : EigOrder::smallest);
            write_embedding_csv((dir / "embedding.csv").string(), emb);
            if (eig_opts.power_lambda_max)
                std::cout << "lambda_max (power iteration) = " << lambda_max(l, 1e-9) << "\n";
            write_lockfile((dir / "eigs.lock.json").string(), "eigs",
                           {{"graph", eig_opts.graph}, {"q", q}, {"k", eig_opts.k}, {"order", eig_opts.order}},
                           0, {});
            std::cout << "spectrum in [" << eig.eigenvalues.front() << ", " << eig.eigenvalues.back() << "]\n";
        } else if (link_cmd->parsed()) {
            std::vector<std::string> id_map;
            const SignedDiGraph g = load_graph(link_opts.graph, &id_map);
            ensure_dir(link_opts.out);
            const fs::path dir(link_opts.out);
            if (!id_map.empty()) {
                std::ofstream ids((dir / "ids.csv").string());
                ids << "index,id\n";
                for (std::size_t i = 0; i < id_map.size(); ++i) ids << i << ',' << id_map[i] << '\n';
            }
            LinkExperimentConfig config;
            config.dataset = link_opts.dataset;
            config.task = parse_task(link_opts.task);
            // sign-only prediction carries no directional information, so q
            // defaults to zero there and to q0 for the direction tasks
            config.q_mode = link_opts.q.mode_given()
                                ? link_opts.q.resolve_mode()
                                : (config.task == LinkTask::sp ? QMode::zero : QMode::q0);
            config.q_explicit = link_opts.q.value;
            config.q_multiple = link_opts.q.multiple;
            config.features = parse_features(link_opts.features);
            config.hidden = link_opts.hidden;
            config.epochs = link_opts.epochs;
            config.num_splits = link_opts.splits;
            config.test_frac = link_opts.test_frac;
            config.seed = link_opts.seed;

            std::vector<ReportRow> rows;
            std::vector<std::uint64_t> derived;
            if (link_opts.q_sweep) {
                for (const double multiple : {0.0, 0.2, 0.4, 0.6, 0.8, 1.0}) {
                    LinkExperimentConfig c2 = config;
                    c2.q_mode = multiple == 0.0 ? QMode::zero : QMode::multiple_of_q0;
                    c2.q_multiple = multiple;
                    rows.push_back(run_link_experiment(g, c2));
                }
            } else {
                std::vector<LinkRunDetail> details;
                rows.push_back(run_link_experiment(g, config, &details));
                for (std::size_t s = 0; s < details.size(); ++s) {
                    derived.push_back(details[s].split_seed);
                    write_history_csv((dir / ("history_s" + std::to_string(s) + ".csv")).string(),
                                      details[s].history);
                    write_split_csv((dir / ("split_s" + std::to_string(s) + ".csv")).string(), details[s].split);
                }
                if (!link_opts.save_model.empty() && !details.empty())
                    save_checkpoint(link_opts.save_model, details.back().model);
            }
            write_report_csv((dir / "report.csv").string(), rows);
            write_report_json((dir / "report.json").string(), rows);
            const char* effective_q_mode =
                link_opts.q.mode_given() ? link_opts.q.mode.c_str()
                                         : (config.task == LinkTask::sp ? "zero (default)" : "q0 (default)");
            write_lockfile((dir / "link.lock.json").string(), "link",
                           {{"graph", link_opts.graph},
                            {"dataset", link_opts.dataset},
                            {"task", link_opts.task},
                            {"q_mode", effective_q_mode},
                            {"features", link_opts.features},
                            {"hidden", link_opts.hidden},
                            {"epochs", link_opts.epochs},
                            {"splits", link_opts.splits},
                            {"q_sweep", link_opts.q_sweep}},
                           link_opts.seed, derived);
            for (const ReportRow& row : rows)
                std::cout << row.dataset << " " << row.task << " q=" << row.q << " " << row.feature_spec
                          << ": accuracy " << 100.0 * row.mean << " +- " << 100.0 * row.std_dev << " (n="
                          << row.n_runs << ", " << row.wall_seconds << "s)\n";
        } else if (cluster_cmd->parsed()) {
            ensure_dir(cluster_opts.out);
            const fs::path dir(cluster_opts.out);
            ClusterExperimentConfig config;
            config.q = cluster_opts.q_zero ? 0.0 : cluster_opts.q;
            config.hidden = cluster_opts.hidden;
            config.max_epochs = cluster_opts.max_epochs;
            config.patience = cluster_opts.patience;
            config.num_networks = cluster_opts.networks;
            config.splits_per_network = cluster_opts.splits;
            config.seed = cluster_opts.seed;
            config.run_baseline = !cluster_opts.no_baseline;
            if (cluster_opts.generator == "sdsbm") {
                const MetaGraph meta =
                    cluster_opts.meta == "f1" ? meta_f1(cluster_opts.gamma) : meta_f2(cluster_opts.gamma);
                config.dataset = "sdsbm-" + cluster_opts.meta;
                config.sdsbm = SdsbmParams{meta, cluster_opts.n, cluster_opts.p, cluster_opts.rho,
                                           cluster_opts.eta, cluster_opts.seed};
            } else {
                config.dataset = "ssbm";
                config.use_ssbm = true;
                config.ssbm_n = cluster_opts.n;
                config.ssbm_clusters = cluster_opts.c;
                config.ssbm_p = cluster_opts.p;
                config.ssbm_rho = cluster_opts.rho;
                config.ssbm_eta = cluster_opts.eta;
                config.eigen_features = true;  // undirected signed input
                config.q = 0.0;
            }
            const ClusterResult result = run_cluster_experiment(config);
            std::vector<ReportRow> rows{result.msgnn};
            if (config.run_baseline) rows.push_back(result.baseline);
            write_report_csv((dir / "report.csv").string(), rows);
            write_report_json((dir / "report.json").string(), rows);
            write_lockfile((dir / "cluster.lock.json").string(), "cluster",
                           {{"generator", cluster_opts.generator},
                            {"meta", cluster_opts.meta},
                            {"gamma", cluster_opts.gamma},
                            {"n", cluster_opts.n},
                            {"p", cluster_opts.p},
                            {"rho", cluster_opts.rho},
                            {"eta", cluster_opts.eta},
                            {"q", config.q},
                            {"networks", cluster_opts.networks},
                            {"splits", cluster_opts.splits}},
                           cluster_opts.seed, {});
            for (const ReportRow& row : rows)
                std::cout << row.dataset << " " << row.task << " q=" << row.q << ": ARI " << row.mean
                          << " +- " << row.std_dev << " (n=" << row.n_runs << ", " << row.wall_seconds << "s)\n";
        } else if (fill_cmd->parsed()) {
            const ReturnPanel panel = read_returns_csv(fill_opts.returns);
            bool warned = false;
            const RMat beta = lead_lag_matrix(panel,
                                              fill_opts.orientation == "semantic"
                                                  ? LagOrientation::leader_lagged
                                                  : LagOrientation::follower_lagged,
                                              &warned);
            if (warned) std::cerr << "warning: zero-variance series, affected entries set to 0\n";
            const SignedDiGraph g = sparsify_top(beta, fill_opts.frac);
            ensure_dir(fill_opts.out);
            const fs::path dir(fill_opts.out);
            write_edge_csv((dir / (fill_opts.name + "_edges.csv")).string(), g);
            if (fill_opts.dump_dense) write_embedding_csv((dir / (fill_opts.name + "_beta.csv")).string(), beta);
            if (!panel.ids.empty()) {
                std::ofstream ids((dir / (fill_opts.name + "_ids.csv")).string());
                ids << "index,id\n";
                for (std::size_t i = 0; i < panel.ids.size(); ++i) ids << i << ',' << panel.ids[i] << '\n';
            }
            write_lockfile((dir / (fill_opts.name + ".lock.json")).string(), "fill",
                           {{"returns", fill_opts.returns},
                            {"frac", fill_opts.frac},
                            {"orientation", fill_opts.orientation}},
                           0, {});
            std::cout << "kept " << g.num_edges() << " edges over " << g.n << " stocks\n";
        } else if (check_cmd->parsed()) {
            bool all_ok = true;
            for (const CheckResult& r : run_property_checks(check_opts.corpus, check_opts.seed)) {
                std::cout << (r.passed ? "PASS" : "FAIL") << "  " << r.name << "  (" << r.detail << ")\n";
                all_ok &= r.passed;
            }
            return all_ok ? kExitOk : kExitNumerical;
        }
    } catch (const PowerIterationError& e) {
        std::cerr << "numerical failure: " << e.what() << " (best estimate " << e.best_estimate << ")\n";
        return kExitNumerical;
    } catch (const std::domain_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::runtime_error& e) {
        const std::string what = e.what();
        if (what.find("converge") != std::string::npos) {
            std::cerr << "numerical failure: " << what << "\n";
            return kExitNumerical;
        }
        std::cerr << "data error: " << what << "\n";
        return kExitData;
    }
    return kExitOk;
}
