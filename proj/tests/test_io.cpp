#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "msgnn/experiment.hpp"
#include "msgnn/io.hpp"
#include "msgnn/synthetic.hpp"
#include "oracle.hpp"

using namespace msgnn;

namespace {

struct TempDir {
    std::filesystem::path path;
    TempDir() {
        path = std::filesystem::temp_directory_path() /
               ("msgnn_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
    std::string file(const std::string& name) const { return (path / name).string(); }
    static inline int counter = 0;
};

}  // namespace

TEST_CASE("edge csv round trip") {
    TempDir dir;
    Rng rng(1);
    const SignedDiGraph g = oracle::random_graph(rng, 25);
    write_edge_csv(dir.file("g.csv"), g);
    const EdgeListFile back = read_edge_csv(dir.file("g.csv"));
    CHECK(back.id_map.empty());
    const SignedDiGraph g2 = from_edge_list(back.edges, g.n);
    REQUIRE(g2.adj.col == g.adj.col);
    REQUIRE(g2.adj.val == g.adj.val);
}

TEST_CASE("edge csv header detection and string ids") {
    TempDir dir;
    SECTION("headerless numeric file") {
        std::ofstream out(dir.file("plain.csv"));
        out << "0,1,1.5\n2,0,-2\n";
        out.close();
        const EdgeListFile f = read_edge_csv(dir.file("plain.csv"));
        REQUIRE(f.edges.size() == 2);
        CHECK(f.edges[0].weight == 1.5);
    }
    SECTION("string ids map through a sorted table") {
        std::ofstream out(dir.file("named.csv"));
        out << "src,dst,weight\n";
        out << "zeta,alpha,1\nalpha,mid,-2\nmid,zeta,3\n";
        out.close();
        const EdgeListFile f = read_edge_csv(dir.file("named.csv"));
        REQUIRE(f.id_map == std::vector<std::string>{"alpha", "mid", "zeta"});
        // zeta -> 2, alpha -> 0
        CHECK(f.edges[0].src == 2);
        CHECK(f.edges[0].dst == 0);
    }
}

TEST_CASE("binary graph container round trip") {
    TempDir dir;
    Rng rng(2);
    const SignedDiGraph g = oracle::random_graph(rng, 30);
    write_graph_binary(dir.file("g.msg"), g);
    const SignedDiGraph g2 = read_graph_binary(dir.file("g.msg"));
    REQUIRE(g2.n == g.n);
    REQUIRE(g2.adj.col == g.adj.col);
    REQUIRE(g2.adj.val == g.adj.val);

    // magic guard
    std::ofstream bad(dir.file("bad.msg"), std::ios::binary);
    bad << "NOPE";
    bad.close();
    CHECK_THROWS_AS(read_graph_binary(dir.file("bad.msg")), std::runtime_error);
}

TEST_CASE("labels csv round trip") {
    TempDir dir;
    const std::vector<int> labels{2, 0, 1, 1, 0};
    write_labels_csv(dir.file("labels.csv"), labels);
    CHECK(read_labels_csv(dir.file("labels.csv")) == labels);
}

TEST_CASE("hermitian matrix csv dump") {
    TempDir dir;
    const SignedDiGraph g = from_edge_list({{0, 1, 1.0}});
    const HermitianMatrix l = laplacian_unnormalized(g, ChargeParameter(0.25));
    write_matrix_csv(dir.file("l.csv"), l);
    std::ifstream in(dir.file("l.csv"));
    std::string header;
    std::getline(in, header);
    CHECK(header == "i,j,re,im");
    int rows = 0;
    std::string line;
    while (std::getline(in, line))
        if (!line.empty()) ++rows;
    CHECK(rows == l.m.nnz());
}

TEST_CASE("checkpoint round trip preserves the forward pass") {
    TempDir dir;
    Rng rng(3);
    const SignedDiGraph g = oracle::random_graph(rng, 15);
    const HermitianMatrix lap = laplacian_normalized(g, ChargeParameter(0.25));
    ModelConfig config;
    config.task = TaskKind::node;
    config.in_dim = 4;
    config.hidden = 6;
    config.num_classes = 3;
    config.q = 0.25;
    MsgnnModel model = make_model(config, lap, 2.0, 99);
    RMat x0(g.n, 4);
    for (double& v : x0.a) v = rng.normal();

    save_checkpoint(dir.file("m.msgn"), model);
    const MsgnnModel back = load_checkpoint(dir.file("m.msgn"), lap, 2.0);
    CHECK(back.config.hidden == 6);
    CHECK(back.config.q == 0.25);
    const RMat a = forward(model, x0);
    const RMat b = forward(back, x0);
    for (std::size_t k = 0; k < a.a.size(); ++k) REQUIRE(a.a[k] == b.a[k]);
}

TEST_CASE("split csv replay format") {
    TempDir dir;
    Rng rng(4);
    const SignedDiGraph g = oracle::random_graph(rng, 25);
    LinkSplit split;
    try {
        split = split_links(g, LinkTask::sp, 0.2, 7);
    } catch (const std::runtime_error&) {
        return;  // no negative edges in this draw; format covered elsewhere
    }
    write_split_csv(dir.file("split.csv"), split);
    std::ifstream in(dir.file("split.csv"));
    std::string header;
    std::getline(in, header);
    CHECK(header == "i,j,class,partition");
    std::size_t rows = 0;
    std::string line;
    while (std::getline(in, line))
        if (!line.empty()) ++rows;
    CHECK(rows == split.train.size() + split.test.size());
}

TEST_CASE("returns csv parsing") {
    TempDir dir;
    std::ofstream out(dir.file("returns.csv"));
    out << "date,AAA,BBB\n";
    out << "2020-01-01,0.01,-0.02\n";
    out << "2020-01-02,0.005,0.001\n";
    out << "2020-01-03,-0.002,0.003\n";
    out.close();
    const ReturnPanel panel = read_returns_csv(dir.file("returns.csv"));
    REQUIRE(panel.ids == std::vector<std::string>{"AAA", "BBB"});
    REQUIRE(panel.returns.rows == 2);
    REQUIRE(panel.returns.cols == 3);
    CHECK(panel.returns(0, 0) == 0.01);
    CHECK(panel.returns(1, 2) == 0.003);
}

TEST_CASE("report files carry the stable schema") {
    TempDir dir;
    ReportRow row;
    row.dataset = "toy";
    row.task = "SP";
    row.q = 0.5;
    row.feature_spec = "(T,T)";
    row.mean = 0.75;
    row.std_dev = 0.01;
    row.n_runs = 5;
    row.wall_seconds = 1.5;
    row.runs = {0.74, 0.75, 0.76, 0.75, 0.75};
    write_report_csv(dir.file("report.csv"), {row});
    write_report_json(dir.file("report.json"), {row});

    std::ifstream in(dir.file("report.csv"));
    std::string header;
    std::getline(in, header);
    CHECK(header == "dataset,task,q,feature_spec,mean,std,n_runs,wall_seconds");

    std::ifstream jin(dir.file("report.json"));
    nlohmann::json doc = nlohmann::json::parse(jin);
    REQUIRE(doc.is_array());
    CHECK(doc[0]["dataset"] == "toy");
    CHECK(doc[0]["n_runs"] == 5);
    CHECK(doc[0]["runs"].size() == 5);
}

TEST_CASE("link experiment protocol") {
    const GeneratedGraph gen = generate_sdsbm({meta_f1(0.25), 120, 0.15, 1.0, 0.1, 31});
    LinkExperimentConfig config;
    config.dataset = "toy";
    config.task = LinkTask::dp;
    config.q_mode = QMode::q0;
    config.epochs = 15;
    config.num_splits = 3;
    config.hidden = 4;
    config.seed = 5;

    SECTION("derived seeds make reruns identical") {
        const ReportRow a = run_link_experiment(gen.graph, config);
        const ReportRow b = run_link_experiment(gen.graph, config);
        REQUIRE(a.runs == b.runs);
        CHECK(a.n_runs == 3);
        CHECK(a.task == "DP");
    }
    SECTION("summary uses the sample standard deviation") {
        const ReportRow row = run_link_experiment(gen.graph, config);
        double mean = 0.0;
        for (double v : row.runs) mean += v;
        mean /= static_cast<double>(row.runs.size());
        double ss = 0.0;
        for (double v : row.runs) ss += (v - mean) * (v - mean);
        CHECK(row.mean == Catch::Approx(mean).margin(1e-15));
        CHECK(row.std_dev == Catch::Approx(std::sqrt(ss / 2.0)).margin(1e-15));
    }
}

TEST_CASE("cluster experiment reports msgnn and baseline rows") {
    ClusterExperimentConfig config;
    config.dataset = "toy";
    config.sdsbm = SdsbmParams{meta_f1(0.0), 150, 0.15, 1.0, 0.0, 0};
    config.q = 0.25;
    config.hidden = 4;
    config.max_epochs = 40;
    config.patience = 20;
    config.num_networks = 2;
    config.splits_per_network = 1;
    config.seed = 9;
    const ClusterResult result = run_cluster_experiment(config);
    CHECK(result.msgnn.n_runs == 2);
    CHECK(result.baseline.n_runs == 2);
    CHECK(result.msgnn.runs.size() == 2);
    for (double v : result.msgnn.runs) CHECK((v >= -1.0 && v <= 1.0));
}

TEST_CASE("fully randomized signs destroy ssbm clustering signal") {
    // at eta = 0.5 every edge sign is a fair coin and edge presence is
    // uniform, so test ARI must sit near zero
    ClusterExperimentConfig config;
    config.dataset = "ssbm-noise";
    config.use_ssbm = true;
    config.ssbm_n = 400;
    config.ssbm_clusters = 3;
    config.ssbm_p = 0.1;
    config.ssbm_rho = 1.0;
    config.ssbm_eta = 0.5;
    config.eigen_features = true;
    config.q = 0.0;
    config.hidden = 8;
    config.max_epochs = 120;
    config.patience = 60;
    config.num_networks = 2;
    config.splits_per_network = 1;
    config.seed = 13;
    config.run_baseline = false;
    const ClusterResult result = run_cluster_experiment(config);
    CHECK(std::abs(result.msgnn.mean) < 0.15);
}

TEST_CASE("lockfile records config seeds and version") {
    TempDir dir;
    write_lockfile(dir.file("lock.json"), "generate", {{"n", 100}, {"p", 0.1}}, 42, {1, 2, 3});
    std::ifstream in(dir.file("lock.json"));
    nlohmann::json doc = nlohmann::json::parse(in);
    CHECK(doc["command"] == "generate");
    CHECK(doc["seed"] == 42);
    CHECK(doc["version"] == version_string);
    CHECK(doc["derived_seeds"].size() == 3);
    CHECK(doc["params"]["n"] == 100);
}
