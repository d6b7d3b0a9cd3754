#pragma once

#include <charconv>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "msgnn/graph.hpp"
#include "msgnn/leadlag.hpp"
#include "msgnn/maglap.hpp"
#include "msgnn/net.hpp"
#include "msgnn/splits.hpp"

namespace msgnn {

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            fields.push_back(cur);
            cur.clear();
        } else if (ch != '\r') {
            cur.push_back(ch);
        }
    }
    fields.push_back(cur);
    for (std::string& f : fields) {
        while (!f.empty() && (f.front() == ' ' || f.front() == '\t')) f.erase(f.begin());
        while (!f.empty() && (f.back() == ' ' || f.back() == '\t')) f.pop_back();
    }
    return fields;
}

inline bool parse_double(const std::string& s, double& out) {
    const char* begin = s.data();
    const char* end = s.data() + s.size();
    const auto res = std::from_chars(begin, end, out);
    return res.ec == std::errc{} && res.ptr == end;
}

inline bool parse_index(const std::string& s, index_t& out) {
    const char* begin = s.data();
    const char* end = s.data() + s.size();
    const auto res = std::from_chars(begin, end, out);
    return res.ec == std::errc{} && res.ptr == end;
}

template <typename T>
void write_le(std::ostream& os, T v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T read_le(std::istream& is) {
    T v{};
    is.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!is) throw std::runtime_error("binary read: truncated stream");
    return v;
}

}  // namespace detail

struct EdgeListFile {
    std::vector<Edge> edges;
    // populated when the file used string node ids: index -> original id,
    // built from the sorted set of distinct ids
    std::vector<std::string> id_map;
};

// CSV edge list `src,dst,weight`; a non-numeric first row is treated as a
// header. String node ids are mapped through a sorted id table so index
// assignment is stable across runs.
inline EdgeListFile read_edge_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open edge list: " + path);
    struct RawEdge {
        std::string src, dst;
        double w;
    };
    std::vector<RawEdge> raw;
    std::string line;
    bool first = true;
    bool numeric_ids = true;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto fields = detail::split_csv_line(line);
        if (fields.size() < 3) throw std::runtime_error("edge list: expected src,dst,weight in " + path);
        double w;
        if (!detail::parse_double(fields[2], w)) {
            if (first) {
                first = false;
                continue;  // header row
            }
            throw std::runtime_error("edge list: bad weight '" + fields[2] + "' in " + path);
        }
        first = false;
        index_t tmp;
        if (!detail::parse_index(fields[0], tmp) || !detail::parse_index(fields[1], tmp)) numeric_ids = false;
        raw.push_back({fields[0], fields[1], w});
    }

    EdgeListFile out;
    if (numeric_ids) {
        for (const RawEdge& r : raw) {
            Edge e;
            detail::parse_index(r.src, e.src);
            detail::parse_index(r.dst, e.dst);
            e.weight = r.w;
            out.edges.push_back(e);
        }
    } else {
        std::map<std::string, index_t> ids;
        for (const RawEdge& r : raw) {
            ids.emplace(r.src, 0);
            ids.emplace(r.dst, 0);
        }
        index_t next = 0;
        for (auto& [key, idx] : ids) {
            idx = next++;
            out.id_map.push_back(key);
        }
        for (const RawEdge& r : raw) out.edges.push_back({ids.at(r.src), ids.at(r.dst), r.w});
    }
    return out;
}

inline void write_edge_csv(const std::string& path, const SignedDiGraph& g) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write edge list: " + path);
    out << "src,dst,weight\n";
    out.precision(17);
    for (const Edge& e : g.edges()) out << e.src << ',' << e.dst << ',' << e.weight << '\n';
}

inline void write_labels_csv(const std::string& path, const std::vector<int>& labels) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write labels: " + path);
    out << "node,label\n";
    for (std::size_t i = 0; i < labels.size(); ++i) out << i << ',' << labels[i] << '\n';
}

inline std::vector<int> read_labels_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open labels: " + path);
    std::vector<std::pair<index_t, int>> rows;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto fields = detail::split_csv_line(line);
        if (fields.size() < 2) throw std::runtime_error("labels: expected node,label in " + path);
        index_t node;
        if (!detail::parse_index(fields[0], node)) {
            if (first) {
                first = false;
                continue;
            }
            throw std::runtime_error("labels: bad node id in " + path);
        }
        first = false;
        index_t label;
        if (!detail::parse_index(fields[1], label)) throw std::runtime_error("labels: bad label in " + path);
        rows.emplace_back(node, static_cast<int>(label));
    }
    index_t n = 0;
    for (const auto& [node, label] : rows) n = std::max(n, node + 1);
    std::vector<int> labels(static_cast<std::size_t>(n), 0);
    for (const auto& [node, label] : rows) labels[static_cast<std::size_t>(node)] = label;
    return labels;
}

inline constexpr char kGraphMagic[4] = {'M', 'S', 'G', '1'};

// "MSG1" | u64 n | u64 m | m x (u64 src, u64 dst, f64 weight), little endian
inline void write_graph_binary(const std::string& path, const SignedDiGraph& g) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write graph: " + path);
    out.write(kGraphMagic, 4);
    detail::write_le<std::uint64_t>(out, static_cast<std::uint64_t>(g.n));
    detail::write_le<std::uint64_t>(out, static_cast<std::uint64_t>(g.num_edges()));
    for (const Edge& e : g.edges()) {
        detail::write_le<std::uint64_t>(out, static_cast<std::uint64_t>(e.src));
        detail::write_le<std::uint64_t>(out, static_cast<std::uint64_t>(e.dst));
        detail::write_le<double>(out, e.weight);
    }
}

inline SignedDiGraph read_graph_binary(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open graph: " + path);
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, kGraphMagic, 4) != 0)
        throw std::runtime_error("graph binary: bad magic in " + path);
    const auto n = static_cast<index_t>(detail::read_le<std::uint64_t>(in));
    const auto m = detail::read_le<std::uint64_t>(in);
    std::vector<Edge> edges;
    edges.reserve(m);
    for (std::uint64_t k = 0; k < m; ++k) {
        Edge e;
        e.src = static_cast<index_t>(detail::read_le<std::uint64_t>(in));
        e.dst = static_cast<index_t>(detail::read_le<std::uint64_t>(in));
        e.weight = detail::read_le<double>(in);
        edges.push_back(e);
    }
    return from_edge_list(edges, n);
}

// (i, j, re, im) rows for debugging
inline void write_matrix_csv(const std::string& path, const HermitianMatrix& h) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write matrix: " + path);
    out << "i,j,re,im\n";
    out.precision(17);
    for (index_t i = 0; i < h.n; ++i) {
        const auto cs = h.m.row_cols(i);
        const auto vs = h.m.row_vals(i);
        for (std::size_t k = 0; k < cs.size(); ++k)
            out << i << ',' << cs[k] << ',' << vs[k].real() << ',' << vs[k].imag() << '\n';
    }
}

inline void write_embedding_csv(const std::string& path, const RMat& x) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write embedding: " + path);
    out.precision(17);
    for (index_t i = 0; i < x.rows; ++i) {
        for (index_t j = 0; j < x.cols; ++j) out << (j ? "," : "") << x(i, j);
        out << '\n';
    }
}

inline void write_history_csv(const std::string& path, const TrainHistory& history) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write history: " + path);
    out << "epoch,loss,metric\n";
    out.precision(17);
    for (std::size_t e = 0; e < history.loss.size(); ++e)
        out << e << ',' << history.loss[e] << ',' << history.metric[e] << '\n';
}

// (i, j, class, partition) rows; partition is train or test
inline void write_split_csv(const std::string& path, const LinkSplit& split) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write split: " + path);
    out << "i,j,class,partition\n";
    for (const LabeledPair& p : split.train) out << p.a << ',' << p.b << ',' << p.cls << ",train\n";
    for (const LabeledPair& p : split.test) out << p.a << ',' << p.b << ',' << p.cls << ",test\n";
}

inline constexpr char kModelMagic[4] = {'M', 'S', 'G', 'N'};
inline constexpr std::uint32_t kModelFormatVersion = 1;

// "MSGN" | u32 version | config block | per-tensor (u64 len, f64 data)
inline void save_checkpoint(const std::string& path, MsgnnModel& model) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write checkpoint: " + path);
    out.write(kModelMagic, 4);
    detail::write_le<std::uint32_t>(out, kModelFormatVersion);
    detail::write_le<std::uint32_t>(out, model.config.task == TaskKind::link ? 1u : 0u);
    detail::write_le<std::int32_t>(out, model.config.in_dim);
    detail::write_le<std::int32_t>(out, model.config.hidden);
    detail::write_le<std::int32_t>(out, model.config.num_classes);
    detail::write_le<std::int32_t>(out, model.config.num_layers);
    detail::write_le<double>(out, model.config.q);
    for (const ParamView& v : parameter_views(model)) {
        detail::write_le<std::uint64_t>(out, v.size);
        out.write(reinterpret_cast<const char*>(v.data), static_cast<std::streamsize>(v.size * sizeof(double)));
    }
}

// Restores config and parameters; the Laplacian cache is rebuilt by the
// caller from the graph the model is applied to.
inline MsgnnModel load_checkpoint(const std::string& path, const HermitianMatrix& laplacian,
                                  double lambda_max) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open checkpoint: " + path);
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, kModelMagic, 4) != 0)
        throw std::runtime_error("checkpoint: bad magic in " + path);
    const auto version = detail::read_le<std::uint32_t>(in);
    if (version != kModelFormatVersion) throw std::runtime_error("checkpoint: unsupported format version");
    ModelConfig config;
    config.task = detail::read_le<std::uint32_t>(in) ? TaskKind::link : TaskKind::node;
    config.in_dim = detail::read_le<std::int32_t>(in);
    config.hidden = detail::read_le<std::int32_t>(in);
    config.num_classes = detail::read_le<std::int32_t>(in);
    config.num_layers = detail::read_le<std::int32_t>(in);
    config.q = detail::read_le<double>(in);
    MsgnnModel model = make_model(config, laplacian, lambda_max, /*seed=*/0);
    for (const ParamView& v : parameter_views(model)) {
        const auto len = detail::read_le<std::uint64_t>(in);
        if (len != v.size) throw std::runtime_error("checkpoint: tensor size mismatch");
        in.read(reinterpret_cast<char*>(v.data), static_cast<std::streamsize>(len * sizeof(double)));
        if (!in) throw std::runtime_error("checkpoint: truncated tensor data");
    }
    return model;
}

// Returns CSV: first column date (ignored content), one column per stock.
inline ReturnPanel read_returns_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open returns: " + path);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("returns: empty file " + path);
    const auto header = detail::split_csv_line(line);
    if (header.size() < 2) throw std::runtime_error("returns: expected date plus stock columns");
    ReturnPanel panel;
    panel.ids.assign(header.begin() + 1, header.end());
    std::vector<std::vector<double>> by_day;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto fields = detail::split_csv_line(line);
        if (fields.size() != header.size()) throw std::runtime_error("returns: ragged row in " + path);
        std::vector<double> day;
        for (std::size_t k = 1; k < fields.size(); ++k) {
            double v;
            if (!detail::parse_double(fields[k], v)) throw std::runtime_error("returns: bad value '" + fields[k] + "'");
            day.push_back(v);
        }
        by_day.push_back(std::move(day));
    }
    const index_t stocks = static_cast<index_t>(panel.ids.size());
    const index_t days = static_cast<index_t>(by_day.size());
    panel.returns = RMat(stocks, days);
    for (index_t d = 0; d < days; ++d)
        for (index_t s = 0; s < stocks; ++s)
            panel.returns(s, d) = by_day[static_cast<std::size_t>(d)][static_cast<std::size_t>(s)];
    panel.validate();
    return panel;
}

}  // namespace msgnn
