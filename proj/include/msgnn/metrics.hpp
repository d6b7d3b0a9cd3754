#pragma once

#include <map>
#include <span>
#include <stdexcept>
#include <vector>

namespace msgnn {

inline double accuracy(std::span<const int> pred, std::span<const int> truth) {
    if (pred.size() != truth.size()) throw std::invalid_argument("accuracy: length mismatch");
    if (pred.empty()) throw std::invalid_argument("accuracy: empty input");
    std::size_t hits = 0;
    for (std::size_t i = 0; i < pred.size(); ++i)
        if (pred[i] == truth[i]) ++hits;
    return static_cast<double>(hits) / static_cast<double>(pred.size());
}

// Adjusted Rand Index via the contingency-table form of the pair-counting
// formula. Label values are arbitrary ints.
inline double ari(std::span<const int> pred, std::span<const int> truth) {
    if (pred.size() != truth.size()) throw std::invalid_argument("ari: length mismatch");
    if (pred.empty()) throw std::invalid_argument("ari: empty input");
    const double n = static_cast<double>(pred.size());

    std::map<std::pair<int, int>, double> cells;
    std::map<int, double> rows, cols;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        cells[{pred[i], truth[i]}] += 1.0;
        rows[pred[i]] += 1.0;
        cols[truth[i]] += 1.0;
    }
    auto comb2 = [](double m) { return m * (m - 1.0) / 2.0; };
    double sum_cells = 0.0, sum_rows = 0.0, sum_cols = 0.0;
    for (const auto& [key, c] : cells) sum_cells += comb2(c);
    for (const auto& [key, c] : rows) sum_rows += comb2(c);
    for (const auto& [key, c] : cols) sum_cols += comb2(c);

    const double expected = sum_rows * sum_cols / comb2(n);
    const double max_index = 0.5 * (sum_rows + sum_cols);
    if (max_index == expected) return 1.0;  // both partitions trivial
    return (sum_cells - expected) / (max_index - expected);
}

}  // namespace msgnn
