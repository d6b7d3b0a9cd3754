#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <span>
#include <stdexcept>
#include <tuple>
#include <vector>

namespace msgnn {

using index_t = std::int64_t;

// Compressed sparse row matrix with column indices sorted within each row.
template <typename T>
struct CsrMatrix {
    index_t rows = 0;
    index_t cols = 0;
    std::vector<index_t> row_ptr;  // size rows + 1
    std::vector<index_t> col;
    std::vector<T> val;

    CsrMatrix() : row_ptr(1, 0) {}
    CsrMatrix(index_t r, index_t c) : rows(r), cols(c), row_ptr(static_cast<std::size_t>(r) + 1, 0) {}

    index_t nnz() const { return static_cast<index_t>(val.size()); }

    std::span<const index_t> row_cols(index_t i) const {
        return {col.data() + row_ptr[static_cast<std::size_t>(i)],
                col.data() + row_ptr[static_cast<std::size_t>(i) + 1]};
    }
    std::span<const T> row_vals(index_t i) const {
        return {val.data() + row_ptr[static_cast<std::size_t>(i)],
                val.data() + row_ptr[static_cast<std::size_t>(i) + 1]};
    }

    // value at (i, j), zero if absent
    T at(index_t i, index_t j) const {
        const auto cs = row_cols(i);
        const auto it = std::lower_bound(cs.begin(), cs.end(), j);
        if (it == cs.end() || *it != j) return T{};
        return row_vals(i)[static_cast<std::size_t>(it - cs.begin())];
    }

    bool contains(index_t i, index_t j) const {
        const auto cs = row_cols(i);
        return std::binary_search(cs.begin(), cs.end(), j);
    }

    // Build from (row, col, value) triples. Duplicate coordinates are either
    // summed or rejected; exact zeros are kept (callers prune beforehand).
    static CsrMatrix from_coo(index_t rows, index_t cols,
                              std::vector<std::tuple<index_t, index_t, T>> coo,
                              bool sum_duplicates = false) {
        std::sort(coo.begin(), coo.end(), [](const auto& a, const auto& b) {
            return std::tie(std::get<0>(a), std::get<1>(a)) < std::tie(std::get<0>(b), std::get<1>(b));
        });
        CsrMatrix m(rows, cols);
        m.col.reserve(coo.size());
        m.val.reserve(coo.size());
        std::vector<index_t> entry_row;
        entry_row.reserve(coo.size());
        for (const auto& [i, j, v] : coo) {
            if (i < 0 || i >= rows || j < 0 || j >= cols)
                throw std::out_of_range("CsrMatrix: index out of range");
            if (!entry_row.empty() && entry_row.back() == i && m.col.back() == j) {
                if (!sum_duplicates) throw std::invalid_argument("CsrMatrix: duplicate coordinate");
                m.val.back() += v;
                continue;
            }
            entry_row.push_back(i);
            m.col.push_back(j);
            m.val.push_back(v);
        }
        for (const index_t i : entry_row) ++m.row_ptr[static_cast<std::size_t>(i) + 1];
        std::partial_sum(m.row_ptr.begin(), m.row_ptr.end(), m.row_ptr.begin());
        return m;
    }

    CsrMatrix transpose() const {
        std::vector<std::tuple<index_t, index_t, T>> coo;
        coo.reserve(static_cast<std::size_t>(nnz()));
        for (index_t i = 0; i < rows; ++i)
            for (index_t k = row_ptr[static_cast<std::size_t>(i)]; k < row_ptr[static_cast<std::size_t>(i) + 1]; ++k)
                coo.emplace_back(col[static_cast<std::size_t>(k)], i, val[static_cast<std::size_t>(k)]);
        return from_coo(cols, rows, std::move(coo));
    }
};

}  // namespace msgnn
