#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "msgnn/dense.hpp"
#include "msgnn/rng.hpp"

namespace msgnn {

struct KmeansResult {
    std::vector<int> labels;
    RMat centers;
    double inertia = 0.0;
};

namespace detail {

inline double sq_dist(const RMat& pts, index_t p, const RMat& centers, index_t c) {
    double s = 0.0;
    for (index_t j = 0; j < pts.cols; ++j) {
        const double diff = pts(p, j) - centers(c, j);
        s += diff * diff;
    }
    return s;
}

}  // namespace detail

// Lloyd's algorithm with k-means++ seeding, best of `restarts` runs by
// inertia. Clusters emptied during an iteration are refilled with the point
// farthest from its current center, so degenerate inputs (fewer distinct
// points than k) end as one bulk cluster plus singletons.
inline KmeansResult kmeans(const RMat& pts, int k, std::uint64_t seed, int restarts = 50,
                           int max_iter = 300, double tol = 1e-6) {
    const index_t n = pts.rows;
    if (k < 1) throw std::invalid_argument("kmeans: k must be at least 1");
    if (n < k) throw std::invalid_argument("kmeans: fewer points than clusters");

    KmeansResult best;
    best.inertia = std::numeric_limits<double>::infinity();
    Rng rng(seed);

    std::vector<double> dist2(static_cast<std::size_t>(n));
    for (int run = 0; run < restarts; ++run) {
        RMat centers(k, pts.cols);
        // k-means++ seeding
        index_t first = static_cast<index_t>(rng.uniform_int(static_cast<std::uint64_t>(n)));
        for (index_t j = 0; j < pts.cols; ++j) centers(0, j) = pts(first, j);
        for (int c = 1; c < k; ++c) {
            double total = 0.0;
            for (index_t p = 0; p < n; ++p) {
                double dmin = std::numeric_limits<double>::infinity();
                for (int cc = 0; cc < c; ++cc) dmin = std::min(dmin, detail::sq_dist(pts, p, centers, cc));
                dist2[static_cast<std::size_t>(p)] = dmin;
                total += dmin;
            }
            index_t chosen;
            if (total <= 0.0) {
                chosen = static_cast<index_t>(rng.uniform_int(static_cast<std::uint64_t>(n)));
            } else {
                double target = rng.uniform() * total;
                chosen = n - 1;
                for (index_t p = 0; p < n; ++p) {
                    target -= dist2[static_cast<std::size_t>(p)];
                    if (target <= 0.0) {
                        chosen = p;
                        break;
                    }
                }
            }
            for (index_t j = 0; j < pts.cols; ++j) centers(c, j) = pts(chosen, j);
        }

        std::vector<int> labels(static_cast<std::size_t>(n), 0);
        std::vector<index_t> counts(static_cast<std::size_t>(k));
        double inertia = std::numeric_limits<double>::infinity();
        for (int it = 0; it < max_iter; ++it) {
            double new_inertia = 0.0;
            for (index_t p = 0; p < n; ++p) {
                double dmin = std::numeric_limits<double>::infinity();
                int arg = 0;
                for (int c = 0; c < k; ++c) {
                    const double d = detail::sq_dist(pts, p, centers, c);
                    if (d < dmin) {
                        dmin = d;
                        arg = c;
                    }
                }
                labels[static_cast<std::size_t>(p)] = arg;
                new_inertia += dmin;
            }
            // refill empty clusters with farthest points, one each
            std::fill(counts.begin(), counts.end(), index_t{0});
            for (index_t p = 0; p < n; ++p) ++counts[static_cast<std::size_t>(labels[static_cast<std::size_t>(p)])];
            for (int c = 0; c < k; ++c) {
                if (counts[static_cast<std::size_t>(c)] > 0) continue;
                index_t far = 0;
                double dmax = -1.0;
                for (index_t p = 0; p < n; ++p) {
                    if (counts[static_cast<std::size_t>(labels[static_cast<std::size_t>(p)])] <= 1) continue;
                    const double d = detail::sq_dist(pts, p, centers, labels[static_cast<std::size_t>(p)]);
                    if (d > dmax) {
                        dmax = d;
                        far = p;
                    }
                }
                if (dmax < 0.0) continue;
                --counts[static_cast<std::size_t>(labels[static_cast<std::size_t>(far)])];
                labels[static_cast<std::size_t>(far)] = c;
                counts[static_cast<std::size_t>(c)] = 1;
            }
            // recompute centers
            for (index_t j = 0; j < static_cast<index_t>(centers.a.size()); ++j) centers.a[static_cast<std::size_t>(j)] = 0.0;
            for (index_t p = 0; p < n; ++p) {
                const int c = labels[static_cast<std::size_t>(p)];
                for (index_t j = 0; j < pts.cols; ++j) centers(c, j) += pts(p, j);
            }
            for (int c = 0; c < k; ++c) {
                if (counts[static_cast<std::size_t>(c)] == 0) continue;
                const double inv = 1.0 / static_cast<double>(counts[static_cast<std::size_t>(c)]);
                for (index_t j = 0; j < pts.cols; ++j) centers(c, j) *= inv;
            }
            if (std::isfinite(inertia) && std::abs(inertia - new_inertia) <= tol * std::max(inertia, 1e-300)) {
                inertia = new_inertia;
                break;
            }
            inertia = new_inertia;
        }
        if (inertia < best.inertia) {
            best.inertia = inertia;
            best.labels = labels;
            best.centers = centers;
        }
    }
    return best;
}

}  // namespace msgnn
