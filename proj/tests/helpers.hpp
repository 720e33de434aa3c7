#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "seizurewave/detail/rng.hpp"

namespace testutil {

using seizurewave::detail::Rng;
using seizurewave::detail::standard_normal;
using seizurewave::detail::uniform01;
using seizurewave::detail::uniform_below;

inline std::vector<double> random_signal(Rng& rng, std::size_t n) {
    std::vector<double> x(n);
    for (auto& v : x) v = standard_normal(rng);
    return x;
}

inline double max_abs(const std::vector<double>& x) {
    double m = 0.0;
    for (double v : x) m = std::max(m, std::abs(v));
    return m;
}

inline double energy(const std::vector<double>& x) {
    double e = 0.0;
    for (double v : x) e += v * v;
    return e;
}

/// max_t |a - b| / max(max_t |b|, floor)
inline double rel_max_err(const std::vector<double>& a, const std::vector<double>& b) {
    double err = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) err = std::max(err, std::abs(a[i] - b[i]));
    return err / std::max(max_abs(b), 1e-300);
}

/// Brute-force all-pairs shortest paths (Floyd-Warshall) on an adjacency
/// matrix; -1 marks unreachable. Independent oracle for the BFS path.
inline std::vector<std::vector<int>> floyd_warshall(
    const std::vector<std::vector<std::uint8_t>>& adj) {
    const std::size_t n = adj.size();
    constexpr int kInf = std::numeric_limits<int>::max() / 4;
    std::vector<std::vector<int>> dist(n, std::vector<int>(n, kInf));
    for (std::size_t i = 0; i < n; ++i) dist[i][i] = 0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (adj[i][j]) dist[i][j] = 1;
        }
    }
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                dist[i][j] = std::min(dist[i][j], dist[i][k] + dist[k][j]);
            }
        }
    }
    for (auto& row : dist) {
        for (auto& d : row) {
            if (d >= kInf) d = -1;
        }
    }
    return dist;
}

/// The seven-electrode adjacency worked through in the connectivity example
/// (row sums 2,4,5,1,1,3,2).
inline std::vector<std::vector<std::uint8_t>> seven_node_adjacency() {
    return {
        {0, 1, 1, 0, 0, 0, 0},
        {1, 0, 1, 0, 0, 1, 1},
        {1, 1, 0, 1, 1, 1, 0},
        {0, 0, 1, 0, 0, 0, 0},
        {0, 0, 1, 0, 0, 0, 0},
        {0, 1, 1, 0, 0, 0, 1},
        {0, 1, 0, 0, 0, 1, 0},
    };
}

}  // namespace testutil
