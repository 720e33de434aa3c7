#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "seizurewave/wstats.hpp"

namespace seizurewave {

/// Undirected, unweighted electrode connectivity graph for one epoch.
struct ConnectivityGraph {
    std::vector<std::string> node_labels;
    std::vector<std::vector<std::uint8_t>> adjacency;  // symmetric 0/1, zero diagonal
    double threshold = 0.0;

    std::size_t size() const { return adjacency.size(); }
};

/// Per-node global efficiency values, each in [0, 1].
using EfficiencyVector = std::vector<double>;

/// Edge iff the correlation is defined and >= threshold (absolute value when
/// `absolute` is set); undefined pairs get no edge. Threshold must lie in (0, 1].
ConnectivityGraph build_graph(const WaveletCorrMatrix& rho, double threshold,
                              bool absolute = false);

/// Row sums of the adjacency matrix.
std::vector<int> degrees(const ConnectivityGraph& g);

/// R[i][j] = 1 / (BFS shortest path length from i to j), with R[i][i] = 0 and
/// 0 for unreachable pairs.
std::vector<std::vector<double>> shortest_path_reciprocals(const ConnectivityGraph& g);

/// Eglob_i = (1/(N-1)) sum_j R[i][j]. Requires N >= 2.
EfficiencyVector global_efficiency(const ConnectivityGraph& g);

/// Edge list as "node_a,node_b" CSV lines (header included), one per edge.
std::string graph_to_edge_csv(const ConnectivityGraph& g);

}  // namespace seizurewave
