#include "seizurewave/graph.hpp"

#include <cmath>
#include <queue>
#include <sstream>

namespace seizurewave {

ConnectivityGraph build_graph(const WaveletCorrMatrix& rho, double threshold, bool absolute) {
    if (!(threshold > 0.0) || threshold > 1.0) {
        throw BadThreshold("correlation threshold must lie in (0, 1]");
    }
    const std::size_t n = rho.size();
    ConnectivityGraph g;
    g.node_labels = rho.channel_ids;
    g.threshold = threshold;
    g.adjacency.assign(n, std::vector<std::uint8_t>(n, 0));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (!rho.defined(i, j)) continue;
            const double value = absolute ? std::abs(rho.rho[i][j]) : rho.rho[i][j];
            if (value >= threshold) g.adjacency[i][j] = g.adjacency[j][i] = 1;
        }
    }
    return g;
}

std::vector<int> degrees(const ConnectivityGraph& g) {
    const std::size_t n = g.size();
    std::vector<int> deg(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        int sum = 0;
        for (std::size_t j = 0; j < n; ++j) sum += g.adjacency[i][j];
        deg[i] = sum;
    }
    return deg;
}

std::vector<std::vector<double>> shortest_path_reciprocals(const ConnectivityGraph& g) {
    const std::size_t n = g.size();
    std::vector<std::vector<double>> r(n, std::vector<double>(n, 0.0));
    std::vector<int> dist(n);
    std::queue<std::size_t> frontier;
    for (std::size_t src = 0; src < n; ++src) {
        std::fill(dist.begin(), dist.end(), -1);
        dist[src] = 0;
        frontier.push(src);
        while (!frontier.empty()) {
            const std::size_t u = frontier.front();
            frontier.pop();
            for (std::size_t v = 0; v < n; ++v) {
                if (g.adjacency[u][v] && dist[v] < 0) {
                    dist[v] = dist[u] + 1;
                    frontier.push(v);
                }
            }
        }
        for (std::size_t j = 0; j < n; ++j) {
            if (j != src && dist[j] > 0) r[src][j] = 1.0 / static_cast<double>(dist[j]);
        }
    }
    return r;
}

EfficiencyVector global_efficiency(const ConnectivityGraph& g) {
    const std::size_t n = g.size();
    if (n < 2) throw TooFewNodes("global efficiency needs at least 2 nodes");
    const auto r = shortest_path_reciprocals(g);
    EfficiencyVector eglob(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double sum = 0.0;
        for (std::size_t j = 0; j < n; ++j) sum += r[i][j];
        eglob[i] = sum / static_cast<double>(n - 1);
    }
    return eglob;
}

std::string graph_to_edge_csv(const ConnectivityGraph& g) {
    std::ostringstream out;
    out << "node_a,node_b\n";
    for (std::size_t i = 0; i < g.size(); ++i) {
        for (std::size_t j = i + 1; j < g.size(); ++j) {
            if (g.adjacency[i][j]) out << g.node_labels[i] << ',' << g.node_labels[j] << '\n';
        }
    }
    return out.str();
}

}  // namespace seizurewave
