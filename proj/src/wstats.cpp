#include "seizurewave/wstats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace seizurewave {

namespace {

const std::vector<double>& level_coeffs(const ModwtDecomposition& d, int level) {
    if (level >= 1 && level <= d.levels()) return d.details[static_cast<std::size_t>(level - 1)];
    if (level == d.levels() + 1) return d.smooth;
    throw LevelOutOfRange("wavelet level " + std::to_string(level) + " outside 1.." +
                          std::to_string(d.levels() + 1));
}

bool is_smooth_level(const ModwtDecomposition& d, int level) { return level == d.levels() + 1; }

double mean_of(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

void check_same_shape(const ModwtDecomposition& dx, const ModwtDecomposition& dy) {
    if (dx.n != dy.n || dx.levels() != dy.levels() || dx.filter.name != dy.filter.name) {
        throw ShapeMismatch("decompositions differ in n, levels, or filter");
    }
}

// A level counts as flat when its variance is zero up to the floating-point
// residue of the transform (sum h = 0 only holds to ~1e-16, so a constant
// signal leaves ~1e-32-relative energy in every detail level). The threshold
// sits many orders below any real band content.
bool effectively_zero_variance(const ModwtDecomposition& d, double level_variance) {
    double total = 0.0;
    for (const auto& w : d.details) {
        for (double v : w) total += v * v;
    }
    for (double v : d.smooth) total += v * v;
    return level_variance <= total / static_cast<double>(d.n) * 1e-24;
}

}  // namespace

double wavelet_variance(const ModwtDecomposition& d, int level) {
    const auto& w = level_coeffs(d, level);
    const double n = static_cast<double>(d.n);
    if (is_smooth_level(d, level)) {
        const double m = mean_of(w);
        double acc = 0.0;
        for (double x : w) acc += (x - m) * (x - m);
        return acc / n;
    }
    double acc = 0.0;
    for (double x : w) acc += x * x;
    return acc / n;
}

double wavelet_covariance(const ModwtDecomposition& dx, const ModwtDecomposition& dy, int level) {
    check_same_shape(dx, dy);
    const auto& wx = level_coeffs(dx, level);
    const auto& wy = level_coeffs(dy, level);
    const double n = static_cast<double>(dx.n);
    if (is_smooth_level(dx, level)) {
        const double mx = mean_of(wx);
        const double my = mean_of(wy);
        double acc = 0.0;
        for (std::size_t t = 0; t < wx.size(); ++t) acc += (wx[t] - mx) * (wy[t] - my);
        return acc / n;
    }
    double acc = 0.0;
    for (std::size_t t = 0; t < wx.size(); ++t) acc += wx[t] * wy[t];
    return acc / n;
}

double wavelet_correlation(const ModwtDecomposition& dx, const ModwtDecomposition& dy, int level) {
    const double vx = wavelet_variance(dx, level);
    const double vy = wavelet_variance(dy, level);
    if (effectively_zero_variance(dx, vx) || effectively_zero_variance(dy, vy)) {
        throw ZeroVariance("wavelet_correlation: flat signal at level " + std::to_string(level));
    }
    const double rho = wavelet_covariance(dx, dy, level) / std::sqrt(vx * vy);
    return std::clamp(rho, -1.0, 1.0);
}

bool WaveletCorrMatrix::defined(std::size_t i, std::size_t j) const {
    return !std::isnan(rho[i][j]);
}

WaveletCorrMatrix correlation_matrix(std::span<const ModwtDecomposition> decomps, int level,
                                     std::vector<std::string> channel_ids) {
    const std::size_t n_ch = decomps.size();
    for (std::size_t i = 1; i < n_ch; ++i) check_same_shape(decomps[0], decomps[i]);
    if (!channel_ids.empty() && channel_ids.size() != n_ch) {
        throw ShapeMismatch("channel_ids size does not match decomposition count");
    }
    if (channel_ids.empty()) {
        for (std::size_t i = 0; i < n_ch; ++i) channel_ids.push_back("ch" + std::to_string(i));
    }

    WaveletCorrMatrix m;
    m.level = level;
    m.channel_ids = std::move(channel_ids);
    m.rho.assign(n_ch, std::vector<double>(n_ch, std::numeric_limits<double>::quiet_NaN()));

    std::vector<double> variances(n_ch);
    std::vector<char> flat(n_ch);
    for (std::size_t i = 0; i < n_ch; ++i) {
        variances[i] = wavelet_variance(decomps[i], level);
        flat[i] = effectively_zero_variance(decomps[i], variances[i]) ? 1 : 0;
    }

    for (std::size_t i = 0; i < n_ch; ++i) {
        if (!flat[i]) m.rho[i][i] = 1.0;
        for (std::size_t j = i + 1; j < n_ch; ++j) {
            if (flat[i] || flat[j]) continue;
            const double rho = wavelet_covariance(decomps[i], decomps[j], level) /
                               std::sqrt(variances[i] * variances[j]);
            m.rho[i][j] = m.rho[j][i] = std::clamp(rho, -1.0, 1.0);
        }
    }
    return m;
}

}  // namespace seizurewave
