#pragma once

#include <span>
#include <string>
#include <vector>

#include "seizurewave/wavelet.hpp"

namespace seizurewave {

/// Per-scale wavelet variance. Detail levels use the biased all-coefficient
/// estimator ||W_j||^2 / n (details have zero sum by construction); the smooth
/// level (addressed as J+1) is the variance of V_J about its mean. Summed over
/// all levels this reproduces the sample variance exactly.
double wavelet_variance(const ModwtDecomposition& d, int level);

/// Per-scale wavelet covariance between two decompositions of equal shape
/// (same n, filter, J). Detail levels: (1/n) sum W_x W_y; smooth level:
/// mean-centered cross products. Summed over levels this reproduces the
/// sample covariance.
double wavelet_covariance(const ModwtDecomposition& dx, const ModwtDecomposition& dy, int level);

/// Standardized wavelet covariance, clamped to [-1, 1]. Throws ZeroVariance
/// when either signal is flat at this level.
double wavelet_correlation(const ModwtDecomposition& dx, const ModwtDecomposition& dy, int level);

/// Symmetric matrix of pairwise wavelet correlations at one level. Pairs where
/// either side has zero level variance are undefined and stored as NaN; the
/// graph builder treats them as "no connection".
struct WaveletCorrMatrix {
    int level = 0;
    std::vector<std::string> channel_ids;
    std::vector<std::vector<double>> rho;  // NaN = undefined

    std::size_t size() const { return rho.size(); }
    bool defined(std::size_t i, std::size_t j) const;
};

WaveletCorrMatrix correlation_matrix(std::span<const ModwtDecomposition> decomps, int level,
                                     std::vector<std::string> channel_ids = {});

}  // namespace seizurewave
