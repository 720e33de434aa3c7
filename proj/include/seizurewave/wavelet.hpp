#pragma once

#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "seizurewave/errors.hpp"

namespace seizurewave {

/// An orthonormal wavelet filter pair in DWT normalization:
///   sum g = sqrt(2),  sum g^2 = 1,  h[l] = (-1)^l g[L-1-l].
/// The MODWT routines rescale by 1/sqrt(2) internally.
struct WaveletFilter {
    std::string name;
    std::vector<double> g;  // scaling (low-pass)
    std::vector<double> h;  // wavelet (high-pass), quadrature mirror of g

    std::size_t length() const { return g.size(); }

    /// Builds h from g and checks the filter invariants (tolerance 1e-12).
    static WaveletFilter from_scaling(std::string name, std::vector<double> g);
};

const WaveletFilter& haar_filter();
/// Least-asymmetric length-8 filter; also answers to "s8".
const WaveletFilter& la8_filter();
/// Lookup by name ("haar", "la8", "s8"); throws UnknownFilter.
const WaveletFilter& filter_by_name(std::string_view name);

/// Maximal-overlap DWT of one signal: J detail vectors and one smooth vector,
/// every one of length n, circular boundary. Satisfies the energy identity
/// ||x||^2 = sum_j ||W_j||^2 + ||V_J||^2.
struct ModwtDecomposition {
    std::vector<std::vector<double>> details;  // details[j-1] = W_j, length n
    std::vector<double> smooth;                // V_J, length n
    std::size_t n = 0;
    WaveletFilter filter;

    int levels() const { return static_cast<int>(details.size()); }
    /// Scale associated with detail level j (T_j = 2^(j-1)).
    static long scale_of_level(int level) { return 1L << (level - 1); }
};

/// Pyramid MODWT to `levels` levels. Any n >= 1 and levels >= 1 are accepted;
/// circular filtering keeps all identities exact regardless of n.
ModwtDecomposition modwt(std::span<const double> x, const WaveletFilter& filter, int levels);

/// Inverse transform; perfect reconstruction of the analyzed signal.
std::vector<double> imodwt(const ModwtDecomposition& d);

/// Multiresolution analysis: J+1 additive components (D_1..D_J, S_J), each of
/// length n, summing pointwise to the original signal.
std::vector<std::vector<double>> mra(const ModwtDecomposition& d);

/// Inverse transform with the given detail levels zeroed out (the smooth is
/// always kept). Excluded levels must lie in 1..J.
std::vector<double> reconstruct_excluding(const ModwtDecomposition& d,
                                          const std::set<int>& excluded_levels);

/// Sum of squared coefficients at one level. Levels 1..J address details;
/// level J+1 addresses the smooth.
double band_energy(const ModwtDecomposition& d, int level);

/// Nominal frequency band of a level: detail j covers [fs/2^(j+1), fs/2^j],
/// the smooth (addressed as level J+1) covers [0, fs/2^(J+1)].
struct FrequencyBand {
    double low_hz = 0.0;
    double high_hz = 0.0;
    bool operator==(const FrequencyBand&) const = default;
};
FrequencyBand level_to_band(int level, int levels, double sample_rate);

/// Debug serialization (level -> coefficient array) for diffing decompositions
/// across implementations. Not a stability-guaranteed format.
std::string decomposition_to_debug_json(const ModwtDecomposition& d);

}  // namespace seizurewave
