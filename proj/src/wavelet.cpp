#include "seizurewave/wavelet.hpp"

#include <cmath>
#include <cstdio>
#include <numeric>

#include <json.hpp>

namespace seizurewave {

namespace {

constexpr double kSqrt2 = 1.4142135623730950488;

// Least-asymmetric length-8 scaling coefficients (spectral factorization of
// the 4-vanishing-moment Daubechies gain, least-asymmetric phase choice).
constexpr double kLa8Scaling[8] = {
    -0.075765714789502213, -0.029635527646002492,
    0.497618667632774990, 0.803738751805132081,
    0.297857795605306051, -0.099219543576633533,
    -0.012603967262031304, 0.032223100604051468,
};

void check_close(double value, double target, double tol, const char* what) {
    if (std::abs(value - target) > tol) {
        throw Error(std::string("wavelet filter violates ") + what);
    }
}

// One analysis stage: circular filtering of v with the level-j upsampled,
// 1/sqrt(2)-rescaled pair. step = 2^(j-1) mod n.
void analysis_stage(const std::vector<double>& v, const WaveletFilter& f, std::size_t step,
                    std::vector<double>& w_out, std::vector<double>& v_out) {
    const std::size_t n = v.size();
    const std::size_t L = f.length();
    for (std::size_t t = 0; t < n; ++t) {
        double w = 0.0;
        double s = 0.0;
        std::size_t idx = t;
        for (std::size_t l = 0; l < L; ++l) {
            w += f.h[l] * v[idx];
            s += f.g[l] * v[idx];
            idx = idx >= step ? idx - step : idx + n - step;
        }
        w_out[t] = w / kSqrt2;
        v_out[t] = s / kSqrt2;
    }
}

// One synthesis stage, the adjoint of analysis_stage.
void synthesis_stage(const std::vector<double>& w, const std::vector<double>& v,
                     const WaveletFilter& f, std::size_t step, std::vector<double>& out) {
    const std::size_t n = out.size();
    const std::size_t L = f.length();
    for (std::size_t t = 0; t < n; ++t) {
        double acc = 0.0;
        std::size_t idx = t;
        for (std::size_t l = 0; l < L; ++l) {
            acc += f.h[l] * w[idx] + f.g[l] * v[idx];
            idx += step;
            if (idx >= n) idx -= n;
        }
        out[t] = acc / kSqrt2;
    }
}

std::size_t level_step(int level, std::size_t n) {
    // 2^(level-1) mod n without overflow for deep levels.
    std::size_t step = 1;
    for (int j = 1; j < level; ++j) step = (step * 2) % n;
    return step % n;
}

void validate_decomposition(const ModwtDecomposition& d) {
    if (d.n == 0 || d.details.empty()) throw EmptySignal("empty decomposition");
    for (const auto& w : d.details) {
        if (w.size() != d.n) throw LengthMismatch("detail vector length != n");
    }
    if (d.smooth.size() != d.n) throw LengthMismatch("smooth vector length != n");
}

}  // namespace

WaveletFilter WaveletFilter::from_scaling(std::string name, std::vector<double> g) {
    const std::size_t L = g.size();
    if (L < 2 || L % 2 != 0) throw Error("wavelet filter length must be a positive even number");
    WaveletFilter f;
    f.name = std::move(name);
    f.g = std::move(g);
    f.h.resize(L);
    for (std::size_t l = 0; l < L; ++l) {
        f.h[l] = (l % 2 == 0 ? 1.0 : -1.0) * f.g[L - 1 - l];
    }
    const double sum_g = std::accumulate(f.g.begin(), f.g.end(), 0.0);
    const double sum_h = std::accumulate(f.h.begin(), f.h.end(), 0.0);
    double e_g = 0.0;
    double e_h = 0.0;
    for (std::size_t l = 0; l < L; ++l) {
        e_g += f.g[l] * f.g[l];
        e_h += f.h[l] * f.h[l];
    }
    check_close(sum_g, kSqrt2, 1e-12, "sum g = sqrt(2)");
    check_close(sum_h, 0.0, 1e-12, "sum h = 0");
    check_close(e_g, 1.0, 1e-12, "sum g^2 = 1");
    check_close(e_h, 1.0, 1e-12, "sum h^2 = 1");
    return f;
}

const WaveletFilter& haar_filter() {
    static const WaveletFilter f =
        WaveletFilter::from_scaling("haar", {1.0 / kSqrt2, 1.0 / kSqrt2});
    return f;
}

const WaveletFilter& la8_filter() {
    static const WaveletFilter f = WaveletFilter::from_scaling(
        "la8", std::vector<double>(kLa8Scaling, kLa8Scaling + 8));
    return f;
}

const WaveletFilter& filter_by_name(std::string_view name) {
    if (name == "haar") return haar_filter();
    if (name == "la8" || name == "s8") return la8_filter();
    throw UnknownFilter("unknown wavelet filter: " + std::string(name));
}

ModwtDecomposition modwt(std::span<const double> x, const WaveletFilter& filter, int levels) {
    if (x.empty()) throw EmptySignal("modwt: empty signal");
    if (levels < 1) throw NonPositiveLevels("modwt: levels must be >= 1");

    const std::size_t n = x.size();
    ModwtDecomposition d;
    d.n = n;
    d.filter = filter;
    d.details.resize(static_cast<std::size_t>(levels));

    std::vector<double> v(x.begin(), x.end());
    std::vector<double> v_next(n);
    for (int j = 1; j <= levels; ++j) {
        auto& w = d.details[static_cast<std::size_t>(j - 1)];
        w.resize(n);
        analysis_stage(v, filter, level_step(j, n), w, v_next);
        v.swap(v_next);
    }
    d.smooth = std::move(v);
    return d;
}

std::vector<double> imodwt(const ModwtDecomposition& d) {
    validate_decomposition(d);
    std::vector<double> v = d.smooth;
    std::vector<double> v_prev(d.n);
    for (int j = d.levels(); j >= 1; --j) {
        synthesis_stage(d.details[static_cast<std::size_t>(j - 1)], v, d.filter,
                        level_step(j, d.n), v_prev);
        v.swap(v_prev);
    }
    return v;
}

std::vector<std::vector<double>> mra(const ModwtDecomposition& d) {
    validate_decomposition(d);
    const std::size_t n = d.n;
    const int J = d.levels();
    std::vector<std::vector<double>> components;
    components.reserve(static_cast<std::size_t>(J) + 1);

    const std::vector<double> zeros(n, 0.0);
    std::vector<double> v(n);
    std::vector<double> v_prev(n);

    for (int j = 1; j <= J; ++j) {
        // Synthesize detail level j alone.
        synthesis_stage(d.details[static_cast<std::size_t>(j - 1)], zeros, d.filter,
                        level_step(j, n), v);
        for (int k = j - 1; k >= 1; --k) {
            synthesis_stage(zeros, v, d.filter, level_step(k, n), v_prev);
            v.swap(v_prev);
        }
        components.push_back(v);
    }

    v = d.smooth;
    for (int k = J; k >= 1; --k) {
        synthesis_stage(zeros, v, d.filter, level_step(k, n), v_prev);
        v.swap(v_prev);
    }
    components.push_back(v);
    return components;
}

std::vector<double> reconstruct_excluding(const ModwtDecomposition& d,
                                          const std::set<int>& excluded_levels) {
    validate_decomposition(d);
    for (int level : excluded_levels) {
        if (level < 1 || level > d.levels()) {
            throw LevelOutOfRange("reconstruct_excluding: level " + std::to_string(level) +
                                  " outside 1.." + std::to_string(d.levels()));
        }
    }
    if (excluded_levels.empty()) return imodwt(d);

    ModwtDecomposition reduced = d;
    for (int level : excluded_levels) {
        auto& w = reduced.details[static_cast<std::size_t>(level - 1)];
        std::fill(w.begin(), w.end(), 0.0);
    }
    return imodwt(reduced);
}

double band_energy(const ModwtDecomposition& d, int level) {
    validate_decomposition(d);
    const std::vector<double>* coeffs = nullptr;
    if (level >= 1 && level <= d.levels()) {
        coeffs = &d.details[static_cast<std::size_t>(level - 1)];
    } else if (level == d.levels() + 1) {
        coeffs = &d.smooth;
    } else {
        throw LevelOutOfRange("band_energy: level " + std::to_string(level) + " outside 1.." +
                              std::to_string(d.levels() + 1));
    }
    double e = 0.0;
    for (double c : *coeffs) e += c * c;
    return e;
}

FrequencyBand level_to_band(int level, int levels, double sample_rate) {
    if (sample_rate <= 0.0) throw Error("level_to_band: sample rate must be positive");
    if (levels < 1) throw NonPositiveLevels("level_to_band: levels must be >= 1");
    if (level >= 1 && level <= levels) {
        const double denom = std::ldexp(1.0, level);  // 2^level
        return {sample_rate / (2.0 * denom), sample_rate / denom};
    }
    if (level == levels + 1) {
        return {0.0, sample_rate / std::ldexp(2.0, levels)};
    }
    throw LevelOutOfRange("level_to_band: level " + std::to_string(level) + " outside 1.." +
                          std::to_string(levels + 1));
}

std::string decomposition_to_debug_json(const ModwtDecomposition& d) {
    nlohmann::json j;
    j["filter"] = d.filter.name;
    j["n"] = d.n;
    j["levels"] = d.levels();
    for (int level = 1; level <= d.levels(); ++level) {
        j["W" + std::to_string(level)] = d.details[static_cast<std::size_t>(level - 1)];
    }
    j["V" + std::to_string(d.levels())] = d.smooth;
    return j.dump();
}

}  // namespace seizurewave
