#include "marl_lob/complexity.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include <boost/random/mersenne_twister.hpp>
#include <boost/random/uniform_int_distribution.hpp>

#include "marl_lob/stylized_facts.hpp"

namespace marl_lob::complexity {

void EmbeddingConfig::validate(std::size_t n) const {
    if (m < 1) throw EmbeddingError("embedding dimension must be >= 1");
    if (tau < 1) throw EmbeddingError("delay must be >= 1");
    if (theiler < 0) throw EmbeddingError("theiler window must be >= 0");
    const auto need = static_cast<std::size_t>(m - 1) * static_cast<std::size_t>(tau) + static_cast<std::size_t>(theiler);
    if (n <= need)
        throw EmbeddingError("series of " + std::to_string(n) + " points is too short for m=" + std::to_string(m) +
                             ", tau=" + std::to_string(tau) + ", theiler=" + std::to_string(theiler));
}

int correlation_time(std::span<const double> x, int max_lag) {
    if (max_lag < 1) throw std::invalid_argument("correlation_time: max_lag must be >= 1");
    const int lag = std::min<int>(max_lag + 1, static_cast<int>(x.size()) - 1);
    if (lag < 2) return max_lag;
    const auto curve = facts::acf(x, lag, true);
    if (curve.undefined) return max_lag;
    std::vector<double> rho{1.0};
    rho.insert(rho.end(), curve.rho.begin(), curve.rho.end());
    for (int k = 1; k + 1 < static_cast<int>(rho.size()) && k <= max_lag; ++k) {
        const auto i = static_cast<std::size_t>(k);
        if (rho[i] < rho[i - 1] && rho[i] < rho[i + 1]) return k;
    }
    for (int k = 1; k < static_cast<int>(rho.size()) && k <= max_lag; ++k)
        if (rho[static_cast<std::size_t>(k)] <= 0.0) return k;
    return max_lag;
}

Cloud delay_embed(std::span<const double> x, int m, int tau) {
    EmbeddingConfig{m, tau, 0}.validate(x.size());
    const std::size_t span = static_cast<std::size_t>(m - 1) * static_cast<std::size_t>(tau);
    Cloud c;
    c.dim = m;
    c.coords.reserve((x.size() - span) * static_cast<std::size_t>(m));
    for (std::size_t t = span; t < x.size(); ++t)
        for (int j = 0; j < m; ++j) c.coords.push_back(x[t - static_cast<std::size_t>(j) * static_cast<std::size_t>(tau)]);
    return c;
}

double max_norm(std::span<const double> a, std::span<const double> b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::fabs(a[i] - b[i]));
    return d;
}

std::vector<double> correlation_integral(const Cloud& cloud, std::span<const double> radii, int theiler) {
    if (theiler < 0) throw std::invalid_argument("correlation_integral: theiler window must be >= 0");
    if (!std::is_sorted(radii.begin(), radii.end()))
        throw std::invalid_argument("correlation_integral: radii must be increasing");
    const std::size_t n = cloud.size();
    const auto w = static_cast<std::size_t>(theiler);
    std::vector<double> out(radii.size(), 0.0);
    if (n < 2 || n <= w + 1) return out;

    // hist[k] counts pairs whose distance first falls below radii[k].
    std::vector<std::uint64_t> hist(radii.size() + 1, 0);
    std::uint64_t total = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const auto pi = cloud.point(i);
        for (std::size_t j = i + w + 1; j < n; ++j) {
            const double d = max_norm(pi, cloud.point(j));
            ++hist[static_cast<std::size_t>(std::upper_bound(radii.begin(), radii.end(), d) - radii.begin())];
            ++total;
        }
    }
    std::uint64_t acc = 0;
    for (std::size_t k = 0; k < radii.size(); ++k) {
        acc += hist[k];
        out[k] = static_cast<double>(acc) / static_cast<double>(total);
    }
    return out;
}

namespace {

struct Thinned {
    Cloud cloud;
    int theiler;
};

Thinned thin(const Cloud& cloud, int theiler, std::size_t max_points) {
    const std::size_t n = cloud.size();
    if (max_points < 2 || n <= max_points) return {cloud, theiler};
    const std::size_t stride = (n + max_points - 1) / max_points;
    Cloud out;
    out.dim = cloud.dim;
    for (std::size_t i = 0; i < n; i += stride) {
        auto p = cloud.point(i);
        out.coords.insert(out.coords.end(), p.begin(), p.end());
    }
    const auto w = static_cast<int>((static_cast<std::size_t>(theiler) + stride - 1) / stride);
    return {std::move(out), w};
}

std::vector<double> sample_distances(const Cloud& cloud, int theiler) {
    const std::size_t n = cloud.size();
    const auto w = static_cast<std::size_t>(theiler);
    std::vector<double> d;
    if (n <= w + 1) return d;
    const std::size_t pairs = (n - w - 1) * (n - w) / 2;
    constexpr std::size_t kSample = 200000;
    if (pairs <= kSample) {
        d.reserve(pairs);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + w + 1; j < n; ++j) d.push_back(max_norm(cloud.point(i), cloud.point(j)));
        return d;
    }
    boost::random::mt19937_64 rng(0x5eed);
    boost::random::uniform_int_distribution<std::size_t> pick(0, n - 1);
    d.reserve(kSample);
    while (d.size() < kSample) {
        const std::size_t i = pick(rng), j = pick(rng);
        if ((i > j ? i - j : j - i) <= w) continue;
        d.push_back(max_norm(cloud.point(i), cloud.point(j)));
    }
    return d;
}

double quantile_of(std::vector<double>& v, double q) {
    const auto k = static_cast<std::size_t>(std::floor(q * static_cast<double>(v.size() - 1)));
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(k), v.end());
    return v[k];
}

double fit_slope(const CorrelationCurve& c, int first, int last) {
    std::vector<double> lx, ly;
    for (int k = first; k <= last; ++k) {
        lx.push_back(std::log(c.radii[static_cast<std::size_t>(k)]));
        ly.push_back(std::log(c.c[static_cast<std::size_t>(k)]));
    }
    const double mx = std::accumulate(lx.begin(), lx.end(), 0.0) / static_cast<double>(lx.size());
    const double my = std::accumulate(ly.begin(), ly.end(), 0.0) / static_cast<double>(ly.size());
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sxy += (lx[i] - mx) * (ly[i] - my);
        sxx += (lx[i] - mx) * (lx[i] - mx);
    }
    return sxx > 0 ? sxy / sxx : 0.0;
}

}  // namespace

CorrelationCurve correlation_dimension(const Cloud& input, int theiler, const DimensionOptions& options) {
    if (options.n_radii < 2) throw std::invalid_argument("correlation_dimension: need at least 2 radii");
    if (input.size() < 2) throw EmbeddingError("correlation_dimension: need at least 2 points");
    const auto [cloud, w] = thin(input, theiler, options.max_points);

    CorrelationCurve out;
    double lo = 0.0, hi = 0.0;
    if (options.radii_range) {
        std::tie(lo, hi) = *options.radii_range;
        if (!(lo > 0 && hi > lo)) throw std::invalid_argument("correlation_dimension: radii range must satisfy 0 < lo < hi");
    } else {
        auto d = sample_distances(cloud, w);
        if (d.empty()) throw EmbeddingError("correlation_dimension: no pairs outside the Theiler window");
        hi = quantile_of(d, options.hi_quantile);
        if (!(hi > 0)) {
            // Every sampled pair coincides: a point has dimension zero.
            out.radii = {1.0};
            out.c = correlation_integral(cloud, out.radii, w);
            out.scaling_found = true;
            return out;
        }
        lo = quantile_of(d, options.lo_quantile);
        if (!(lo > 0)) {
            double smallest = hi;
            for (double v : d)
                if (v > 0) smallest = std::min(smallest, v);
            lo = smallest;
        }
        if (!(hi > lo)) hi = lo * 2.0;
    }
    const double llo = std::log(lo), lhi = std::log(hi);
    for (int k = 0; k < options.n_radii; ++k)
        out.radii.push_back(std::exp(llo + (lhi - llo) * k / (options.n_radii - 1)));
    out.c = correlation_integral(cloud, out.radii, w);

    const int n = options.n_radii;
    int first_valid = 0;
    while (first_valid < n && !(out.c[static_cast<std::size_t>(first_valid)] > 0)) ++first_valid;
    if (n - first_valid < 2) {
        out.fit_first = out.fit_last = n - 1;
        return out;
    }

    if (options.fit_range) {
        out.fit_first = std::max(options.fit_range->first, first_valid);
        out.fit_last = std::min(options.fit_range->second, n - 1);
        if (out.fit_last <= out.fit_first) throw std::invalid_argument("correlation_dimension: empty fit range");
        out.scaling_found = true;
        out.dimension = fit_slope(out, out.fit_first, out.fit_last);
        return out;
    }

    // Local slope between radius k and k+1.
    std::vector<double> slope;
    for (int k = first_valid; k + 1 < n; ++k) {
        const auto i = static_cast<std::size_t>(k);
        slope.push_back((std::log(out.c[i + 1]) - std::log(out.c[i])) /
                        (std::log(out.radii[i + 1]) - std::log(out.radii[i])));
    }
    int best_a = -1, best_len = 0;
    for (std::size_t a = 0; a < slope.size(); ++a) {
        double mn = slope[a], mx = slope[a], sum = 0.0;
        for (std::size_t b = a; b < slope.size(); ++b) {
            mn = std::min(mn, slope[b]);
            mx = std::max(mx, slope[b]);
            sum += slope[b];
            const double mean = sum / static_cast<double>(b - a + 1);
            if (!(mean > 0) || mx - mn > options.slope_tolerance * mean) break;
            const int len = static_cast<int>(b - a + 1);
            if (len > best_len) {
                best_len = len;
                best_a = static_cast<int>(a);
            }
        }
    }
    if (best_len >= 3) {
        out.scaling_found = true;
        out.fit_first = first_valid + best_a;
        out.fit_last = out.fit_first + best_len;
    } else {
        out.fit_first = first_valid;
        out.fit_last = n - 1;
    }
    out.dimension = fit_slope(out, out.fit_first, out.fit_last);
    return out;
}

CorrelationCurve correlation_dimension(std::span<const double> x, const EmbeddingConfig& config,
                                       const DimensionOptions& options) {
    config.validate(x.size());
    return correlation_dimension(delay_embed(x, config.m, config.tau), config.theiler, options);
}

std::vector<DimensionPoint> dimension_vs_embedding(std::span<const double> x, int m_min, int m_max,
                                                   const DimensionOptions& options, std::optional<int> tau,
                                                   std::optional<int> theiler) {
    if (m_min < 1 || m_max < m_min) throw std::invalid_argument("dimension_vs_embedding: need 1 <= m_min <= m_max");
    const int t = tau ? *tau : correlation_time(x);
    const int w = theiler ? *theiler : t;
    std::vector<DimensionPoint> out;
    for (int m = m_min; m <= m_max; ++m) {
        const EmbeddingConfig cfg{m, t, w};
        out.push_back({m, t, correlation_dimension(x, cfg, options)});
    }
    return out;
}

DeltaDimension delta_dimension(std::span<const DimensionPoint> subject, std::span<const DimensionPoint> baseline) {
    std::vector<double> diffs;
    for (const auto& s : subject)
        for (const auto& b : baseline)
            if (s.m == b.m) diffs.push_back(s.curve.dimension - b.curve.dimension);
    if (diffs.empty()) throw std::invalid_argument("delta_dimension: no common embedding dimension");
    DeltaDimension d;
    d.mean_all = std::accumulate(diffs.begin(), diffs.end(), 0.0) / static_cast<double>(diffs.size());
    const std::size_t half = diffs.size() / 2;
    d.mean_high = std::accumulate(diffs.begin() + static_cast<std::ptrdiff_t>(half), diffs.end(), 0.0) /
                  static_cast<double>(diffs.size() - half);
    return d;
}

PhaseSpace phase_space_export(std::span<const double> x, int tau, std::size_t segment_length) {
    if (tau < 1) throw std::invalid_argument("phase_space: delay must be >= 1");
    if (segment_length < 1) throw std::invalid_argument("phase_space: segment length must be >= 1");
    const auto lag = static_cast<std::size_t>(tau);
    if (x.size() <= lag + segment_length)
        throw EmbeddingError("phase_space: series must be longer than delay + segment length");
    PhaseSpace ps;
    ps.tau = tau;
    std::size_t jump_at = lag;
    double jump = -1.0;
    for (std::size_t t = lag; t < x.size(); ++t) {
        ps.t.push_back(t);
        ps.x.push_back(x[t]);
        ps.lagged.push_back(x[t - lag]);
        const double move = std::fabs(x[t] - x[t - 1]);
        if (move > jump) {
            jump = move;
            jump_at = t;
        }
    }
    const std::size_t rows = ps.t.size();
    const std::size_t centre = jump_at - lag;
    std::size_t first = centre >= segment_length / 2 ? centre - segment_length / 2 : 0;
    first = std::min(first, rows - segment_length);
    ps.segment_first = first;
    ps.segment_last = first + segment_length;
    return ps;
}

}  // namespace marl_lob::complexity
