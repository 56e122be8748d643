#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace marl_lob::complexity {

class EmbeddingError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct EmbeddingConfig {
    int m = 2;
    int tau = 1;
    int theiler = 0;

    /// Throws EmbeddingError unless n > (m-1)*tau + theiler.
    void validate(std::size_t n) const;
};

/// First local minimum of the demeaned ACF; then the first zero crossing;
/// then max_lag.
int correlation_time(std::span<const double> x, int max_lag = 100);

/// Row-major point cloud.
struct Cloud {
    int dim = 1;
    std::vector<double> coords;

    std::size_t size() const { return coords.size() / static_cast<std::size_t>(dim); }
    std::span<const double> point(std::size_t i) const {
        return {coords.data() + i * static_cast<std::size_t>(dim), static_cast<std::size_t>(dim)};
    }
};

/// y_t = (x_t, x_{t-tau}, ..., x_{t-(m-1)tau}) for t = (m-1)tau .. n-1.
Cloud delay_embed(std::span<const double> x, int m, int tau);

double max_norm(std::span<const double> a, std::span<const double> b);

/// Fraction of pairs (i, j) with |i - j| > theiler and max-norm distance
/// strictly below each radius. Radii must be increasing.
std::vector<double> correlation_integral(const Cloud& cloud, std::span<const double> radii, int theiler);

struct DimensionOptions {
    int n_radii = 40;
    /// Radii span these quantiles of the pair-distance distribution.
    double lo_quantile = 0.01;
    double hi_quantile = 0.5;
    /// Explicit radius range; overrides the quantiles.
    std::optional<std::pair<double, double>> radii_range;
    /// Explicit fit window as radius indices [first, last]; overrides the search.
    std::optional<std::pair<int, int>> fit_range;
    double slope_tolerance = 0.15;
    /// Larger clouds are thinned by a constant stride; the Theiler window is
    /// rescaled to the stride.
    std::size_t max_points = 3000;
};

struct CorrelationCurve {
    std::vector<double> radii;
    std::vector<double> c;
    double dimension = 0.0;
    int fit_first = 0;  ///< radius indices of the fit, inclusive
    int fit_last = 0;
    /// False when no stable scaling run was found and the full range was fit.
    bool scaling_found = false;
};

CorrelationCurve correlation_dimension(const Cloud& cloud, int theiler, const DimensionOptions& options = {});
CorrelationCurve correlation_dimension(std::span<const double> x, const EmbeddingConfig& config,
                                       const DimensionOptions& options = {});

struct DimensionPoint {
    int m = 0;
    int tau = 0;
    CorrelationCurve curve;
};

/// D(m) for m in [m_min, m_max]; tau and the Theiler window default to the
/// correlation time.
std::vector<DimensionPoint> dimension_vs_embedding(std::span<const double> x, int m_min, int m_max,
                                                   const DimensionOptions& options = {},
                                                   std::optional<int> tau = std::nullopt,
                                                   std::optional<int> theiler = std::nullopt);

struct DeltaDimension {
    double mean_all = 0.0;   ///< mean over common m of D_case(m) - D_base(m)
    double mean_high = 0.0;  ///< same, over the upper half of the common m range
};

/// Throws std::invalid_argument when the curves share no m.
DeltaDimension delta_dimension(std::span<const DimensionPoint> subject, std::span<const DimensionPoint> baseline);

struct PhaseSpace {
    int tau = 0;
    std::vector<std::size_t> t;
    std::vector<double> x;
    std::vector<double> lagged;
    /// Highlighted index range [first, last) in t.
    std::size_t segment_first = 0;
    std::size_t segment_last = 0;
};

/// Pairs (x_t, x_{t-tau}) and the segment of `segment_length` points
/// centred on the largest absolute one-step move.
PhaseSpace phase_space_export(std::span<const double> x, int tau, std::size_t segment_length);

}  // namespace marl_lob::complexity
