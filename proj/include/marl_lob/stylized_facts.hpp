#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "marl_lob/event_log.hpp"

namespace marl_lob::facts {

/// Raised when an estimator's input does not meet its precondition.
class EstimatorError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct AcfCurve {
    bool demeaned = false;
    /// rho[k - 1] is the estimate at lag k.
    std::vector<double> rho;
    /// Set for a constant demeaned series; rho is then all NaN.
    bool undefined = false;

    double mean_level() const;
};

/// demean=false gives E[x_t x_{t+k}] / E[x_t^2].
AcfCurve acf(std::span<const double> x, int max_lag, bool demean);

/// +1 buyer-initiated, -1 seller-initiated, in event order.
std::vector<double> tradesign_series(std::span<const Trade> trades);
std::vector<double> tradesign_series(std::span<const EventRow> rows);

std::vector<double> log_returns(std::span<const double> prices);
std::vector<double> absolute(std::span<const double> x);

/// Post-event mid and micro series of the action rows, forward-filled;
/// rows before the first two-sided quote are dropped.
struct PriceSeries {
    std::vector<double> mid;
    std::vector<double> micro;
};
PriceSeries price_series(std::span<const EventRow> rows);

/// Rescaled range over dyadic windows with the Anis-Lloyd-Peters
/// small-sample correction. Needs at least 256 points.
double hurst_exponent(std::span<const double> x);
/// Uncorrected slope of log R/S on log window size.
double hurst_rs_slope(std::span<const double> x);

/// Log-periodogram regression over the lowest floor(sqrt(n)) Fourier
/// frequencies. Needs at least 512 points.
double gph_estimate(std::span<const double> x);

/// t-statistic of the lagged level in an ADF regression with a constant.
double adf_statistic(std::span<const double> x, int lags = 1);

struct GarchFit {
    double omega = 0.0;
    double alpha = 0.0;
    double beta = 0.0;
    double log_likelihood = 0.0;
    bool converged = false;
    /// False when the ARCH term fails a 5% likelihood-ratio test; the
    /// constant-variance model is then reported (alpha = beta = 0).
    bool arch_significant = false;

    double persistence() const { return alpha + beta; }
};
/// Gaussian QMLE of a GARCH(1,1) on demeaned returns. Needs 500 points.
/// A `start` with positive alpha and beta replaces the default two-point
/// search with a single warm start.
GarchFit garch11_fit(std::span<const double> r, const std::optional<GarchFit>& start = std::nullopt);
double garch11_param_sum(std::span<const double> r);

enum class HillVariant { Classic, BiasCorrected };
/// Tail index of |x| from the top `tail_fraction` order statistics.
/// Needs at least 100 exceedances.
double hill_estimator(std::span<const double> x, double tail_fraction = 0.05,
                      HillVariant variant = HillVariant::BiasCorrected);

/// Two-sample sup distance between empirical CDFs.
double ks_statistic(std::span<const double> a, std::span<const double> b);
/// Distance of the standardized sample from the standard normal.
double ks_normal(std::span<const double> a);

struct ImpactSample {
    Side side = Side::Bid;
    double omega = 0.0;
    double impact = 0.0;
};

/// One sample per order that traded: omega = traded volume / adv and
/// impact = |log(mid_after / mid_before)|, signed by the aggressor side.
/// Orders without a two-sided quote on either side of them are skipped.
std::vector<ImpactSample> impact_samples(std::span<const EventRow> rows, double adv);

struct ImpactBins {
    double omega_min = 1e-6;
    double omega_max = 1e-1;
    int bins_per_decade = 4;

    std::vector<double> edges() const;
};

struct PriceImpactCurve {
    Side side = Side::Bid;
    std::vector<double> edges;        ///< bins + 1 increasing values
    std::vector<double> mean_impact;  ///< NaN for an empty bin
    std::vector<std::size_t> count;

    std::size_t bins() const { return count.size(); }
};

std::pair<PriceImpactCurve, PriceImpactCurve> price_impact_curves(std::span<const ImpactSample> samples,
                                                                  const ImpactBins& bins = {});

enum class Moment { Mean, Std, Ks, Hurst, Gph, Adf, GarchSum, Hill };
inline constexpr std::size_t kMomentCount = 8;
std::string_view to_string(Moment m);

struct Estimate {
    std::optional<double> value;
    double lo = 0.0;
    double hi = 0.0;
    std::string error;  ///< why value is absent
};

struct MomentReport {
    std::array<Estimate, kMomentCount> m;
    std::size_t n_returns = 0;

    const Estimate& operator[](Moment k) const { return m[static_cast<std::size_t>(k)]; }
    Estimate& operator[](Moment k) { return m[static_cast<std::size_t>(k)]; }
};

struct MomentOptions {
    int resamples = 1000;
    double confidence = 0.975;
    std::uint64_t seed = 20240101;
    int adf_lags = 1;
    double hill_tail_fraction = 0.05;
    HillVariant hill_variant = HillVariant::BiasCorrected;
};

/// Runs every estimator on the given returns. KS compares against
/// `reference` when given, otherwise against the standard normal.
/// CIs come from a moving-block bootstrap with block length sqrt(n).
MomentReport moment_report(std::span<const double> returns, const MomentOptions& options = {},
                           std::optional<std::span<const double>> reference = std::nullopt);

}  // namespace marl_lob::facts
