#include "marl_lob/stylized_facts.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <numbers>
#include <numeric>

#include <boost/random/mersenne_twister.hpp>
#include <boost/random/uniform_int_distribution.hpp>
#include <gsl/gsl_errno.h>
#include <gsl/gsl_multifit.h>
#include <gsl/gsl_multimin.h>

namespace marl_lob::facts {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double mean_of(std::span<const double> x) {
    return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

// Population variance.
double variance_of(std::span<const double> x) {
    const double m = mean_of(x);
    double s = 0.0;
    for (double v : x) s += (v - m) * (v - m);
    return s / static_cast<double>(x.size());
}

void require_length(std::span<const double> x, std::size_t n, const char* who) {
    if (x.size() < n)
        throw EstimatorError(std::string(who) + ": need at least " + std::to_string(n) + " points, got " +
                             std::to_string(x.size()));
}

// Ordinary least-squares slope of y on x.
double ols_slope(std::span<const double> x, std::span<const double> y) {
    const double mx = mean_of(x);
    const double my = mean_of(y);
    double sxy = 0.0;
    double sxx = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    if (sxx == 0.0) throw EstimatorError("regression: degenerate regressor");
    return sxy / sxx;
}

// RAII for the GSL handler so estimator errors surface as exceptions.
struct GslQuiet {
    gsl_error_handler_t* old;
    GslQuiet() : old(gsl_set_error_handler_off()) {}
    ~GslQuiet() { gsl_set_error_handler(old); }
};

}  // namespace

double AcfCurve::mean_level() const {
    if (rho.empty()) return kNaN;
    return std::accumulate(rho.begin(), rho.end(), 0.0) / static_cast<double>(rho.size());
}

AcfCurve acf(std::span<const double> x, int max_lag, bool demean) {
    if (max_lag < 1) throw std::invalid_argument("acf: max_lag must be >= 1");
    const auto n = x.size();
    if (n <= static_cast<std::size_t>(max_lag))
        throw EstimatorError("acf: series length must exceed max_lag");
    AcfCurve c;
    c.demeaned = demean;
    c.rho.assign(static_cast<std::size_t>(max_lag), kNaN);

    if (demean) {
        const double m = mean_of(x);
        std::vector<double> d(n);
        for (std::size_t i = 0; i < n; ++i) d[i] = x[i] - m;
        double denom = 0.0;
        for (double v : d) denom += v * v;
        if (denom == 0.0) {
            c.undefined = true;
            return c;
        }
        for (int k = 1; k <= max_lag; ++k) {
            double s = 0.0;
            for (std::size_t t = 0; t + static_cast<std::size_t>(k) < n; ++t) s += d[t] * d[t + static_cast<std::size_t>(k)];
            c.rho[static_cast<std::size_t>(k - 1)] = s / denom;
        }
        return c;
    }

    double e2 = 0.0;
    for (double v : x) e2 += v * v;
    e2 /= static_cast<double>(n);
    if (e2 == 0.0) {
        c.undefined = true;
        return c;
    }
    for (int k = 1; k <= max_lag; ++k) {
        const std::size_t m = n - static_cast<std::size_t>(k);
        double s = 0.0;
        for (std::size_t t = 0; t < m; ++t) s += x[t] * x[t + static_cast<std::size_t>(k)];
        c.rho[static_cast<std::size_t>(k - 1)] = (s / static_cast<double>(m)) / e2;
    }
    return c;
}

std::vector<double> tradesign_series(std::span<const Trade> trades) {
    std::vector<double> out;
    out.reserve(trades.size());
    for (const auto& t : trades) out.push_back(t.aggressor_side == Side::Bid ? 1.0 : -1.0);
    return out;
}

std::vector<double> tradesign_series(std::span<const EventRow> rows) {
    std::vector<double> out;
    for (const auto& r : rows)
        if (r.kind == EventKind::Trade) out.push_back(r.side == Side::Bid ? 1.0 : -1.0);
    return out;
}

std::vector<double> log_returns(std::span<const double> prices) {
    std::vector<double> out;
    if (prices.size() < 2) return out;
    out.reserve(prices.size() - 1);
    for (std::size_t i = 1; i < prices.size(); ++i) {
        if (!(prices[i] > 0 && prices[i - 1] > 0)) throw EstimatorError("log_returns: non-positive price");
        out.push_back(std::log(prices[i] / prices[i - 1]));
    }
    return out;
}

std::vector<double> absolute(std::span<const double> x) {
    std::vector<double> out(x.size());
    std::transform(x.begin(), x.end(), out.begin(), [](double v) { return std::fabs(v); });
    return out;
}

PriceSeries price_series(std::span<const EventRow> rows) {
    PriceSeries s;
    for (const auto& r : rows) {
        if (r.kind == EventKind::Trade) continue;
        if (r.mid) {
            s.mid.push_back(*r.mid);
            s.micro.push_back(*r.micro);
        } else if (!s.mid.empty()) {
            s.mid.push_back(s.mid.back());
            s.micro.push_back(s.micro.back());
        }
    }
    return s;
}

namespace {

struct RsPoint {
    double log_window;
    double log_rs;
    double log_expected;
};

// Expected R/S of iid noise in a window of n points.
double anis_lloyd_peters(std::size_t n) {
    const double nd = static_cast<double>(n);
    double sum = 0.0;
    for (std::size_t i = 1; i < n; ++i) sum += std::sqrt((nd - static_cast<double>(i)) / static_cast<double>(i));
    const double k = n <= 340 ? std::exp(std::lgamma((nd - 1.0) / 2.0) - std::lgamma(nd / 2.0)) / std::sqrt(std::numbers::pi)
                              : 1.0 / std::sqrt(nd * std::numbers::pi / 2.0);
    return (nd - 0.5) / nd * k * sum;
}

std::vector<RsPoint> rescaled_ranges(std::span<const double> x) {
    require_length(x, 256, "hurst");
    std::vector<RsPoint> pts;
    for (std::size_t w = 16; w <= x.size() / 2; w *= 2) {
        double total = 0.0;
        int used = 0;
        for (std::size_t start = 0; start + w <= x.size(); start += w) {
            auto seg = x.subspan(start, w);
            const double m = mean_of(seg);
            double cum = 0.0, lo = 0.0, hi = 0.0, ss = 0.0;
            for (double v : seg) {
                cum += v - m;
                lo = std::min(lo, cum);
                hi = std::max(hi, cum);
                ss += (v - m) * (v - m);
            }
            const double sd = std::sqrt(ss / static_cast<double>(w));
            if (sd == 0.0) continue;
            total += (hi - lo) / sd;
            ++used;
        }
        if (used == 0 || total == 0.0) continue;
        pts.push_back({std::log(static_cast<double>(w)), std::log(total / used), std::log(anis_lloyd_peters(w))});
    }
    if (pts.size() < 2) throw EstimatorError("hurst: series has too little variation");
    return pts;
}

}  // namespace

double hurst_rs_slope(std::span<const double> x) {
    const auto pts = rescaled_ranges(x);
    std::vector<double> lx, ly;
    for (const auto& p : pts) {
        lx.push_back(p.log_window);
        ly.push_back(p.log_rs);
    }
    return ols_slope(lx, ly);
}

double hurst_exponent(std::span<const double> x) {
    const auto pts = rescaled_ranges(x);
    std::vector<double> lx, ly;
    for (const auto& p : pts) {
        lx.push_back(p.log_window);
        ly.push_back(p.log_rs - p.log_expected);
    }
    return 0.5 + ols_slope(lx, ly);
}

double gph_estimate(std::span<const double> x) {
    require_length(x, 512, "gph");
    const std::size_t n = x.size();
    const auto m = static_cast<std::size_t>(std::floor(std::sqrt(static_cast<double>(n))));
    const double mu = mean_of(x);
    std::vector<double> reg, logI;
    reg.reserve(m);
    logI.reserve(m);
    std::vector<double> centred(x.begin(), x.end());
    for (double& v : centred) v -= mu;
    // Goertzel recursion for |sum x_t e^{-i lambda t}|^2, several
    // frequencies per pass to keep the pipeline busy.
    constexpr std::size_t kLanes = 8;
    for (std::size_t j0 = 1; j0 <= m; j0 += kLanes) {
        const std::size_t lanes = std::min(kLanes, m - j0 + 1);
        double c[kLanes], s1[kLanes] = {}, s2[kLanes] = {};
        for (std::size_t l = 0; l < kLanes; ++l)
            c[l] = 2.0 * std::cos(2.0 * std::numbers::pi * static_cast<double>(j0 + std::min(l, lanes - 1)) /
                                  static_cast<double>(n));
        for (double v : centred) {
            for (std::size_t l = 0; l < kLanes; ++l) {
                const double s0 = v + c[l] * s1[l] - s2[l];
                s2[l] = s1[l];
                s1[l] = s0;
            }
        }
        for (std::size_t l = 0; l < lanes; ++l) {
            const double lambda = 2.0 * std::numbers::pi * static_cast<double>(j0 + l) / static_cast<double>(n);
            const double power = s1[l] * s1[l] + s2[l] * s2[l] - c[l] * s1[l] * s2[l];
            const double I = power / (2.0 * std::numbers::pi * static_cast<double>(n));
            if (!(I > 0)) throw EstimatorError("gph: zero periodogram ordinate");
            const double sn = std::sin(lambda / 2.0);
            reg.push_back(std::log(4.0 * sn * sn));
            logI.push_back(std::log(I));
        }
    }
    return -ols_slope(reg, logI);
}

double adf_statistic(std::span<const double> x, int lags) {
    require_length(x, 100, "adf");
    if (lags < 0) throw std::invalid_argument("adf: lags must be >= 0");
    const std::size_t p = static_cast<std::size_t>(lags);
    const std::size_t n = x.size();
    const std::size_t rows = n - 1 - p;
    const std::size_t cols = 2 + p;
    if (variance_of(x) == 0.0) throw EstimatorError("adf: constant series");

    GslQuiet quiet;
    gsl_matrix* X = gsl_matrix_alloc(rows, cols);
    gsl_vector* y = gsl_vector_alloc(rows);
    gsl_vector* c = gsl_vector_alloc(cols);
    gsl_matrix* cov = gsl_matrix_alloc(cols, cols);
    gsl_multifit_linear_workspace* ws = gsl_multifit_linear_alloc(rows, cols);
    for (std::size_t r = 0; r < rows; ++r) {
        const std::size_t t = r + 1 + p;
        gsl_vector_set(y, r, x[t] - x[t - 1]);
        gsl_matrix_set(X, r, 0, 1.0);
        gsl_matrix_set(X, r, 1, x[t - 1]);
        for (std::size_t i = 1; i <= p; ++i) gsl_matrix_set(X, r, 1 + i, x[t - i] - x[t - i - 1]);
    }
    double chisq = 0.0;
    const int status = gsl_multifit_linear(X, y, c, cov, &chisq, ws);
    const double rho = gsl_vector_get(c, 1);
    const double se = std::sqrt(gsl_matrix_get(cov, 1, 1));
    gsl_multifit_linear_free(ws);
    gsl_matrix_free(cov);
    gsl_vector_free(c);
    gsl_vector_free(y);
    gsl_matrix_free(X);
    if (status != GSL_SUCCESS || !(se > 0) || !std::isfinite(rho)) throw EstimatorError("adf: singular regression");
    return rho / se;
}

namespace {

struct GarchData {
    const std::vector<double>* e;
    double var;
};

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }
double logit(double p) { return std::log(p / (1.0 - p)); }

// Gaussian log-likelihood up to a constant.
double garch_loglik(const std::vector<double>& e, double var0, double omega, double alpha, double beta) {
    double h = var0;
    double ll = 0.0;
    for (std::size_t t = 0; t < e.size(); ++t) {
        if (t > 0) h = omega + alpha * e[t - 1] * e[t - 1] + beta * h;
        if (!(h > 0) || !std::isfinite(h)) return -std::numeric_limits<double>::infinity();
        ll -= 0.5 * (std::log(h) + e[t] * e[t] / h);
    }
    return ll;
}

double garch_objective(const gsl_vector* th, void* params) {
    const auto* d = static_cast<const GarchData*>(params);
    const double omega = d->var * std::exp(gsl_vector_get(th, 0));
    const double alpha = sigmoid(gsl_vector_get(th, 1));
    const double beta = sigmoid(gsl_vector_get(th, 2));
    const double ll = garch_loglik(*d->e, d->var, omega, alpha, beta);
    return std::isfinite(ll) ? -ll / static_cast<double>(d->e->size()) : 1e300;
}

// Objective and gradient in the transformed coordinates, one pass.
void garch_fdf(const gsl_vector* th, void* params, double* f, gsl_vector* g) {
    const auto* d = static_cast<const GarchData*>(params);
    const auto& e = *d->e;
    const double omega = d->var * std::exp(gsl_vector_get(th, 0));
    const double alpha = sigmoid(gsl_vector_get(th, 1));
    const double beta = sigmoid(gsl_vector_get(th, 2));
    double h = d->var;
    double dw = 0.0, da = 0.0, db = 0.0;
    double ll = 0.0, gw = 0.0, ga = 0.0, gb = 0.0;
    bool ok = true;
    for (std::size_t t = 0; t < e.size(); ++t) {
        if (t > 0) {
            const double e2 = e[t - 1] * e[t - 1];
            dw = 1.0 + beta * dw;
            da = e2 + beta * da;
            db = h + beta * db;
            h = omega + alpha * e2 + beta * h;
        }
        if (!(h > 0) || !std::isfinite(h)) {
            ok = false;
            break;
        }
        const double q = e[t] * e[t] / h;
        ll -= 0.5 * (std::log(h) + q);
        const double k = -0.5 * (1.0 - q) / h;
        gw += k * dw;
        ga += k * da;
        gb += k * db;
    }
    const double n = static_cast<double>(e.size());
    if (!ok) {
        if (f) *f = 1e300;
        if (g) gsl_vector_set_zero(g);
        return;
    }
    if (f) *f = -ll / n;
    if (g) {
        gsl_vector_set(g, 0, -gw * omega / n);
        gsl_vector_set(g, 1, -ga * alpha * (1.0 - alpha) / n);
        gsl_vector_set(g, 2, -gb * beta * (1.0 - beta) / n);
    }
}

double garch_f(const gsl_vector* th, void* params) {
    double f = 0.0;
    garch_fdf(th, params, &f, nullptr);
    return f;
}

void garch_df(const gsl_vector* th, void* params, gsl_vector* g) { garch_fdf(th, params, nullptr, g); }

// Quasi-Newton refinement from a nearby point; used for bootstrap refits.
GarchFit garch_refine(GarchData& data, double omega_frac, double alpha0, double beta0) {
    gsl_multimin_function_fdf f{&garch_f, &garch_df, &garch_fdf, 3, &data};
    gsl_vector* x = gsl_vector_alloc(3);
    gsl_vector_set(x, 0, std::log(omega_frac));
    gsl_vector_set(x, 1, logit(alpha0));
    gsl_vector_set(x, 2, logit(beta0));
    gsl_multimin_fdfminimizer* s = gsl_multimin_fdfminimizer_alloc(gsl_multimin_fdfminimizer_vector_bfgs2, 3);
    gsl_multimin_fdfminimizer_set(s, &f, x, 0.05, 0.1);
    GarchFit fit;
    for (int iter = 0; iter < 200; ++iter) {
        if (gsl_multimin_fdfminimizer_iterate(s) != GSL_SUCCESS) break;
        if (gsl_multimin_test_gradient(gsl_multimin_fdfminimizer_gradient(s), 1e-6) == GSL_SUCCESS) {
            fit.converged = true;
            break;
        }
    }
    const gsl_vector* best = gsl_multimin_fdfminimizer_x(s);
    fit.omega = data.var * std::exp(gsl_vector_get(best, 0));
    fit.alpha = sigmoid(gsl_vector_get(best, 1));
    fit.beta = sigmoid(gsl_vector_get(best, 2));
    fit.log_likelihood = -gsl_multimin_fdfminimizer_minimum(s) * static_cast<double>(data.e->size());
    gsl_multimin_fdfminimizer_free(s);
    gsl_vector_free(x);
    return fit;
}

GarchFit garch_from_start(GarchData& data, double omega_frac, double alpha0, double beta0) {
    gsl_multimin_function f{&garch_objective, 3, &data};
    gsl_vector* x = gsl_vector_alloc(3);
    gsl_vector_set(x, 0, std::log(omega_frac));
    gsl_vector_set(x, 1, logit(alpha0));
    gsl_vector_set(x, 2, logit(beta0));
    gsl_vector* step = gsl_vector_alloc(3);
    gsl_vector_set_all(step, 0.5);
    gsl_multimin_fminimizer* s = gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, 3);
    gsl_multimin_fminimizer_set(s, &f, x, step);
    GarchFit fit;
    for (int iter = 0; iter < 2000; ++iter) {
        if (gsl_multimin_fminimizer_iterate(s) != GSL_SUCCESS) break;
        if (gsl_multimin_test_size(gsl_multimin_fminimizer_size(s), 1e-7) == GSL_SUCCESS) {
            fit.converged = true;
            break;
        }
    }
    const gsl_vector* best = gsl_multimin_fminimizer_x(s);
    fit.omega = data.var * std::exp(gsl_vector_get(best, 0));
    fit.alpha = sigmoid(gsl_vector_get(best, 1));
    fit.beta = sigmoid(gsl_vector_get(best, 2));
    fit.log_likelihood = -gsl_multimin_fminimizer_minimum(s) * static_cast<double>(data.e->size());
    gsl_multimin_fminimizer_free(s);
    gsl_vector_free(step);
    gsl_vector_free(x);
    return fit;
}

}  // namespace

GarchFit garch11_fit(std::span<const double> r, const std::optional<GarchFit>& start) {
    require_length(r, 500, "garch");
    const double m = mean_of(r);
    std::vector<double> e(r.size());
    for (std::size_t i = 0; i < r.size(); ++i) e[i] = r[i] - m;
    const double var = variance_of(r);
    if (!(var > 0)) throw EstimatorError("garch: constant series");

    GslQuiet quiet;
    GarchData data{&e, var};
    GarchFit best;
    if (start && start->alpha > 0 && start->beta > 0) {
        best = garch_refine(data, start->omega / var, start->alpha, start->beta);
    } else {
        best = garch_from_start(data, 0.05, 0.05, 0.90);
        GarchFit low = garch_from_start(data, 0.8, 0.10, 0.10);
        if (low.log_likelihood > best.log_likelihood) best = low;
    }

    // Likelihood-ratio test of the ARCH term against constant variance.
    const double ll0 = -0.5 * static_cast<double>(e.size()) * (std::log(var) + 1.0);
    best.arch_significant = 2.0 * (best.log_likelihood - ll0) > 3.841458820694124;
    if (!best.arch_significant) {
        best.omega = var;
        best.alpha = 0.0;
        best.beta = 0.0;
        best.log_likelihood = ll0;
    }
    return best;
}

double garch11_param_sum(std::span<const double> r) { return garch11_fit(r).persistence(); }

double hill_estimator(std::span<const double> x, double tail_fraction, HillVariant variant) {
    if (!(tail_fraction > 0 && tail_fraction < 1)) throw std::invalid_argument("hill: tail_fraction must be in (0,1)");
    std::vector<double> a = absolute(x);
    const auto k = static_cast<std::size_t>(std::floor(tail_fraction * static_cast<double>(a.size())));
    if (k < 100) throw EstimatorError("hill: fewer than 100 exceedances");
    std::nth_element(a.begin(), a.begin() + static_cast<std::ptrdiff_t>(k), a.end(), std::greater<>());
    const double threshold = a[k];
    if (!(threshold > 0)) throw EstimatorError("hill: threshold order statistic is zero");
    double s = 0.0;
    for (std::size_t i = 0; i < k; ++i) s += std::log(a[i] / threshold);
    if (!(s > 0)) throw EstimatorError("hill: degenerate tail");
    const double kd = static_cast<double>(k);
    return variant == HillVariant::BiasCorrected ? (kd - 1.0) / s : kd / s;
}

double ks_statistic(std::span<const double> a, std::span<const double> b) {
    if (a.empty() || b.empty()) throw EstimatorError("ks: empty sample");
    std::vector<double> x(a.begin(), a.end()), y(b.begin(), b.end());
    std::sort(x.begin(), x.end());
    std::sort(y.begin(), y.end());
    const double nx = static_cast<double>(x.size()), ny = static_cast<double>(y.size());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < x.size() && j < y.size()) {
        const double v = std::min(x[i], y[j]);
        while (i < x.size() && x[i] == v) ++i;
        while (j < y.size() && y[j] == v) ++j;
        d = std::max(d, std::fabs(static_cast<double>(i) / nx - static_cast<double>(j) / ny));
    }
    return d;
}

double ks_normal(std::span<const double> a) {
    if (a.size() < 2) throw EstimatorError("ks: need at least 2 points");
    const double m = mean_of(a);
    const double sd = std::sqrt(variance_of(a));
    if (!(sd > 0)) throw EstimatorError("ks: constant sample");
    std::vector<double> z(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) z[i] = (a[i] - m) / sd;
    std::sort(z.begin(), z.end());
    const double n = static_cast<double>(z.size());
    double d = 0.0;
    for (std::size_t i = 0; i < z.size(); ++i) {
        const double cdf = 0.5 * std::erfc(-z[i] / std::numbers::sqrt2);
        d = std::max({d, static_cast<double>(i + 1) / n - cdf, cdf - static_cast<double>(i) / n});
    }
    return d;
}

std::vector<ImpactSample> impact_samples(std::span<const EventRow> rows, double adv) {
    if (!(adv > 0)) throw std::invalid_argument("impact: adv must be > 0");
    std::vector<ImpactSample> out;
    std::optional<double> before;
    for (std::size_t i = 0; i < rows.size();) {
        const EventRow& r = rows[i];
        std::size_t j = i + 1;
        Volume traded = 0;
        while (j < rows.size() && rows[j].kind == EventKind::Trade && rows[j].seq == r.seq) traded += rows[j++].volume;
        if (r.kind != EventKind::Trade) {
            if (traded > 0 && before && r.mid && *before > 0 && *r.mid > 0)
                out.push_back({r.side, static_cast<double>(traded) / adv, std::fabs(std::log(*r.mid / *before))});
            before = r.mid;
        }
        i = j;
    }
    return out;
}

std::vector<double> ImpactBins::edges() const {
    if (!(omega_min > 0 && omega_max > omega_min && bins_per_decade >= 1))
        throw std::invalid_argument("impact bins: need 0 < omega_min < omega_max and bins_per_decade >= 1");
    const double lo = std::log10(omega_min), hi = std::log10(omega_max);
    const auto n = static_cast<int>(std::ceil((hi - lo) * bins_per_decade - 1e-9));
    std::vector<double> e;
    for (int i = 0; i <= n; ++i) e.push_back(std::pow(10.0, lo + static_cast<double>(i) / bins_per_decade));
    return e;
}

std::pair<PriceImpactCurve, PriceImpactCurve> price_impact_curves(std::span<const ImpactSample> samples,
                                                                  const ImpactBins& bins) {
    const auto edges = bins.edges();
    const std::size_t nb = edges.size() - 1;
    PriceImpactCurve buy{Side::Bid, edges, std::vector<double>(nb, 0.0), std::vector<std::size_t>(nb, 0)};
    PriceImpactCurve sell{Side::Ask, edges, std::vector<double>(nb, 0.0), std::vector<std::size_t>(nb, 0)};
    for (const auto& s : samples) {
        if (s.omega < edges.front() || s.omega >= edges.back()) continue;
        const auto b = static_cast<std::size_t>(std::upper_bound(edges.begin(), edges.end(), s.omega) - edges.begin() - 1);
        auto& c = s.side == Side::Bid ? buy : sell;
        c.mean_impact[b] += s.impact;
        ++c.count[b];
    }
    for (auto* c : {&buy, &sell})
        for (std::size_t b = 0; b < nb; ++b)
            c->mean_impact[b] = c->count[b] ? c->mean_impact[b] / static_cast<double>(c->count[b]) : kNaN;
    return {buy, sell};
}

std::string_view to_string(Moment m) {
    switch (m) {
        case Moment::Mean: return "Mean";
        case Moment::Std: return "Std";
        case Moment::Ks: return "KS";
        case Moment::Hurst: return "Hurst";
        case Moment::Gph: return "GPH";
        case Moment::Adf: return "ADF";
        case Moment::GarchSum: return "GARCH";
        case Moment::Hill: return "Hill";
    }
    return "?";
}

namespace {

using Estimator = std::function<double(std::span<const double>)>;

std::array<Estimator, kMomentCount> estimators(const MomentOptions& o, std::optional<std::span<const double>> ref) {
    return {
        [](std::span<const double> r) { return mean_of(r); },
        [](std::span<const double> r) { return std::sqrt(variance_of(r)); },
        [ref](std::span<const double> r) { return ref ? ks_statistic(r, *ref) : ks_normal(r); },
        [](std::span<const double> r) { return hurst_exponent(r); },
        [](std::span<const double> r) { return gph_estimate(absolute(r)); },
        [o](std::span<const double> r) { return adf_statistic(r, o.adf_lags); },
        [](std::span<const double> r) { return garch11_param_sum(r); },
        [o](std::span<const double> r) { return hill_estimator(r, o.hill_tail_fraction, o.hill_variant); },
    };
}

double quantile(std::vector<double>& v, double q) {
    std::sort(v.begin(), v.end());
    const double pos = q * static_cast<double>(v.size() - 1);
    const auto i = static_cast<std::size_t>(std::floor(pos));
    const double f = pos - static_cast<double>(i);
    return i + 1 < v.size() ? v[i] * (1.0 - f) + v[i + 1] * f : v[i];
}

}  // namespace

MomentReport moment_report(std::span<const double> returns, const MomentOptions& options,
                           std::optional<std::span<const double>> reference) {
    if (options.resamples < 0) throw std::invalid_argument("moments: resamples must be >= 0");
    if (!(options.confidence > 0 && options.confidence < 1))
        throw std::invalid_argument("moments: confidence must be in (0,1)");
    MomentReport rep;
    rep.n_returns = returns.size();
    const auto est = estimators(options, reference);
    for (std::size_t k = 0; k < kMomentCount; ++k) {
        try {
            if (returns.size() < 2) throw EstimatorError("fewer than 2 returns");
            const double v = est[k](returns);
            if (!std::isfinite(v)) throw EstimatorError("non-finite estimate");
            rep.m[k].value = v;
            rep.m[k].lo = rep.m[k].hi = v;
        } catch (const EstimatorError& e) {
            rep.m[k].error = e.what();
        }
    }
    if (options.resamples == 0 || returns.size() < 2) return rep;

    // Each resampled GARCH fit starts from the previous one; the first
    // from the full-sample optimum.
    auto boot = est;
    if (rep[Moment::GarchSum].value) {
        auto last = std::make_shared<GarchFit>(garch11_fit(returns));
        boot[static_cast<std::size_t>(Moment::GarchSum)] = [last](std::span<const double> r) {
            const GarchFit fit = garch11_fit(r, *last);
            if (fit.converged && fit.arch_significant) *last = fit;
            return fit.persistence();
        };
    }

    const std::size_t n = returns.size();
    const auto block = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(n)))));
    boost::random::mt19937_64 rng(options.seed);
    boost::random::uniform_int_distribution<std::size_t> start(0, n - block);
    std::array<std::vector<double>, kMomentCount> draws;
    std::vector<double> sample(n);
    for (int b = 0; b < options.resamples; ++b) {
        for (std::size_t filled = 0; filled < n;) {
            const std::size_t s = start(rng);
            const std::size_t take = std::min(block, n - filled);
            std::copy_n(returns.begin() + static_cast<std::ptrdiff_t>(s), take,
                        sample.begin() + static_cast<std::ptrdiff_t>(filled));
            filled += take;
        }
        for (std::size_t k = 0; k < kMomentCount; ++k) {
            if (!rep.m[k].value) continue;
            try {
                const double v = boot[k](sample);
                if (std::isfinite(v)) draws[k].push_back(v);
            } catch (const EstimatorError&) {
            }
        }
    }
    const double tail = (1.0 - options.confidence) / 2.0;
    for (std::size_t k = 0; k < kMomentCount; ++k) {
        auto& e = rep.m[k];
        if (!e.value || draws[k].empty()) continue;
        // Percentile bounds, widened to cover the point estimate.
        e.lo = std::min(quantile(draws[k], tail), *e.value);
        e.hi = std::max(quantile(draws[k], 1.0 - tail), *e.value);
    }
    return rep;
}

}  // namespace marl_lob::facts
