#pragma once

#include <array>
#include <optional>
#include <variant>
#include <vector>

#include <boost/random/mersenne_twister.hpp>

#include "marl_lob/order_book.hpp"

namespace marl_lob {

/// Every random draw in a run comes from this engine. Boost's
/// distributions are used on top of it because their output is fixed by
/// the library rather than by the standard library implementation.
using Rng = boost::random::mt19937_64;

enum class AgentClass : std::uint8_t { Fundamentalist, Chartist, LiquidityProvider, Execution };
inline constexpr std::size_t kAgentClassCount = 4;
std::string_view to_string(AgentClass c);

struct EnvironmentParams {
    int n_fundamentalists = 8;
    int n_chartists = 8;
    int n_lps = 6;

    /// Opening reference price in ticks.
    std::int64_t initial_price = 10000;
    /// Log-volatility of each fundamentalist's private value around the opening price.
    double fundamental_value_sigma = 0.01;
    /// Log drift of every private value over one session. Positive values
    /// give the upward-trending base market.
    double fundamental_trend = 0.004;
    double chartist_ewma_lambda = 0.9;

    /// LP quote offset from the same-side best, uniform on [min, max] ticks.
    /// Negative offsets improve the quote (never past the opposite best).
    int lp_depth_min = -1;
    int lp_depth_max = 8;
    int lp_max_live_orders = 40;

    /// Child order sizes: round(max(1, exp(N(log_mean, log_sigma)))).
    double volume_log_mean = 3.0;
    double volume_log_sigma = 0.8;

    double rate_fundamentalist = 1.0;
    double rate_chartist = 1.0;
    double rate_lp = 5.0;
    /// Probability that an LP activation cancels one of its live orders.
    double cancel_rate = 0.15;

    /// Mark-to-market loss (ticks x units) at which a taker is ruined and replaced.
    double taker_wealth_budget = 2.0e6;

    std::int64_t session_events = 50000;
    /// Consecutive events with an empty book after which a session aborts.
    std::int64_t abort_after_empty_events = 2000;
    /// Running class profit is sampled every this many events.
    std::int64_t profit_sample_interval = 100;

    /// Throws std::invalid_argument naming the first bad field.
    void validate() const;
};

/// Cash and inventory of one trader; profit is marked at the mid.
struct Ledger {
    std::int64_t cash = 0;  ///< ticks x units
    Volume inventory = 0;

    void on_fill(Side side, Price price, Volume volume) noexcept {
        inventory += sign(side) * volume;
        cash -= sign(side) * price.ticks * volume;
    }
    double mark(double mid) const noexcept { return static_cast<double>(cash) + static_cast<double>(inventory) * mid; }
};

struct FundamentalistAgent {
    AgentId id = kNoAgent;
    Price private_value;
    Ledger ledger;
};

struct ChartistAgent {
    AgentId id = kNoAgent;
    double ewma_return = 0.0;
    std::optional<double> last_mid;
    Ledger ledger;
};

struct LiquidityProviderAgent {
    AgentId id = kNoAgent;
    std::vector<OrderId> live_orders;
    Ledger ledger;

    void forget(OrderId order);
};

struct MarketIntent {
    Side side = Side::Bid;
    Volume volume = 0;
    friend bool operator==(const MarketIntent&, const MarketIntent&) = default;
};

struct LimitIntent {
    Side side = Side::Bid;
    Price price;
    Volume volume = 0;
    friend bool operator==(const LimitIntent&, const LimitIntent&) = default;
};

struct CancelIntent {
    OrderId order = 0;
    friend bool operator==(const CancelIntent&, const CancelIntent&) = default;
};

using LpIntent = std::variant<std::monostate, LimitIntent, CancelIntent>;

Volume sample_order_volume(const EnvironmentParams& params, Rng& rng);

/// Private value drawn lognormally around the opening price.
Price draw_private_value(const EnvironmentParams& params, Rng& rng);

/// Buys below value, sells above, idles at equality or on a one-sided book.
/// `session_fraction` in [0,1] applies the fundamental trend.
std::optional<MarketIntent> fundamentalist_decide(const FundamentalistAgent& agent, const Quotes& quotes,
                                                  double session_fraction, const EnvironmentParams& params,
                                                  Rng& rng);

/// Folds `latest_return` into the agent's EWMA and trades in its sign.
std::optional<MarketIntent> chartist_decide(ChartistAgent& agent, double latest_return,
                                            const EnvironmentParams& params, Rng& rng);

/// Probability that an LP quotes the ask side: bid_vol / (bid_vol + ask_vol),
/// one half when both are zero.
double lp_ask_probability(const Quotes& quotes);

/// `reference` is used when the chosen side is empty (last mid or opening price).
LpIntent liquidity_provider_decide(const LiquidityProviderAgent& agent, const Quotes& quotes, double reference,
                                   const EnvironmentParams& params, Rng& rng);

struct ScheduledEvent {
    AgentClass agent_class = AgentClass::LiquidityProvider;
    int index = 0;  ///< position within the class
    Seq event = 0;
};

/// Event-time clock: picks a class in proportion to its arrival rate, then
/// an agent uniformly within the class.
class EventScheduler {
public:
    explicit EventScheduler(const EnvironmentParams& params);

    /// Probability of each environment class being selected.
    std::array<double, 3> class_probabilities() const noexcept { return probs_; }
    std::int64_t remaining() const noexcept { return budget_ - next_; }
    Seq now() const noexcept { return next_; }

    /// Consumes one event slot for an environment agent. nullopt once the budget is spent.
    std::optional<ScheduledEvent> next(Rng& rng);
    /// Consumes one event slot for an execution agent. False once the budget is spent.
    bool claim();

private:
    std::array<double, 3> probs_{};
    std::array<int, 3> counts_{};
    std::int64_t budget_;
    Seq next_ = 0;
};

}  // namespace marl_lob
