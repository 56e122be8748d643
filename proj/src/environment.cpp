#include "marl_lob/environment.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include <boost/random/bernoulli_distribution.hpp>
#include <boost/random/normal_distribution.hpp>
#include <boost/random/uniform_01.hpp>
#include <boost/random/uniform_int_distribution.hpp>

namespace marl_lob {

std::string_view to_string(AgentClass c) {
    switch (c) {
        case AgentClass::Fundamentalist: return "fundamentalist";
        case AgentClass::Chartist: return "chartist";
        case AgentClass::LiquidityProvider: return "liquidity_provider";
        case AgentClass::Execution: return "execution";
    }
    return "?";
}

void EnvironmentParams::validate() const {
    auto fail = [](const std::string& what) { throw std::invalid_argument("environment: " + what); };
    if (n_fundamentalists < 0 || n_chartists < 0 || n_lps < 0) fail("agent counts must be >= 0");
    if (initial_price <= 0) fail("initial_price must be > 0");
    if (!(fundamental_value_sigma >= 0)) fail("fundamental_value_sigma must be >= 0");
    if (!(chartist_ewma_lambda > 0 && chartist_ewma_lambda < 1)) fail("chartist_ewma_lambda must be in (0,1)");
    if (lp_depth_min > lp_depth_max) fail("lp_depth_min must be <= lp_depth_max");
    if (lp_max_live_orders < 1) fail("lp_max_live_orders must be >= 1");
    if (!(volume_log_sigma >= 0)) fail("volume_log_sigma must be >= 0");
    if (!(rate_fundamentalist > 0 && rate_chartist > 0 && rate_lp > 0)) fail("arrival rates must be > 0");
    if (!(cancel_rate > 0 && cancel_rate < 1)) fail("cancel_rate must be in (0,1)");
    if (!(taker_wealth_budget > 0)) fail("taker_wealth_budget must be > 0");
    if (session_events < 1) fail("session_events must be >= 1");
    if (abort_after_empty_events < 1) fail("abort_after_empty_events must be >= 1");
    if (profit_sample_interval < 1) fail("profit_sample_interval must be >= 1");
}

void LiquidityProviderAgent::forget(OrderId order) {
    auto it = std::find(live_orders.begin(), live_orders.end(), order);
    if (it == live_orders.end()) return;
    *it = live_orders.back();
    live_orders.pop_back();
}

Volume sample_order_volume(const EnvironmentParams& params, Rng& rng) {
    boost::random::normal_distribution<double> normal(params.volume_log_mean, params.volume_log_sigma);
    const double v = std::exp(normal(rng));
    return std::max<Volume>(1, std::llround(v));
}

Price draw_private_value(const EnvironmentParams& params, Rng& rng) {
    boost::random::normal_distribution<double> normal(0.0, params.fundamental_value_sigma);
    const double v = static_cast<double>(params.initial_price) * std::exp(normal(rng));
    return Price{std::max<std::int64_t>(1, std::llround(v))};
}

std::optional<MarketIntent> fundamentalist_decide(const FundamentalistAgent& agent, const Quotes& quotes,
                                                  double session_fraction, const EnvironmentParams& params,
                                                  Rng& rng) {
    auto mid = quotes.mid();
    if (!mid) return std::nullopt;
    const double value = agent.private_value.as_double() * std::exp(params.fundamental_trend * session_fraction);
    if (value == *mid) return std::nullopt;
    return MarketIntent{value > *mid ? Side::Bid : Side::Ask, sample_order_volume(params, rng)};
}

std::optional<MarketIntent> chartist_decide(ChartistAgent& agent, double latest_return,
                                            const EnvironmentParams& params, Rng& rng) {
    const double lambda = params.chartist_ewma_lambda;
    agent.ewma_return = lambda * agent.ewma_return + (1.0 - lambda) * latest_return;
    if (agent.ewma_return == 0.0) return std::nullopt;
    return MarketIntent{agent.ewma_return > 0 ? Side::Bid : Side::Ask, sample_order_volume(params, rng)};
}

double lp_ask_probability(const Quotes& quotes) {
    const Volume total = quotes.bid_volume + quotes.ask_volume;
    if (total == 0) return 0.5;
    return static_cast<double>(quotes.bid_volume) / static_cast<double>(total);
}

LpIntent liquidity_provider_decide(const LiquidityProviderAgent& agent, const Quotes& quotes, double reference,
                                   const EnvironmentParams& params, Rng& rng) {
    const bool at_cap = static_cast<int>(agent.live_orders.size()) >= params.lp_max_live_orders;
    boost::random::bernoulli_distribution<double> cancel_draw(params.cancel_rate);
    if (cancel_draw(rng) || at_cap) {
        if (agent.live_orders.empty()) return std::monostate{};
        boost::random::uniform_int_distribution<std::size_t> pick(0, agent.live_orders.size() - 1);
        return CancelIntent{agent.live_orders[pick(rng)]};
    }

    boost::random::bernoulli_distribution<double> ask_draw(lp_ask_probability(quotes));
    const Side side = ask_draw(rng) ? Side::Ask : Side::Bid;
    boost::random::uniform_int_distribution<int> depth_draw(params.lp_depth_min, params.lp_depth_max);
    const std::int64_t depth = depth_draw(rng);

    std::int64_t px = 0;
    if (side == Side::Bid) {
        if (quotes.bid)
            px = quotes.bid->ticks - depth;
        else
            px = static_cast<std::int64_t>(std::floor(reference)) - std::max<std::int64_t>(depth, 1);
        if (quotes.ask) px = std::min(px, quotes.ask->ticks - 1);
    } else {
        if (quotes.ask)
            px = quotes.ask->ticks + depth;
        else
            px = static_cast<std::int64_t>(std::ceil(reference)) + std::max<std::int64_t>(depth, 1);
        if (quotes.bid) px = std::max(px, quotes.bid->ticks + 1);
    }
    px = std::max<std::int64_t>(px, 1);
    return LimitIntent{side, Price{px}, sample_order_volume(params, rng)};
}

EventScheduler::EventScheduler(const EnvironmentParams& params)
    : counts_{params.n_fundamentalists, params.n_chartists, params.n_lps}, budget_(params.session_events) {
    const std::array<double, 3> rates{params.rate_fundamentalist, params.rate_chartist, params.rate_lp};
    double total = 0.0;
    for (std::size_t i = 0; i < 3; ++i)
        if (counts_[i] > 0) total += rates[i];
    for (std::size_t i = 0; i < 3; ++i) probs_[i] = (counts_[i] > 0 && total > 0) ? rates[i] / total : 0.0;
}

std::optional<ScheduledEvent> EventScheduler::next(Rng& rng) {
    if (next_ >= budget_) return std::nullopt;
    const Seq event = next_++;
    if (counts_[0] + counts_[1] + counts_[2] == 0) return ScheduledEvent{AgentClass::LiquidityProvider, -1, event};
    const double u = boost::random::uniform_01<double>()(rng);
    std::size_t cls = 0;
    double acc = 0.0;
    for (; cls < 3; ++cls) {
        acc += probs_[cls];
        if (u < acc && counts_[cls] > 0) break;
    }
    if (cls == 3) {
        cls = 2;
        while (counts_[cls] == 0) --cls;
    }
    boost::random::uniform_int_distribution<int> pick(0, counts_[cls] - 1);
    return ScheduledEvent{static_cast<AgentClass>(cls), pick(rng), event};
}

bool EventScheduler::claim() {
    if (next_ >= budget_) return false;
    ++next_;
    return true;
}

}  // namespace marl_lob
