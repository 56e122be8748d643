#include "marl_lob/execution.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include <boost/random/uniform_01.hpp>
#include <boost/random/uniform_int_distribution.hpp>

namespace marl_lob {

std::string_view to_string(ExecutionType t) {
    switch (t) {
        case ExecutionType::S: return "S";
        case ExecutionType::I: return "I";
        case ExecutionType::II: return "II";
    }
    return "?";
}

TwapSchedule build_twap_schedule(Volume total, int children, Seq horizon) {
    if (children < 1) throw std::invalid_argument("twap: need at least one child");
    if (total < children) throw std::invalid_argument("twap: parent volume smaller than child count");
    if (horizon < 1) throw std::invalid_argument("twap: horizon must be positive");
    TwapSchedule s;
    const Volume base = total / children;
    for (int i = 0; i < children; ++i) {
        s.decision_points.push_back(horizon * i / children);
        s.child_volumes.push_back(base);
    }
    s.child_volumes.back() += total - base * children;
    return s;
}

int DiscreteState::index() const noexcept {
    return (((inventory - 1) * kBucketsPerDimension + (time - 1)) * kBucketsPerDimension + (spread - 1)) *
               kBucketsPerDimension +
           (volume - 1);
}

DiscreteState DiscreteState::from_index(int index) {
    if (index < 0 || index >= kStateCount) throw std::out_of_range("state index");
    DiscreteState s;
    s.volume = index % 5 + 1;
    index /= 5;
    s.spread = index % 5 + 1;
    index /= 5;
    s.time = index % 5 + 1;
    s.inventory = index / 5 + 1;
    return s;
}

namespace {

// Smallest k in 1..5 with value <= k * total / 5, evaluated in integers.
int multiple_bucket(std::int64_t value, std::int64_t total) {
    if (total <= 0) return 1;
    for (int k = 1; k < kBucketsPerDimension; ++k)
        if (value * kBucketsPerDimension <= k * total) return k;
    return kBucketsPerDimension;
}

int bound_bucket(double value, const std::array<double, 4>& bounds) {
    for (std::size_t k = 0; k < bounds.size(); ++k)
        if (value <= bounds[k]) return static_cast<int>(k) + 1;
    return kBucketsPerDimension;
}

}  // namespace

DiscreteState discretize_state(const Observation& obs, const StateSpec& spec) {
    DiscreteState s;
    s.inventory = multiple_bucket(std::max<Volume>(obs.remaining, 0), spec.inventory_total);
    s.time = multiple_bucket(std::max<Seq>(obs.elapsed, 0), spec.horizon);
    s.volume = obs.volume ? bound_bucket(*obs.volume, spec.volume_bounds) : 1;
    s.spread = obs.spread ? bound_bucket(*obs.spread, spec.spread_bounds) : kBucketsPerDimension;
    return s;
}

int action_count(ExecutionType type) {
    switch (type) {
        case ExecutionType::S: return 1;
        case ExecutionType::I: return static_cast<int>(kMarketMultipliers.size());
        case ExecutionType::II:
            return static_cast<int>(kMarketMultipliers.size() + kDepthMultipliers.size() * kRateMultipliers.size());
    }
    return 0;
}

ExecutionAction decode_action(ExecutionType type, int index) {
    if (index < 0 || index >= action_count(type)) throw std::out_of_range("action index");
    if (type == ExecutionType::S) return MarketAction{1.0};
    const int n_mo = static_cast<int>(kMarketMultipliers.size());
    if (index < n_mo) return MarketAction{kMarketMultipliers[static_cast<std::size_t>(index)]};
    const int lo = index - n_mo;
    const auto n_rates = static_cast<int>(kRateMultipliers.size());
    return LimitAction{kDepthMultipliers[static_cast<std::size_t>(lo / n_rates)],
                       kRateMultipliers[static_cast<std::size_t>(lo % n_rates)]};
}

QTable::QTable(int states, int actions)
    : states_(states),
      actions_(actions),
      values_(static_cast<std::size_t>(states) * static_cast<std::size_t>(actions), 0.0),
      visits_(static_cast<std::size_t>(states), 0) {
    if (states < 1 || actions < 1) throw std::invalid_argument("QTable: empty dimensions");
}

std::size_t QTable::offset(int state, int action) const {
    if (state < 0 || state >= states_ || action < 0 || action >= actions_)
        throw std::out_of_range("QTable index");
    return static_cast<std::size_t>(state) * static_cast<std::size_t>(actions_) + static_cast<std::size_t>(action);
}

std::span<const double> QTable::row(int state) const {
    return std::span<const double>(values_).subspan(offset(state, 0), static_cast<std::size_t>(actions_));
}

double QTable::max_value(int state) const {
    auto r = row(state);
    return *std::max_element(r.begin(), r.end());
}

int QTable::argmax(int state) const {
    auto r = row(state);
    return static_cast<int>(std::max_element(r.begin(), r.end()) - r.begin());
}

int select_action(const QTable& table, int state, double epsilon, Rng& rng) {
    if (!(epsilon >= 0.0 && epsilon <= 1.0)) throw std::invalid_argument("epsilon must be in [0,1]");
    if (epsilon > 0.0 && boost::random::uniform_01<double>()(rng) < epsilon) {
        boost::random::uniform_int_distribution<int> pick(0, table.actions() - 1);
        return pick(rng);
    }
    return table.argmax(state);
}

std::optional<MarketIntent> apply_action_type_i(double multiplier, Volume child_volume, const ParentOrder& parent) {
    const Volume wanted = std::llround(multiplier * static_cast<double>(child_volume));
    const Volume volume = std::min(wanted, parent.remaining());
    if (volume <= 0) return std::nullopt;
    return MarketIntent{parent.side, volume};
}

std::optional<TypeIIOrder> apply_action_type_ii(const ExecutionAction& action, const Quotes& quotes,
                                                const ParentOrder& parent, const TypeIIContext& ctx) {
    if (const auto* mo = std::get_if<MarketAction>(&action)) {
        TypeIIOrder out;
        out.next_decision_in = std::max<Seq>(ctx.regular_interval, 1);
        if (auto intent = apply_action_type_i(mo->multiplier, ctx.child_volume, parent)) out.order = *intent;
        return out;
    }
    const auto& lo = std::get<LimitAction>(action);
    auto mid = quotes.mid();
    if (!mid) return std::nullopt;

    TypeIIOrder out;
    out.next_decision_in =
        std::max<Seq>(1, static_cast<Seq>(std::llround(static_cast<double>(ctx.session_length) / lo.rate)));
    const Volume volume = std::min(ctx.child_volume, parent.remaining());
    if (volume <= 0) return out;
    const double offset = lo.depth * ctx.depth_scale;
    std::int64_t px = 0;
    if (parent.side == Side::Bid) {
        px = static_cast<std::int64_t>(std::floor(*mid - offset));
        px = std::min(px, quotes.ask->ticks - 1);
    } else {
        px = static_cast<std::int64_t>(std::ceil(*mid + offset));
        px = std::max(px, quotes.bid->ticks + 1);
    }
    out.order = LimitIntent{parent.side, Price{std::max<std::int64_t>(px, 1)}, volume};
    return out;
}

double slippage(Side side, double vwap_all, double vwap_excluding) {
    const double s = std::log(vwap_all / vwap_excluding);
    return side == Side::Ask ? s : -s;
}

double penalty(Volume x_remaining, Volume v_n, double t, const RewardParams& params) {
    const double v = static_cast<double>(v_n > 0 ? v_n : 1);
    return (static_cast<double>(x_remaining) / v) * params.lambda_r * std::exp(params.gamma_r * t);
}

double reward_from_vwaps(Side side, double vwap_all, double vwap_excluding, Volume x_remaining, Volume v_n,
                         double t, const RewardParams& params) {
    return slippage(side, vwap_all, vwap_excluding) - penalty(x_remaining, v_n, t, params);
}

double compute_reward(std::span<const Trade> trades, AgentId agent, Side side, Volume x_remaining, Volume v_n,
                      double t, const RewardParams& params) {
    const double excl = vwap(trades, agent);
    const double all = vwap(trades);
    return reward_from_vwaps(side, all, excl, x_remaining, v_n, t, params);
}

void QLearningParams::validate() const {
    if (!(alpha > 0 && alpha <= 1)) throw std::invalid_argument("learning: alpha must be in (0,1]");
    if (!(gamma >= 0 && gamma <= 1)) throw std::invalid_argument("learning: gamma must be in [0,1]");
    if (!(epsilon_initial >= 0 && epsilon_initial <= 1))
        throw std::invalid_argument("learning: epsilon_initial must be in [0,1]");
    if (!(epsilon_floor >= 0 && epsilon_floor <= 1))
        throw std::invalid_argument("learning: epsilon_floor must be in [0,1]");
    if (epsilon_decay && !(*epsilon_decay > 0 && *epsilon_decay <= 1))
        throw std::invalid_argument("learning: epsilon_decay must be in (0,1]");
}

void q_update(QTable& table, int state, int action, double reward, int next_state, bool terminal,
              const QLearningParams& params) {
    const double bootstrap = terminal ? 0.0 : params.gamma * table.max_value(next_state);
    const double q = table.value(state, action);
    table.set(state, action, q + params.alpha * (reward + bootstrap - q));
}

double episode_return(std::span<const double> rewards) {
    return std::accumulate(rewards.begin(), rewards.end(), 0.0);
}

double epsilon_for_episode(const QLearningParams& params, int episode, int total) {
    double decay = 1.0;
    if (params.epsilon_decay) {
        decay = *params.epsilon_decay;
    } else if (total > 1 && params.epsilon_initial > 0 && params.epsilon_floor > 0 &&
               params.epsilon_floor < params.epsilon_initial) {
        decay = std::pow(params.epsilon_floor / params.epsilon_initial, 1.0 / (total - 1));
    }
    return std::max(params.epsilon_floor, params.epsilon_initial * std::pow(decay, episode));
}

}  // namespace marl_lob
