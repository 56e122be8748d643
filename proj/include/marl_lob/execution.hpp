#pragma once

#include <array>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "marl_lob/environment.hpp"
#include "marl_lob/order_book.hpp"

namespace marl_lob {

/// S: fixed TWAP benchmark. I: learns MO multiples of TWAP. II: learns MOs and LOs.
enum class ExecutionType : std::uint8_t { S, I, II };
std::string_view to_string(ExecutionType t);

struct ParentOrder {
    AgentId agent = kNoAgent;
    Side side = Side::Bid;
    Volume total = 0;  ///< X0
    Seq horizon = 0;   ///< T0 in events
    Volume executed = 0;

    Volume remaining() const noexcept { return total - executed; }
    bool complete() const noexcept { return executed >= total; }
};

struct TwapSchedule {
    std::vector<Seq> decision_points;
    std::vector<Volume> child_volumes;
};

/// N equally spaced decision points over [0, T0); floor(X0/N) per child with
/// the remainder on the last. Throws std::invalid_argument unless X0 >= N >= 1.
TwapSchedule build_twap_schedule(Volume total, int children, Seq horizon);

inline constexpr int kBucketsPerDimension = 5;
inline constexpr int kStateCount = 625;

/// Bucket boundaries. Each interval is open on the left and closed on the right.
struct StateSpec {
    Volume inventory_total = 0;  ///< X0; inventory buckets are multiples of X0/5
    Seq horizon = 0;             ///< T0; time buckets are multiples of T0/5
    std::array<double, 4> volume_bounds{31, 266, 1453, 5209};
    std::array<double, 4> spread_bounds{1, 2, 3, 7};
};

struct Observation {
    Volume remaining = 0;
    Seq elapsed = 0;
    /// Same-side best volume; absent when that side of the book is empty.
    std::optional<double> volume;
    /// Absent when either side is empty.
    std::optional<double> spread;
};

/// Buckets are 1-based, each in 1..5.
struct DiscreteState {
    int inventory = 1;
    int time = 1;
    int volume = 1;
    int spread = 1;

    int index() const noexcept;
    static DiscreteState from_index(int index);
    friend bool operator==(const DiscreteState&, const DiscreteState&) = default;
};

/// An empty same side maps to volume bucket 1; a one-sided book to spread bucket 5.
DiscreteState discretize_state(const Observation& obs, const StateSpec& spec);

inline constexpr std::array<double, 9> kMarketMultipliers{0, 0.25, 0.5, 0.75, 1, 1.25, 1.5, 1.75, 2};
inline constexpr std::array<double, 2> kDepthMultipliers{0.01, 1};
inline constexpr std::array<double, 3> kRateMultipliers{100, 10, 1};

struct MarketAction {
    double multiplier = 1.0;
};
struct LimitAction {
    double depth = 1.0;  ///< a_delta, scaled by the configured depth scale in ticks
    double rate = 1.0;   ///< a_nu: decisions per session
};
using ExecutionAction = std::variant<MarketAction, LimitAction>;

/// S: 1, I: 9 MO actions, II: 9 MO actions followed by 6 LO actions
/// (depth-major: shallow fast/moderate/slow, deep fast/moderate/slow).
int action_count(ExecutionType type);
ExecutionAction decode_action(ExecutionType type, int index);

/// Dense action-value table with visit counts.
class QTable {
public:
    QTable() = default;
    QTable(int states, int actions);

    int states() const noexcept { return states_; }
    int actions() const noexcept { return actions_; }

    double value(int state, int action) const { return values_[offset(state, action)]; }
    void set(int state, int action, double v) { values_[offset(state, action)] = v; }
    std::span<const double> row(int state) const;
    double max_value(int state) const;
    /// Lowest index among the maximal entries.
    int argmax(int state) const;

    std::uint64_t visits(int state) const { return visits_.at(static_cast<std::size_t>(state)); }
    void visit(int state) { ++visits_.at(static_cast<std::size_t>(state)); }

    friend bool operator==(const QTable&, const QTable&) = default;

private:
    std::size_t offset(int state, int action) const;

    int states_ = 0;
    int actions_ = 0;
    std::vector<double> values_;
    std::vector<std::uint64_t> visits_;
};

/// Uniform action with probability epsilon, otherwise the lowest-index argmax.
int select_action(const QTable& table, int state, double epsilon, Rng& rng);

/// MO of round(a_X * x_i) capped at the remaining inventory; none for a zero volume.
std::optional<MarketIntent> apply_action_type_i(double multiplier, Volume child_volume, const ParentOrder& parent);

struct TypeIIOrder {
    std::variant<std::monostate, MarketIntent, LimitIntent> order;
    /// Events until the agent's next decision.
    Seq next_decision_in = 0;
};

struct TypeIIContext {
    Volume child_volume = 0;
    Seq session_length = 0;
    Seq regular_interval = 0;  ///< used after an MO action
    double depth_scale = 10.0; ///< ticks per unit of a_delta
};

/// LOs rest passively at mid -/+ a_delta * depth_scale (buy/sell), never
/// crossing. nullopt when the mid is absent; the decision is deferred.
std::optional<TypeIIOrder> apply_action_type_ii(const ExecutionAction& action, const Quotes& quotes,
                                                const ParentOrder& parent, const TypeIIContext& ctx);

struct RewardParams {
    double lambda_r = 0.01;
    double gamma_r = 1.0;
};

/// +ln(vwap_all / vwap_excl) for sellers, -ln(...) for buyers.
double slippage(Side side, double vwap_all, double vwap_excluding);
/// (x / v) * lambda_r * exp(gamma_r * t), with v = 0 replaced by one unit.
double penalty(Volume x_remaining, Volume v_n, double t, const RewardParams& params);
double reward_from_vwaps(Side side, double vwap_all, double vwap_excluding, Volume x_remaining, Volume v_n,
                         double t, const RewardParams& params);

/// Reward over the full trade history. Throws std::domain_error when no
/// trade remains after excluding the agent; callers skip that decision.
double compute_reward(std::span<const Trade> trades, AgentId agent, Side side, Volume x_remaining, Volume v_n,
                      double t, const RewardParams& params);

struct QLearningParams {
    double alpha = 0.1;
    double gamma = 1.0;
    double epsilon_initial = 1.0;
    /// Multiplicative decay per episode; absent means reach the floor on the last episode.
    std::optional<double> epsilon_decay;
    double epsilon_floor = 0.05;

    void validate() const;
};

/// Q(s,a) += alpha * (r + gamma * max Q(s') * [!terminal] - Q(s,a)).
void q_update(QTable& table, int state, int action, double reward, int next_state, bool terminal,
              const QLearningParams& params);

double episode_return(std::span<const double> rewards);

/// Exploration rate used for episode `episode` (0-based) of `total`.
double epsilon_for_episode(const QLearningParams& params, int episode, int total);

}  // namespace marl_lob
