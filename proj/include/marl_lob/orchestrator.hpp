#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "marl_lob/environment.hpp"
#include "marl_lob/event_log.hpp"
#include "marl_lob/execution.hpp"

namespace marl_lob {

/// Parent sizes are expressed in basis points of ADV so that the
/// per-case liquidity budget can be checked exactly.
inline constexpr int kCaseBudgetBp = 600;  // 6% ADV
inline constexpr int kBuiltinCaseCount = 13;

struct RosterEntry {
    ExecutionType type = ExecutionType::I;
    Side side = Side::Bid;
    int count = 1;
    int parent_bp = 0;  ///< per agent, in basis points of ADV

    friend bool operator==(const RosterEntry&, const RosterEntry&) = default;
};

struct ExecutionParams {
    int decision_points = 20;  ///< N children of the TWAP schedule
    double depth_scale = 10.0; ///< ticks per unit of a_delta
    /// Events at the start of each session during which only the
    /// environment acts; parents start after it.
    std::int64_t warmup_events = 1000;
    RewardParams reward;
    QLearningParams learning;
};

struct CaseConfig {
    std::string name;
    int case_id = -1;  ///< -1 for a user-defined roster
    std::vector<RosterEntry> roster;
    EnvironmentParams env;
    ExecutionParams exec;
    int episodes = 100;
    std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};

    int agent_count() const;
    /// Sum over the roster of count x parent_bp.
    int total_parent_bp() const;
    void validate() const;
};

/// Builtin cases 0..12. Throws std::out_of_range listing the valid ids.
CaseConfig load_case(int case_id);
/// Parses "I+", "5II-", "S-" style tokens separated by commas, e.g. "5I+,5I-".
/// Each agent receives an equal share of the 6% ADV budget.
std::vector<RosterEntry> parse_roster(const std::string& spec);
std::string format_roster(const std::vector<RosterEntry>& roster);

/// Mean total traded volume over `sessions` environment-only sessions.
/// Cached per environment parameterisation.
double estimate_adv(const EnvironmentParams& env, int sessions = 20);
/// Canonical text of every parameter, used for hashing.
std::string describe(const EnvironmentParams& env);

struct AgentSpec {
    AgentId id = kNoAgent;
    ExecutionType type = ExecutionType::I;
    Side side = Side::Bid;
    Volume parent = 0;
};

/// A case with ADV resolved into concrete parent volumes.
struct ResolvedCase {
    CaseConfig config;
    double adv = 0.0;
    std::vector<AgentSpec> agents;

    /// Fresh zero tables, one per agent (Type S agents get an empty table).
    std::vector<QTable> initial_tables() const;
};

/// Execution agent ids start here; environment ids are below it.
inline constexpr AgentId kFirstExecutionId = 1000000;

ResolvedCase resolve_case(const CaseConfig& config, double adv);

class EpisodeAborted : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct AgentEpisodeResult {
    AgentSpec spec;
    Volume executed = 0;
    std::vector<double> rewards;
    int skipped_rewards = 0;
    int decisions = 0;
    double episode_return = 0.0;
};

struct ProfitSample {
    Seq event = 0;
    std::array<double, kAgentClassCount> profit{};
};

struct RunArtifacts {
    std::uint64_t seed = 0;
    double epsilon = 0.0;
    std::vector<BookEvent> events;  ///< empty unless recording was requested
    std::vector<Trade> trades;
    std::vector<double> mid_series;    ///< post-event, forward-filled
    std::vector<double> micro_series;  ///< post-event, forward-filled
    std::vector<AgentEpisodeResult> agents;
    std::vector<QTable> tables;
    std::vector<ProfitSample> profit;
    std::size_t failed_market_orders = 0;
    std::size_t ruined_takers = 0;
};

struct EpisodeOptions {
    double epsilon = 0.0;
    bool learn = true;
    bool record_events = false;
};

/// One full session. Identical (case, seed, tables, options) give identical
/// artifacts. Throws EpisodeAborted if the book stays empty.
RunArtifacts run_episode(const ResolvedCase& rc, std::uint64_t seed, std::vector<QTable> tables,
                         const EpisodeOptions& options);

inline constexpr int kUnvisited = -1;

/// Greedy action per state index, kUnvisited for states never visited.
std::vector<int> greedy_policy(const QTable& table);

/// Heat-map grid: 25x25 cells. Row r = (inventory-1)*5 + (spread-1),
/// column c = (time-1)*5 + (volume-1).
using PolicyGrid = std::array<std::array<int, 25>, 25>;
PolicyGrid greedy_policy_export(const QTable& table);

/// Fraction of states whose greedy action differs between two policies,
/// over the states reached by either. Zero when neither reaches any.
double policy_change(const std::vector<int>& before, const std::vector<int>& after);

struct TrainOptions {
    /// Episodes whose full event stream is kept. Default: the final seed cycle.
    std::function<bool(int episode)> record;
    /// Called after each episode.
    std::function<void(int episode, const RunArtifacts&)> on_episode;
};

struct TrainResult {
    std::vector<QTable> tables;
    /// returns[agent][episode]
    std::vector<std::vector<double>> returns;
    /// policy_changes[agent][episode]; episode 0 compares against the all-unvisited policy.
    std::vector<std::vector<double>> policy_changes;
    std::vector<double> epsilons;
    std::vector<std::uint64_t> episode_seeds;
    std::vector<RunArtifacts> recorded;
};

/// Episodes run sequentially over the seed cycle with decaying exploration;
/// every learner owns its table.
TrainResult train(const ResolvedCase& rc, const TrainOptions& options = {});

/// Worker count from MARL_LOB_THREADS, capped by hardware concurrency.
unsigned worker_threads();

}  // namespace marl_lob
