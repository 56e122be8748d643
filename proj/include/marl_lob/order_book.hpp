#pragma once

#include <functional>
#include <list>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "marl_lob/types.hpp"

namespace marl_lob {

struct Order {
    OrderId id = 0;
    AgentId agent = kNoAgent;
    Side side = Side::Bid;
    Price price;
    Volume volume = 0;
    Seq timestamp = 0;
};

struct Trade {
    Price price;
    Volume volume = 0;
    Side aggressor_side = Side::Bid;
    AgentId aggressor_agent = kNoAgent;
    AgentId passive_agent = kNoAgent;
    OrderId aggressor_order = 0;
    OrderId passive_order = 0;
    Seq timestamp = 0;

    friend bool operator==(const Trade&, const Trade&) = default;
};

class OrderRejected : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Top-of-book snapshot. Prices are absent when the side is empty.
struct Quotes {
    std::optional<Price> bid;
    std::optional<Price> ask;
    Volume bid_volume = 0;
    Volume ask_volume = 0;

    bool two_sided() const noexcept { return bid.has_value() && ask.has_value(); }
    std::optional<std::int64_t> spread() const;
    std::optional<double> mid() const;
    /// (V_ask * P_bid + V_bid * P_ask) / (V_bid + V_ask)
    std::optional<double> micro() const;
    /// Volume at the best level of the given side (0 if empty).
    Volume volume(Side s) const noexcept { return s == Side::Bid ? bid_volume : ask_volume; }

    friend bool operator==(const Quotes&, const Quotes&) = default;
};

struct LevelView {
    Price price;
    Volume volume = 0;
    std::size_t orders = 0;
    friend bool operator==(const LevelView&, const LevelView&) = default;
};

struct RestingOrderView {
    OrderId id = 0;
    AgentId agent = kNoAgent;
    Side side = Side::Bid;
    Price price;
    Volume volume = 0;
    Seq timestamp = 0;
    friend bool operator==(const RestingOrderView&, const RestingOrderView&) = default;
};

struct LimitResult {
    std::vector<Trade> trades;
    Volume residual = 0;  ///< volume left resting on the book (0 when fully filled)
};

/// Price-time priority continuous double auction for a single instrument.
///
/// Orders cross at the resting order's price. Self-trades are permitted.
/// The book never remains crossed after an operation returns.
class LimitOrderBook {
public:
    /// Matches the order against the opposite side, then rests any residual.
    /// Throws OrderRejected on zero volume, non-positive price, duplicate id
    /// or a timestamp that does not advance.
    LimitResult submit_limit(const Order& order);

    /// Walks the opposite side best price first, FIFO within a level.
    /// An empty opposite side yields no trades. `id` is recorded as the
    /// aggressor order id on each trade.
    std::vector<Trade> submit_market(AgentId agent, Side side, Volume volume, Seq timestamp,
                                     OrderId id = 0);

    /// Removes a resting order. Returns false (and leaves the book untouched)
    /// if the id is not resting.
    bool cancel(OrderId id);

    Quotes quotes() const;
    std::optional<Price> best(Side s) const;
    bool empty(Side s) const noexcept { return s == Side::Bid ? bids_.empty() : asks_.empty(); }

    bool is_resting(OrderId id) const { return index_.contains(id); }
    std::optional<RestingOrderView> find(OrderId id) const;
    Volume resting_volume(Side s) const noexcept;
    std::size_t resting_orders() const noexcept { return index_.size(); }

    /// Levels best-first.
    std::vector<LevelView> depth(Side s) const;
    /// Every resting order, bids best-first then asks best-first, FIFO inside levels.
    std::vector<RestingOrderView> snapshot() const;

    Seq last_timestamp() const noexcept { return last_timestamp_; }

private:
    struct Resting {
        OrderId id;
        AgentId agent;
        Volume volume;
        Seq timestamp;
    };
    using Queue = std::list<Resting>;
    struct Level {
        Queue queue;
        Volume volume = 0;
    };
    using BidLevels = std::map<std::int64_t, Level, std::greater<>>;
    using AskLevels = std::map<std::int64_t, Level, std::less<>>;
    struct Locator {
        Side side;
        std::int64_t price;
        Queue::iterator it;
    };

    void accept_timestamp(Seq ts);
    template <class Levels>
    Volume match_against(Levels& levels, Side aggressor_side, AgentId agent, OrderId id,
                         Volume volume, std::optional<Price> limit, Seq ts,
                         std::vector<Trade>& out);
    void rest(const Order& order, Volume volume);

    BidLevels bids_;
    AskLevels asks_;
    std::unordered_map<OrderId, Locator> index_;
    std::unordered_set<OrderId> seen_ids_;
    Seq last_timestamp_ = -1;
    Volume bid_volume_ = 0;
    Volume ask_volume_ = 0;
};

/// Volume-weighted mean trade price over trades not involving
/// `exclude_agent` on either side. Throws std::domain_error when the
/// filtered set is empty.
double vwap(std::span<const Trade> trades, std::optional<AgentId> exclude_agent = std::nullopt);

/// Running VWAP accumulator with per-agent participation, used when the
/// trade history is too long to rescan at every decision point.
class VwapTracker {
public:
    void add(const Trade& t);
    /// VWAP of all trades; nullopt if none.
    std::optional<double> all() const;
    /// VWAP of trades the agent did not participate in; nullopt if none.
    std::optional<double> excluding(AgentId agent) const;
    Volume agent_volume(AgentId agent) const;

private:
    struct Sums {
        std::int64_t notional = 0;  ///< sum of ticks * volume
        Volume volume = 0;
    };
    Sums total_;
    std::unordered_map<AgentId, Sums> by_agent_;
};

}  // namespace marl_lob
