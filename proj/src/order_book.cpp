#include "marl_lob/order_book.hpp"

#include <stdexcept>

namespace marl_lob {

std::optional<std::int64_t> Quotes::spread() const {
    if (!two_sided()) return std::nullopt;
    return *ask - *bid;
}

std::optional<double> Quotes::mid() const {
    if (!two_sided()) return std::nullopt;
    return 0.5 * (bid->as_double() + ask->as_double());
}

std::optional<double> Quotes::micro() const {
    if (!two_sided()) return std::nullopt;
    const double vb = static_cast<double>(bid_volume);
    const double va = static_cast<double>(ask_volume);
    return (va * bid->as_double() + vb * ask->as_double()) / (vb + va);
}

void LimitOrderBook::accept_timestamp(Seq ts) {
    if (ts <= last_timestamp_)
        throw OrderRejected("timestamp " + std::to_string(ts) + " does not advance past " +
                            std::to_string(last_timestamp_));
    last_timestamp_ = ts;
}

template <class Levels>
Volume LimitOrderBook::match_against(Levels& levels, Side aggressor_side, AgentId agent,
                                     OrderId id, Volume volume, std::optional<Price> limit,
                                     Seq ts, std::vector<Trade>& out) {
    Volume& side_total = aggressor_side == Side::Bid ? ask_volume_ : bid_volume_;
    while (volume > 0 && !levels.empty()) {
        auto level_it = levels.begin();
        const std::int64_t px = level_it->first;
        if (limit) {
            const bool crosses = aggressor_side == Side::Bid ? px <= limit->ticks : px >= limit->ticks;
            if (!crosses) break;
        }
        Level& level = level_it->second;
        while (volume > 0 && !level.queue.empty()) {
            Resting& head = level.queue.front();
            const Volume fill = std::min(volume, head.volume);
            out.push_back(Trade{Price{px}, fill, aggressor_side, agent, head.agent, id, head.id, ts});
            volume -= fill;
            head.volume -= fill;
            level.volume -= fill;
            side_total -= fill;
            if (head.volume == 0) {
                index_.erase(head.id);
                level.queue.pop_front();
            }
        }
        if (level.queue.empty()) levels.erase(level_it);
    }
    return volume;
}

void LimitOrderBook::rest(const Order& order, Volume volume) {
    auto place = [&](auto& levels) {
        Level& level = levels[order.price.ticks];
        level.queue.push_back(Resting{order.id, order.agent, volume, order.timestamp});
        level.volume += volume;
        index_.emplace(order.id, Locator{order.side, order.price.ticks, std::prev(level.queue.end())});
    };
    if (order.side == Side::Bid) {
        place(bids_);
        bid_volume_ += volume;
    } else {
        place(asks_);
        ask_volume_ += volume;
    }
}

LimitResult LimitOrderBook::submit_limit(const Order& order) {
    if (order.volume <= 0) throw OrderRejected("limit order volume must be positive");
    if (order.price.ticks <= 0) throw OrderRejected("limit order price must be positive");
    if (seen_ids_.contains(order.id))
        throw OrderRejected("duplicate order id " + std::to_string(order.id));
    accept_timestamp(order.timestamp);
    seen_ids_.insert(order.id);

    LimitResult result;
    Volume left = order.side == Side::Bid
                      ? match_against(asks_, Side::Bid, order.agent, order.id, order.volume,
                                      order.price, order.timestamp, result.trades)
                      : match_against(bids_, Side::Ask, order.agent, order.id, order.volume,
                                      order.price, order.timestamp, result.trades);
    if (left > 0) rest(order, left);
    result.residual = left;
    return result;
}

std::vector<Trade> LimitOrderBook::submit_market(AgentId agent, Side side, Volume volume,
                                                 Seq timestamp, OrderId id) {
    if (volume <= 0) throw OrderRejected("market order volume must be positive");
    accept_timestamp(timestamp);
    std::vector<Trade> trades;
    if (side == Side::Bid)
        match_against(asks_, Side::Bid, agent, id, volume, std::nullopt, timestamp, trades);
    else
        match_against(bids_, Side::Ask, agent, id, volume, std::nullopt, timestamp, trades);
    return trades;
}

bool LimitOrderBook::cancel(OrderId id) {
    auto found = index_.find(id);
    if (found == index_.end()) return false;
    const Locator loc = found->second;
    auto remove = [&](auto& levels, Volume& side_total) {
        auto level_it = levels.find(loc.price);
        Level& level = level_it->second;
        level.volume -= loc.it->volume;
        side_total -= loc.it->volume;
        level.queue.erase(loc.it);
        if (level.queue.empty()) levels.erase(level_it);
    };
    if (loc.side == Side::Bid)
        remove(bids_, bid_volume_);
    else
        remove(asks_, ask_volume_);
    index_.erase(found);
    return true;
}

std::optional<Price> LimitOrderBook::best(Side s) const {
    if (s == Side::Bid) {
        if (bids_.empty()) return std::nullopt;
        return Price{bids_.begin()->first};
    }
    if (asks_.empty()) return std::nullopt;
    return Price{asks_.begin()->first};
}

Quotes LimitOrderBook::quotes() const {
    Quotes q;
    if (!bids_.empty()) {
        q.bid = Price{bids_.begin()->first};
        q.bid_volume = bids_.begin()->second.volume;
    }
    if (!asks_.empty()) {
        q.ask = Price{asks_.begin()->first};
        q.ask_volume = asks_.begin()->second.volume;
    }
    return q;
}

std::optional<RestingOrderView> LimitOrderBook::find(OrderId id) const {
    auto found = index_.find(id);
    if (found == index_.end()) return std::nullopt;
    const auto& r = *found->second.it;
    return RestingOrderView{r.id, r.agent, found->second.side, Price{found->second.price}, r.volume,
                            r.timestamp};
}

Volume LimitOrderBook::resting_volume(Side s) const noexcept {
    return s == Side::Bid ? bid_volume_ : ask_volume_;
}

std::vector<LevelView> LimitOrderBook::depth(Side s) const {
    std::vector<LevelView> out;
    auto collect = [&](const auto& levels) {
        for (const auto& [px, level] : levels) out.push_back({Price{px}, level.volume, level.queue.size()});
    };
    if (s == Side::Bid)
        collect(bids_);
    else
        collect(asks_);
    return out;
}

std::vector<RestingOrderView> LimitOrderBook::snapshot() const {
    std::vector<RestingOrderView> out;
    out.reserve(index_.size());
    auto collect = [&](const auto& levels, Side side) {
        for (const auto& [px, level] : levels)
            for (const auto& r : level.queue)
                out.push_back({r.id, r.agent, side, Price{px}, r.volume, r.timestamp});
    };
    collect(bids_, Side::Bid);
    collect(asks_, Side::Ask);
    return out;
}

double vwap(std::span<const Trade> trades, std::optional<AgentId> exclude_agent) {
    std::int64_t notional = 0;
    Volume volume = 0;
    for (const Trade& t : trades) {
        if (exclude_agent && (t.aggressor_agent == *exclude_agent || t.passive_agent == *exclude_agent))
            continue;
        notional += t.price.ticks * t.volume;
        volume += t.volume;
    }
    if (volume == 0) throw std::domain_error("vwap: no trades left after exclusion");
    return static_cast<double>(notional) / static_cast<double>(volume);
}

void VwapTracker::add(const Trade& t) {
    const std::int64_t notional = t.price.ticks * t.volume;
    total_.notional += notional;
    total_.volume += t.volume;
    Sums& a = by_agent_[t.aggressor_agent];
    a.notional += notional;
    a.volume += t.volume;
    if (t.passive_agent != t.aggressor_agent) {
        Sums& p = by_agent_[t.passive_agent];
        p.notional += notional;
        p.volume += t.volume;
    }
}

std::optional<double> VwapTracker::all() const {
    if (total_.volume == 0) return std::nullopt;
    return static_cast<double>(total_.notional) / static_cast<double>(total_.volume);
}

std::optional<double> VwapTracker::excluding(AgentId agent) const {
    Sums rest = total_;
    if (auto it = by_agent_.find(agent); it != by_agent_.end()) {
        rest.notional -= it->second.notional;
        rest.volume -= it->second.volume;
    }
    if (rest.volume == 0) return std::nullopt;
    return static_cast<double>(rest.notional) / static_cast<double>(rest.volume);
}

Volume VwapTracker::agent_volume(AgentId agent) const {
    auto it = by_agent_.find(agent);
    return it == by_agent_.end() ? 0 : it->second.volume;
}

}  // namespace marl_lob
