#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "marl_lob/order_book.hpp"

namespace marl_lob {

enum class EventKind : std::uint8_t { LimitPlaced, MarketExec, Cancel, Trade };

std::string_view to_string(EventKind k);
std::optional<EventKind> parse_event_kind(std::string_view s);

/// One row of the book's totally ordered event stream.
///
/// Action events (LimitPlaced, MarketExec, Cancel) carry the original
/// request so the stream can be replayed; Trade events follow the action
/// that produced them and share its seq.
struct BookEvent {
    Seq seq = 0;
    EventKind kind = EventKind::LimitPlaced;
    AgentId agent = kNoAgent;
    AgentId counterparty = kNoAgent;  ///< passive side of a Trade
    Side side = Side::Bid;
    OrderId order_id = 0;
    std::optional<Price> price;
    Volume volume = 0;
    Quotes pre;
    Quotes post;

    friend bool operator==(const BookEvent&, const BookEvent&) = default;
};

/// Book wrapper that assigns ids and sequence numbers and records the
/// event stream.
class Exchange {
public:
    explicit Exchange(bool record_events = true) : record_(record_events) {}

    struct Placement {
        OrderId id = 0;
        std::vector<Trade> trades;
        Volume residual = 0;
    };

    Placement place_limit(AgentId agent, Side side, Price price, Volume volume);
    /// An empty opposite side is logged as a MarketExec with no trades.
    std::vector<Trade> place_market(AgentId agent, Side side, Volume volume);
    bool cancel(OrderId id);

    const LimitOrderBook& book() const noexcept { return book_; }
    Quotes quotes() const { return book_.quotes(); }
    const std::vector<BookEvent>& events() const noexcept { return events_; }
    const std::vector<Trade>& trades() const noexcept { return trades_; }
    Seq next_seq() const noexcept { return next_seq_; }
    std::size_t failed_market_orders() const noexcept { return failed_market_orders_; }

private:
    void log_trades(const std::vector<Trade>& trades, const Quotes& pre, const Quotes& post);

    LimitOrderBook book_;
    bool record_;
    Seq next_seq_ = 0;
    OrderId next_id_ = 1;
    std::size_t failed_market_orders_ = 0;
    std::vector<BookEvent> events_;
    std::vector<Trade> trades_;
};

/// Rebuilds a book from the action events of a stream. Returns the book
/// and the trades the replay produced.
struct ReplayResult {
    LimitOrderBook book;
    std::vector<Trade> trades;
};
ReplayResult replay(const std::vector<BookEvent>& events);

// CSV columns:
// seq,kind,agent_id,side,price,volume,best_bid,best_ask,bid_vol,ask_vol,mid,micro
// Quote columns are post-event. Absent values are empty fields.
inline constexpr const char* kEventLogHeader =
    "seq,kind,agent_id,side,price,volume,best_bid,best_ask,bid_vol,ask_vol,mid,micro";

void write_event_log(std::ostream& os, const std::vector<BookEvent>& events);
void write_event_log(const std::filesystem::path& path, const std::vector<BookEvent>& events);

/// Parsed CSV row. The CSV does not carry order ids or counterparties.
struct EventRow {
    Seq seq = 0;
    EventKind kind = EventKind::LimitPlaced;
    AgentId agent = kNoAgent;
    Side side = Side::Bid;
    std::optional<std::int64_t> price;
    Volume volume = 0;
    std::optional<std::int64_t> best_bid;
    std::optional<std::int64_t> best_ask;
    Volume bid_volume = 0;
    Volume ask_volume = 0;
    std::optional<double> mid;
    std::optional<double> micro;
};

/// Throws std::runtime_error naming the line on malformed input.
std::vector<EventRow> read_event_log(std::istream& is);
std::vector<EventRow> read_event_log(const std::filesystem::path& path);

/// The row an event would serialize to.
EventRow to_row(const BookEvent& e);
std::vector<EventRow> to_rows(const std::vector<BookEvent>& events);

}  // namespace marl_lob
