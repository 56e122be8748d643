#include "marl_lob/event_log.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "marl_lob/io.hpp"

namespace marl_lob {

std::string_view to_string(EventKind k) {
    switch (k) {
        case EventKind::LimitPlaced: return "LimitPlaced";
        case EventKind::MarketExec: return "MarketExec";
        case EventKind::Cancel: return "Cancel";
        case EventKind::Trade: return "Trade";
    }
    return "?";
}

std::optional<EventKind> parse_event_kind(std::string_view s) {
    if (s == "LimitPlaced") return EventKind::LimitPlaced;
    if (s == "MarketExec") return EventKind::MarketExec;
    if (s == "Cancel") return EventKind::Cancel;
    if (s == "Trade") return EventKind::Trade;
    return std::nullopt;
}

Exchange::Placement Exchange::place_limit(AgentId agent, Side side, Price price, Volume volume) {
    const Quotes pre = record_ ? book_.quotes() : Quotes{};
    const Seq seq = next_seq_;
    Order order{next_id_, agent, side, price, volume, seq};
    LimitResult res = book_.submit_limit(order);
    ++next_seq_;
    ++next_id_;
    trades_.insert(trades_.end(), res.trades.begin(), res.trades.end());
    if (record_) {
        const Quotes post = book_.quotes();
        events_.push_back(BookEvent{seq, EventKind::LimitPlaced, agent, kNoAgent, side, order.id, price,
                                    volume, pre, post});
        log_trades(res.trades, pre, post);
    }
    return Placement{order.id, std::move(res.trades), res.residual};
}

std::vector<Trade> Exchange::place_market(AgentId agent, Side side, Volume volume) {
    const Quotes pre = record_ ? book_.quotes() : Quotes{};
    const Seq seq = next_seq_;
    const OrderId id = next_id_;
    auto trades = book_.submit_market(agent, side, volume, seq, id);
    ++next_seq_;
    ++next_id_;
    if (trades.empty()) ++failed_market_orders_;
    trades_.insert(trades_.end(), trades.begin(), trades.end());
    if (record_) {
        const Quotes post = book_.quotes();
        std::optional<Price> last;
        if (!trades.empty()) last = trades.back().price;
        events_.push_back(
            BookEvent{seq, EventKind::MarketExec, agent, kNoAgent, side, id, last, volume, pre, post});
        log_trades(trades, pre, post);
    }
    return trades;
}

bool Exchange::cancel(OrderId id) {
    auto resting = book_.find(id);
    if (!resting) return false;
    const Quotes pre = record_ ? book_.quotes() : Quotes{};
    book_.cancel(id);
    if (record_) {
        events_.push_back(BookEvent{next_seq_, EventKind::Cancel, resting->agent, kNoAgent, resting->side,
                                    id, resting->price, resting->volume, pre, book_.quotes()});
    }
    ++next_seq_;
    return true;
}

void Exchange::log_trades(const std::vector<Trade>& trades, const Quotes& pre, const Quotes& post) {
    for (const Trade& t : trades) {
        events_.push_back(BookEvent{t.timestamp, EventKind::Trade, t.aggressor_agent, t.passive_agent,
                                    t.aggressor_side, t.passive_order, t.price, t.volume, pre, post});
    }
}

ReplayResult replay(const std::vector<BookEvent>& events) {
    ReplayResult out;
    // Cancels do not consume a book timestamp, so they are applied directly.
    for (const BookEvent& e : events) {
        switch (e.kind) {
            case EventKind::LimitPlaced: {
                auto res = out.book.submit_limit(Order{e.order_id, e.agent, e.side, *e.price, e.volume, e.seq});
                out.trades.insert(out.trades.end(), res.trades.begin(), res.trades.end());
                break;
            }
            case EventKind::MarketExec: {
                auto trades = out.book.submit_market(e.agent, e.side, e.volume, e.seq, e.order_id);
                out.trades.insert(out.trades.end(), trades.begin(), trades.end());
                break;
            }
            case EventKind::Cancel:
                out.book.cancel(e.order_id);
                break;
            case EventKind::Trade:
                break;
        }
    }
    return out;
}

namespace {

void append_price(std::string& line, const std::optional<Price>& p) {
    if (p) line += std::to_string(p->ticks);
}

}  // namespace

void write_event_log(std::ostream& os, const std::vector<BookEvent>& events) {
    os << kEventLogHeader << '\n';
    std::string line;
    for (const BookEvent& e : events) {
        line.clear();
        line += std::to_string(e.seq);
        line += ',';
        line += to_string(e.kind);
        line += ',';
        line += std::to_string(e.agent);
        line += ',';
        line += side_code(e.side);
        line += ',';
        append_price(line, e.price);
        line += ',';
        line += std::to_string(e.volume);
        line += ',';
        append_price(line, e.post.bid);
        line += ',';
        append_price(line, e.post.ask);
        line += ',';
        line += std::to_string(e.post.bid_volume);
        line += ',';
        line += std::to_string(e.post.ask_volume);
        line += ',';
        line += io::format_optional(e.post.mid());
        line += ',';
        line += io::format_optional(e.post.micro());
        line += '\n';
        os << line;
    }
}

void write_event_log(const std::filesystem::path& path, const std::vector<BookEvent>& events) {
    std::ostringstream ss;
    write_event_log(ss, events);
    io::write_file_atomic(path, ss.str());
}

namespace {

template <class T>
T parse_int(std::string_view s, std::size_t line_no, const char* what) {
    T v{};
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
        throw std::runtime_error("event log line " + std::to_string(line_no) + ": bad " + what + " '" +
                                 std::string(s) + "'");
    return v;
}

std::optional<std::int64_t> parse_opt_int(std::string_view s, std::size_t line_no, const char* what) {
    if (s.empty()) return std::nullopt;
    return parse_int<std::int64_t>(s, line_no, what);
}

std::optional<double> parse_opt_double(std::string_view s, std::size_t line_no, const char* what) {
    if (s.empty()) return std::nullopt;
    double v{};
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
        throw std::runtime_error("event log line " + std::to_string(line_no) + ": bad " + what);
    return v;
}

}  // namespace

std::vector<EventRow> read_event_log(std::istream& is) {
    std::vector<EventRow> rows;
    std::string line;
    std::size_t line_no = 0;
    if (!std::getline(is, line) || io::trim(line) != kEventLogHeader)
        throw std::runtime_error("event log line 1: unexpected header");
    ++line_no;
    while (std::getline(is, line)) {
        ++line_no;
        if (io::trim(line).empty()) continue;
        auto f = io::split(io::trim(line), ',');
        if (f.size() != 12)
            throw std::runtime_error("event log line " + std::to_string(line_no) + ": expected 12 fields");
        EventRow r;
        r.seq = parse_int<Seq>(f[0], line_no, "seq");
        auto kind = parse_event_kind(f[1]);
        if (!kind) throw std::runtime_error("event log line " + std::to_string(line_no) + ": bad kind");
        r.kind = *kind;
        r.agent = parse_int<AgentId>(f[2], line_no, "agent_id");
        if (f[3] != "B" && f[3] != "S")
            throw std::runtime_error("event log line " + std::to_string(line_no) + ": bad side");
        r.side = f[3] == "B" ? Side::Bid : Side::Ask;
        r.price = parse_opt_int(f[4], line_no, "price");
        r.volume = parse_int<Volume>(f[5], line_no, "volume");
        r.best_bid = parse_opt_int(f[6], line_no, "best_bid");
        r.best_ask = parse_opt_int(f[7], line_no, "best_ask");
        r.bid_volume = parse_int<Volume>(f[8], line_no, "bid_vol");
        r.ask_volume = parse_int<Volume>(f[9], line_no, "ask_vol");
        r.mid = parse_opt_double(f[10], line_no, "mid");
        r.micro = parse_opt_double(f[11], line_no, "micro");
        rows.push_back(r);
    }
    return rows;
}

std::vector<EventRow> read_event_log(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open event log " + path.string());
    return read_event_log(is);
}

EventRow to_row(const BookEvent& e) {
    EventRow r;
    r.seq = e.seq;
    r.kind = e.kind;
    r.agent = e.agent;
    r.side = e.side;
    if (e.price) r.price = e.price->ticks;
    r.volume = e.volume;
    if (e.post.bid) r.best_bid = e.post.bid->ticks;
    if (e.post.ask) r.best_ask = e.post.ask->ticks;
    r.bid_volume = e.post.bid_volume;
    r.ask_volume = e.post.ask_volume;
    r.mid = e.post.mid();
    r.micro = e.post.micro();
    return r;
}

std::vector<EventRow> to_rows(const std::vector<BookEvent>& events) {
    std::vector<EventRow> rows;
    rows.reserve(events.size());
    for (const auto& e : events) rows.push_back(to_row(e));
    return rows;
}

}  // namespace marl_lob
