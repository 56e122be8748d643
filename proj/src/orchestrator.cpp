#include "marl_lob/orchestrator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "marl_lob/io.hpp"

namespace marl_lob {

int CaseConfig::agent_count() const {
    int n = 0;
    for (const auto& e : roster) n += e.count;
    return n;
}

int CaseConfig::total_parent_bp() const {
    int bp = 0;
    for (const auto& e : roster) bp += e.count * e.parent_bp;
    return bp;
}

void CaseConfig::validate() const {
    env.validate();
    exec.learning.validate();
    if (episodes < 1) throw std::invalid_argument("episodes must be >= 1");
    if (seeds.empty()) throw std::invalid_argument("seed list must not be empty");
    if (exec.decision_points < 1) throw std::invalid_argument("decision_points must be >= 1");
    if (!(exec.depth_scale > 0)) throw std::invalid_argument("depth_scale must be > 0");
    if (exec.warmup_events < 0 || exec.warmup_events >= env.session_events)
        throw std::invalid_argument("warmup_events must be in [0, session_events)");
    if (!(exec.reward.lambda_r >= 0 && exec.reward.gamma_r >= 0))
        throw std::invalid_argument("reward parameters must be >= 0");
    for (const auto& e : roster) {
        if (e.count < 1) throw std::invalid_argument("roster counts must be >= 1");
        if (e.parent_bp < 1) throw std::invalid_argument("roster parent sizes must be positive");
    }
}

namespace {

RosterEntry entry(ExecutionType t, Side s, int count, int agents_in_case) {
    return RosterEntry{t, s, count, kCaseBudgetBp / agents_in_case};
}

constexpr Side kBuy = Side::Bid;
constexpr Side kSell = Side::Ask;

}  // namespace

CaseConfig load_case(int case_id) {
    using T = ExecutionType;
    CaseConfig c;
    c.case_id = case_id;
    c.name = "case" + std::to_string(case_id);
    switch (case_id) {
        case 0: break;
        case 1: c.roster = {entry(T::S, kSell, 1, 1)}; break;
        case 2: c.roster = {entry(T::S, kBuy, 5, 5)}; break;
        case 3: c.roster = {entry(T::I, kBuy, 1, 1)}; break;
        case 4: c.roster = {entry(T::I, kSell, 1, 1)}; break;
        case 5: c.roster = {entry(T::I, kBuy, 1, 2), entry(T::I, kSell, 1, 2)}; break;
        case 6: c.roster = {entry(T::II, kBuy, 1, 1)}; break;
        case 7: c.roster = {entry(T::II, kBuy, 1, 2), entry(T::II, kSell, 1, 2)}; break;
        case 8: c.roster = {entry(T::II, kBuy, 1, 2), entry(T::I, kSell, 1, 2)}; break;
        case 9: c.roster = {entry(T::I, kSell, 5, 5)}; break;
        case 10: c.roster = {entry(T::II, kBuy, 5, 5)}; break;
        case 11: c.roster = {entry(T::I, kBuy, 5, 10), entry(T::I, kSell, 5, 10)}; break;
        case 12: c.roster = {entry(T::II, kBuy, 5, 10), entry(T::II, kSell, 5, 10)}; break;
        default:
            throw std::out_of_range("unknown case " + std::to_string(case_id) + "; valid cases are 0..12");
    }
    return c;
}

std::vector<RosterEntry> parse_roster(const std::string& spec) {
    std::vector<RosterEntry> out;
    int total = 0;
    for (auto raw : io::split(spec, ',')) {
        auto tok = io::trim(raw);
        if (tok.empty()) continue;
        std::size_t pos = 0;
        int count = 0;
        while (pos < tok.size() && std::isdigit(static_cast<unsigned char>(tok[pos]))) {
            count = count * 10 + (tok[pos] - '0');
            ++pos;
        }
        if (pos == 0) count = 1;
        if (count < 1) throw std::invalid_argument("roster token '" + std::string(tok) + "': count must be >= 1");
        auto rest = tok.substr(pos);
        if (rest.size() < 2) throw std::invalid_argument("roster token '" + std::string(tok) + "' is incomplete");
        const char sign_char = rest.back();
        auto type_str = rest.substr(0, rest.size() - 1);
        RosterEntry e;
        if (type_str == "S")
            e.type = ExecutionType::S;
        else if (type_str == "I")
            e.type = ExecutionType::I;
        else if (type_str == "II")
            e.type = ExecutionType::II;
        else
            throw std::invalid_argument("roster token '" + std::string(tok) + "': type must be S, I or II");
        if (sign_char == '+')
            e.side = Side::Bid;
        else if (sign_char == '-')
            e.side = Side::Ask;
        else
            throw std::invalid_argument("roster token '" + std::string(tok) + "': side must be + or -");
        e.count = count;
        total += count;
        out.push_back(e);
    }
    if (total > 0) {
        if (kCaseBudgetBp % total != 0)
            throw std::invalid_argument("roster of " + std::to_string(total) +
                                        " agents cannot split 6% ADV into whole basis points");
        for (auto& e : out) e.parent_bp = kCaseBudgetBp / total;
    }
    return out;
}

std::string format_roster(const std::vector<RosterEntry>& roster) {
    std::string s;
    for (const auto& e : roster) {
        if (!s.empty()) s += ',';
        if (e.count != 1) s += std::to_string(e.count);
        s += to_string(e.type);
        s += e.side == Side::Bid ? '+' : '-';
    }
    return s;
}

std::string describe(const EnvironmentParams& p) {
    std::ostringstream ss;
    ss << "n_fundamentalists=" << p.n_fundamentalists << ";n_chartists=" << p.n_chartists
       << ";n_lps=" << p.n_lps << ";initial_price=" << p.initial_price
       << ";fundamental_value_sigma=" << io::format_double(p.fundamental_value_sigma)
       << ";fundamental_trend=" << io::format_double(p.fundamental_trend)
       << ";chartist_ewma_lambda=" << io::format_double(p.chartist_ewma_lambda)
       << ";lp_depth_min=" << p.lp_depth_min << ";lp_depth_max=" << p.lp_depth_max
       << ";lp_max_live_orders=" << p.lp_max_live_orders
       << ";volume_log_mean=" << io::format_double(p.volume_log_mean)
       << ";volume_log_sigma=" << io::format_double(p.volume_log_sigma)
       << ";rate_fundamentalist=" << io::format_double(p.rate_fundamentalist)
       << ";rate_chartist=" << io::format_double(p.rate_chartist)
       << ";rate_lp=" << io::format_double(p.rate_lp) << ";cancel_rate=" << io::format_double(p.cancel_rate)
       << ";taker_wealth_budget=" << io::format_double(p.taker_wealth_budget)
       << ";session_events=" << p.session_events << ";abort_after_empty_events=" << p.abort_after_empty_events
       << ";profit_sample_interval=" << p.profit_sample_interval;
    return ss.str();
}

unsigned worker_threads() {
    unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("MARL_LOB_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v >= 1) return std::min<unsigned>(static_cast<unsigned>(v), hw);
    }
    return hw;
}

namespace {

template <class Fn>
void parallel_for(std::size_t n, Fn&& fn) {
    const unsigned threads = std::min<unsigned>(worker_threads(), static_cast<unsigned>(std::max<std::size_t>(n, 1)));
    if (threads <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(threads);
    for (unsigned w = 0; w < threads; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (std::size_t i = w; i < n; i += threads) fn(i);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

}  // namespace

double estimate_adv(const EnvironmentParams& env, int sessions) {
    static std::mutex mu;
    static std::map<std::string, double> cache;
    const std::string key = describe(env) + ";sessions=" + std::to_string(sessions);
    {
        std::lock_guard lock(mu);
        if (auto it = cache.find(key); it != cache.end()) return it->second;
    }
    CaseConfig base = load_case(0);
    base.env = env;
    ResolvedCase rc{base, 0.0, {}};
    std::vector<double> volumes(static_cast<std::size_t>(sessions), 0.0);
    parallel_for(volumes.size(), [&](std::size_t i) {
        auto art = run_episode(rc, 0xadf00 + i, {}, EpisodeOptions{0.0, false, false});
        Volume v = 0;
        for (const auto& t : art.trades) v += t.volume;
        volumes[i] = static_cast<double>(v);
    });
    double sum = 0.0;
    for (double v : volumes) sum += v;
    const double adv = sum / static_cast<double>(std::max(sessions, 1));
    std::lock_guard lock(mu);
    cache.emplace(key, adv);
    return adv;
}

ResolvedCase resolve_case(const CaseConfig& config, double adv) {
    config.validate();
    ResolvedCase rc{config, adv, {}};
    AgentId next = kFirstExecutionId;
    for (const auto& e : config.roster) {
        const Volume parent =
            std::max<Volume>(1, std::llround(adv * static_cast<double>(e.parent_bp) / 10000.0));
        for (int k = 0; k < e.count; ++k) rc.agents.push_back(AgentSpec{next++, e.type, e.side, parent});
    }
    return rc;
}

std::vector<QTable> ResolvedCase::initial_tables() const {
    std::vector<QTable> tables;
    for (const auto& a : agents) {
        if (a.type == ExecutionType::S)
            tables.emplace_back();
        else
            tables.emplace_back(kStateCount, action_count(a.type));
    }
    return tables;
}

namespace {

constexpr Seq kNever = std::numeric_limits<Seq>::max();

struct Runner {
    AgentSpec spec;
    ParentOrder parent;
    TwapSchedule schedule;
    StateSpec state_spec;
    std::size_t child = 0;
    Seq next_decision = 0;
    std::optional<int> prev_state;
    int prev_action = 0;
    Volume order_fill = 0;
    std::optional<OrderId> working_order;
    Ledger ledger;
    AgentEpisodeResult result;
    bool done = false;

    Volume child_volume() const {
        return schedule.child_volumes[std::min(child, schedule.child_volumes.size() - 1)];
    }
};

struct Registry {
    AgentClass cls;
    int index;
};

class Episode {
public:
    Episode(const ResolvedCase& rc, std::uint64_t seed, std::vector<QTable> tables, const EpisodeOptions& options)
        : rc_(rc),
          env_(rc.config.env),
          exec_(rc.config.exec),
          options_(options),
          exchange_(options.record_events),
          scheduler_(env_),
          rng_(seed),
          explore_(seed ^ 0x9e3779b97f4a7c15ULL),
          reference_(static_cast<double>(env_.initial_price)) {
        art_.seed = seed;
        art_.epsilon = options.epsilon;
        if (tables.empty()) tables = rc.initial_tables();
        if (tables.size() != rc.agents.size()) throw std::invalid_argument("one table per execution agent required");
        tables_ = std::move(tables);
        spawn_environment();
        spawn_runners();
    }

    RunArtifacts run() {
        while (scheduler_.remaining() > 0) {
            const Seq now = scheduler_.now();
            if (Runner* r = due_runner(now)) {
                scheduler_.claim();
                decide(*r, now);
            } else {
                auto ev = scheduler_.next(rng_);
                if (ev->index >= 0) act(*ev);
            }
            after_event(now);
        }
        finish();
        return std::move(art_);
    }

private:
    AgentId new_id(AgentClass cls, int index) {
        const auto id = static_cast<AgentId>(registry_.size());
        registry_.push_back(Registry{cls, index});
        return id;
    }

    void spawn_environment() {
        for (int i = 0; i < env_.n_fundamentalists; ++i) {
            FundamentalistAgent a;
            a.id = new_id(AgentClass::Fundamentalist, i);
            a.private_value = draw_private_value(env_, rng_);
            funds_.push_back(a);
        }
        for (int i = 0; i < env_.n_chartists; ++i) {
            ChartistAgent a;
            a.id = new_id(AgentClass::Chartist, i);
            charts_.push_back(a);
        }
        for (int i = 0; i < env_.n_lps; ++i) {
            LiquidityProviderAgent a;
            a.id = new_id(AgentClass::LiquidityProvider, i);
            lps_.push_back(a);
        }
    }

    void spawn_runners() {
        const Seq start = exec_.warmup_events;
        const Seq horizon = env_.session_events - start;
        for (const auto& spec : rc_.agents) {
            Runner r;
            r.spec = spec;
            r.parent = ParentOrder{spec.id, spec.side, spec.parent, horizon, 0};
            const int children = static_cast<int>(std::min<Volume>(exec_.decision_points, spec.parent));
            r.schedule = build_twap_schedule(spec.parent, children, horizon);
            r.state_spec = StateSpec{spec.parent, horizon};
            r.next_decision = start + r.schedule.decision_points.front();
            r.result.spec = spec;
            runners_.push_back(std::move(r));
        }
    }

    Runner* due_runner(Seq now) {
        for (auto& r : runners_)
            if (!r.done && r.next_decision <= now) return &r;
        return nullptr;
    }

    Runner* runner_for(AgentId id) {
        if (id < kFirstExecutionId) return nullptr;
        const auto idx = static_cast<std::size_t>(id - kFirstExecutionId);
        return idx < runners_.size() ? &runners_[idx] : nullptr;
    }

    Ledger* ledger_for(AgentId id) {
        if (Runner* r = runner_for(id)) return &r->ledger;
        if (id < 0 || static_cast<std::size_t>(id) >= registry_.size()) return nullptr;
        const auto& reg = registry_[static_cast<std::size_t>(id)];
        switch (reg.cls) {
            case AgentClass::Fundamentalist: return &funds_[static_cast<std::size_t>(reg.index)].ledger;
            case AgentClass::Chartist: return &charts_[static_cast<std::size_t>(reg.index)].ledger;
            case AgentClass::LiquidityProvider: return &lps_[static_cast<std::size_t>(reg.index)].ledger;
            case AgentClass::Execution: return nullptr;
        }
        return nullptr;
    }

    bool current_agent(AgentId id) const {
        if (id < 0 || static_cast<std::size_t>(id) >= registry_.size()) return false;
        const auto& reg = registry_[static_cast<std::size_t>(id)];
        switch (reg.cls) {
            case AgentClass::Fundamentalist: return funds_[static_cast<std::size_t>(reg.index)].id == id;
            case AgentClass::Chartist: return charts_[static_cast<std::size_t>(reg.index)].id == id;
            default: return true;
        }
    }

    void on_trades(const std::vector<Trade>& trades) {
        for (const Trade& t : trades) {
            vwap_.add(t);
            if (Ledger* l = ledger_for(t.aggressor_agent)) l->on_fill(t.aggressor_side, t.price, t.volume);
            const Side passive_side = opposite(t.aggressor_side);
            if (Ledger* l = ledger_for(t.passive_agent)) l->on_fill(passive_side, t.price, t.volume);
            if (Runner* r = runner_for(t.aggressor_agent)) {
                r->parent.executed += t.volume;
                r->order_fill += t.volume;
            }
            if (Runner* r = runner_for(t.passive_agent)) {
                r->parent.executed += t.volume;
                r->order_fill += t.volume;
                if (r->working_order == t.passive_order && !exchange_.book().is_resting(t.passive_order))
                    r->working_order.reset();
            }
            if (t.passive_agent >= 0 && t.passive_agent < kFirstExecutionId &&
                static_cast<std::size_t>(t.passive_agent) < registry_.size()) {
                const auto& reg = registry_[static_cast<std::size_t>(t.passive_agent)];
                if (reg.cls == AgentClass::LiquidityProvider && !exchange_.book().is_resting(t.passive_order))
                    lps_[static_cast<std::size_t>(reg.index)].forget(t.passive_order);
            }
        }
    }

    void market(AgentId agent, const MarketIntent& intent) { on_trades(exchange_.place_market(agent, intent.side, intent.volume)); }

    double session_fraction(Seq now) const {
        return static_cast<double>(now) / static_cast<double>(env_.session_events);
    }

    void check_ruin(AgentClass cls, int index) {
        auto mid = exchange_.quotes().mid();
        if (!mid) return;
        if (cls == AgentClass::Fundamentalist) {
            auto& a = funds_[static_cast<std::size_t>(index)];
            const double pnl = a.ledger.mark(*mid);
            if (pnl < -env_.taker_wealth_budget) {
                retired_[0] += pnl;
                FundamentalistAgent fresh;
                fresh.id = new_id(AgentClass::Fundamentalist, index);
                fresh.private_value = draw_private_value(env_, rng_);
                a = fresh;
                ++art_.ruined_takers;
            }
        } else if (cls == AgentClass::Chartist) {
            auto& a = charts_[static_cast<std::size_t>(index)];
            const double pnl = a.ledger.mark(*mid);
            if (pnl < -env_.taker_wealth_budget) {
                retired_[1] += pnl;
                ChartistAgent fresh;
                fresh.id = new_id(AgentClass::Chartist, index);
                a = fresh;
                ++art_.ruined_takers;
            }
        }
    }

    void act(const ScheduledEvent& ev) {
        const Quotes q = exchange_.quotes();
        const auto idx = static_cast<std::size_t>(ev.index);
        switch (ev.agent_class) {
            case AgentClass::Fundamentalist: {
                auto& a = funds_[idx];
                if (auto intent = fundamentalist_decide(a, q, session_fraction(ev.event), env_, rng_)) {
                    market(a.id, *intent);
                    check_ruin(AgentClass::Fundamentalist, ev.index);
                }
                break;
            }
            case AgentClass::Chartist: {
                auto& a = charts_[idx];
                auto mid = q.mid();
                if (!mid) break;
                if (!a.last_mid) {
                    a.last_mid = *mid;
                    break;
                }
                const double r = std::log(*mid / *a.last_mid);
                a.last_mid = *mid;
                if (auto intent = chartist_decide(a, r, env_, rng_)) {
                    market(a.id, *intent);
                    check_ruin(AgentClass::Chartist, ev.index);
                }
                break;
            }
            case AgentClass::LiquidityProvider: {
                auto& a = lps_[idx];
                LpIntent intent = liquidity_provider_decide(a, q, reference_, env_, rng_);
                if (const auto* lo = std::get_if<LimitIntent>(&intent)) {
                    auto placed = exchange_.place_limit(a.id, lo->side, lo->price, lo->volume);
                    if (placed.residual > 0) a.live_orders.push_back(placed.id);
                    on_trades(placed.trades);
                } else if (const auto* c = std::get_if<CancelIntent>(&intent)) {
                    exchange_.cancel(c->order);
                    a.forget(c->order);
                }
                break;
            }
            case AgentClass::Execution: break;
        }
    }

    Observation observe(const Runner& r, Seq now) const {
        const Quotes q = exchange_.quotes();
        Observation obs;
        obs.remaining = r.parent.remaining();
        obs.elapsed = now - exec_.warmup_events;
        if (!exchange_.book().empty(r.spec.side)) obs.volume = static_cast<double>(q.volume(r.spec.side));
        if (auto s = q.spread()) obs.spread = static_cast<double>(*s);
        return obs;
    }

    double elapsed_fraction(Seq now) const {
        const double horizon = static_cast<double>(env_.session_events - exec_.warmup_events);
        return std::clamp(static_cast<double>(now - exec_.warmup_events) / horizon, 0.0, 1.0);
    }

    // Closes the transition opened at the previous decision.
    void settle(Runner& r, Seq now, bool session_over) {
        if (!r.prev_state) return;
        const auto all = vwap_.all();
        const auto excl = vwap_.excluding(r.spec.id);
        const bool terminal = session_over || r.parent.complete();
        const int next_state = discretize_state(observe(r, now), r.state_spec).index();
        if (!all || !excl) {
            ++r.result.skipped_rewards;
        } else {
            const double reward = reward_from_vwaps(r.spec.side, *all, *excl, r.parent.remaining(), r.order_fill,
                                                    elapsed_fraction(now), exec_.reward);
            r.result.rewards.push_back(reward);
            auto& table = tables_[static_cast<std::size_t>(r.spec.id - kFirstExecutionId)];
            if (options_.learn && r.spec.type != ExecutionType::S)
                q_update(table, *r.prev_state, r.prev_action, reward, next_state, terminal, exec_.learning);
        }
        r.prev_state.reset();
    }

    void decide(Runner& r, Seq now) {
        settle(r, now, false);
        if (r.parent.complete()) {
            r.done = true;
            return;
        }
        if (r.working_order) {
            exchange_.cancel(*r.working_order);
            r.working_order.reset();
        }
        auto& table = tables_[static_cast<std::size_t>(r.spec.id - kFirstExecutionId)];
        const Quotes q = exchange_.quotes();
        const int state = discretize_state(observe(r, now), r.state_spec).index();

        int action = 0;
        if (r.spec.type != ExecutionType::S) {
            table.visit(state);
            action = select_action(table, state, options_.epsilon, explore_);
        }

        r.order_fill = 0;
        ++r.result.decisions;
        switch (r.spec.type) {
            case ExecutionType::S:
            case ExecutionType::I: {
                const double mult = r.spec.type == ExecutionType::S
                                        ? 1.0
                                        : std::get<MarketAction>(decode_action(r.spec.type, action)).multiplier;
                if (auto intent = apply_action_type_i(mult, r.child_volume(), r.parent)) market(r.spec.id, *intent);
                ++r.child;
                r.next_decision = r.child < r.schedule.decision_points.size()
                                      ? exec_.warmup_events + r.schedule.decision_points[r.child]
                                      : kNever;
                break;
            }
            case ExecutionType::II: {
                const Seq horizon = env_.session_events - exec_.warmup_events;
                TypeIIContext ctx{r.child_volume(), horizon, std::max<Seq>(1, horizon / exec_.decision_points),
                                  exec_.depth_scale};
                auto order = apply_action_type_ii(decode_action(r.spec.type, action), q, r.parent, ctx);
                if (!order) {
                    --r.result.decisions;
                    r.next_decision = now + 1;
                    return;
                }
                if (const auto* mo = std::get_if<MarketIntent>(&order->order)) {
                    market(r.spec.id, *mo);
                } else if (const auto* lo = std::get_if<LimitIntent>(&order->order)) {
                    auto placed = exchange_.place_limit(r.spec.id, lo->side, lo->price, lo->volume);
                    if (placed.residual > 0) r.working_order = placed.id;
                    on_trades(placed.trades);
                }
                ++r.child;
                r.next_decision = now + order->next_decision_in;
                break;
            }
        }
        r.prev_state = state;
        r.prev_action = action;
    }

    void after_event(Seq now) {
        const Quotes q = exchange_.quotes();
        if (auto mid = q.mid()) {
            reference_ = *mid;
            art_.mid_series.push_back(*mid);
            art_.micro_series.push_back(*q.micro());
        } else if (!art_.mid_series.empty()) {
            art_.mid_series.push_back(art_.mid_series.back());
            art_.micro_series.push_back(art_.micro_series.back());
        }
        if (!q.bid && !q.ask) {
            if (++empty_run_ >= env_.abort_after_empty_events)
                throw EpisodeAborted("order book empty for " + std::to_string(empty_run_) +
                                     " consecutive events at event " + std::to_string(now));
        } else {
            empty_run_ = 0;
        }
        if ((now + 1) % env_.profit_sample_interval == 0) sample_profit(now);
    }

    void sample_profit(Seq now) {
        const double mid = reference_;
        ProfitSample s;
        s.event = now + 1;
        s.profit = retired_;
        for (const auto& a : funds_) s.profit[0] += a.ledger.mark(mid);
        for (const auto& a : charts_) s.profit[1] += a.ledger.mark(mid);
        for (const auto& a : lps_) s.profit[2] += a.ledger.mark(mid);
        for (const auto& r : runners_) s.profit[3] += r.ledger.mark(mid);
        art_.profit.push_back(s);
    }

    void finish() {
        const Seq end = env_.session_events;
        for (auto& r : runners_) {
            settle(r, end, true);
            r.result.executed = r.parent.executed;
            r.result.episode_return = episode_return(r.result.rewards);
            art_.agents.push_back(std::move(r.result));
        }
        art_.tables = std::move(tables_);
        art_.events = exchange_.events();
        art_.trades = exchange_.trades();
        art_.failed_market_orders = exchange_.failed_market_orders();
    }

    const ResolvedCase& rc_;
    const EnvironmentParams& env_;
    const ExecutionParams& exec_;
    EpisodeOptions options_;
    Exchange exchange_;
    EventScheduler scheduler_;
    Rng rng_;
    Rng explore_;
    double reference_;
    std::int64_t empty_run_ = 0;

    std::vector<Registry> registry_;
    std::vector<FundamentalistAgent> funds_;
    std::vector<ChartistAgent> charts_;
    std::vector<LiquidityProviderAgent> lps_;
    std::vector<Runner> runners_;
    std::vector<QTable> tables_;
    std::array<double, kAgentClassCount> retired_{};
    VwapTracker vwap_;
    RunArtifacts art_;
};

}  // namespace

RunArtifacts run_episode(const ResolvedCase& rc, std::uint64_t seed, std::vector<QTable> tables,
                         const EpisodeOptions& options) {
    Episode ep(rc, seed, std::move(tables), options);
    return ep.run();
}

std::vector<int> greedy_policy(const QTable& table) {
    std::vector<int> out(kStateCount, kUnvisited);
    if (table.states() != kStateCount) return out;
    for (int s = 0; s < kStateCount; ++s)
        if (table.visits(s) > 0) out[static_cast<std::size_t>(s)] = table.argmax(s);
    return out;
}

PolicyGrid greedy_policy_export(const QTable& table) {
    if (table.states() != 0 && table.states() != kStateCount)
        throw std::invalid_argument("policy export: table does not match the 625-state layout");
    const auto policy = greedy_policy(table);
    PolicyGrid grid{};
    for (int s = 0; s < kStateCount; ++s) {
        const auto d = DiscreteState::from_index(s);
        const auto row = static_cast<std::size_t>((d.inventory - 1) * 5 + (d.spread - 1));
        const auto col = static_cast<std::size_t>((d.time - 1) * 5 + (d.volume - 1));
        grid[row][col] = policy[static_cast<std::size_t>(s)];
    }
    return grid;
}

double policy_change(const std::vector<int>& before, const std::vector<int>& after) {
    if (before.size() != after.size() || before.empty()) throw std::invalid_argument("policy sizes differ");
    std::size_t changed = 0, reached = 0;
    for (std::size_t i = 0; i < before.size(); ++i) {
        if (before[i] == kUnvisited && after[i] == kUnvisited) continue;
        ++reached;
        changed += before[i] != after[i];
    }
    return reached ? static_cast<double>(changed) / static_cast<double>(reached) : 0.0;
}

TrainResult train(const ResolvedCase& rc, const TrainOptions& options) {
    const auto& cfg = rc.config;
    TrainResult out;
    out.tables = rc.initial_tables();
    out.returns.assign(rc.agents.size(), {});
    out.policy_changes.assign(rc.agents.size(), {});
    std::vector<std::vector<int>> policies(rc.agents.size(), std::vector<int>(kStateCount, kUnvisited));

    const int cycle = static_cast<int>(cfg.seeds.size());
    auto record = options.record ? options.record
                                 : std::function<bool(int)>([&](int e) { return e >= cfg.episodes - cycle; });

    for (int e = 0; e < cfg.episodes; ++e) {
        const std::uint64_t seed = cfg.seeds[static_cast<std::size_t>(e % cycle)];
        const double eps = epsilon_for_episode(cfg.exec.learning, e, cfg.episodes);
        RunArtifacts art = run_episode(rc, seed, std::move(out.tables), EpisodeOptions{eps, true, record(e)});
        out.tables = art.tables;
        out.epsilons.push_back(eps);
        out.episode_seeds.push_back(seed);
        for (std::size_t a = 0; a < rc.agents.size(); ++a) {
            out.returns[a].push_back(art.agents[a].episode_return);
            auto policy = greedy_policy(out.tables[a]);
            out.policy_changes[a].push_back(policy_change(policies[a], policy));
            policies[a] = std::move(policy);
        }
        if (options.on_episode) options.on_episode(e, art);
        if (record(e)) out.recorded.push_back(std::move(art));
    }
    return out;
}

}  // namespace marl_lob
