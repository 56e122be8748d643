#include "marl_lob/config.hpp"

#include <charconv>
#include <functional>
#include <map>
#include <sstream>

#include "marl_lob/io.hpp"

namespace marl_lob {

namespace {

template <class T>
T parse_number(std::string_view s) {
    T v{};
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size() || s.empty())
        throw ConfigError("expected a number, got '" + std::string(s) + "'");
    return v;
}

std::vector<std::uint64_t> parse_seeds(std::string_view s) {
    std::vector<std::uint64_t> out;
    for (auto tok : io::split(s, ',')) {
        tok = io::trim(tok);
        if (!tok.empty()) out.push_back(parse_number<std::uint64_t>(tok));
    }
    if (out.empty()) throw ConfigError("seed list is empty");
    return out;
}

std::string join_seeds(const std::vector<std::uint64_t>& seeds) {
    std::string s;
    for (auto v : seeds) {
        if (!s.empty()) s += ',';
        s += std::to_string(v);
    }
    return s;
}

struct Field {
    std::function<void(RunConfig&, std::string_view)> set;
    std::function<std::string(const RunConfig&)> get;
};

template <class Get>
Field int_field(Get ref) {
    return {[ref](RunConfig& c, std::string_view v) { ref(c) = parse_number<std::remove_reference_t<decltype(ref(c))>>(v); },
            [ref](const RunConfig& c) { return std::to_string(ref(const_cast<RunConfig&>(c))); }};
}

template <class Get>
Field real_field(Get ref) {
    return {[ref](RunConfig& c, std::string_view v) { ref(c) = parse_number<double>(v); },
            [ref](const RunConfig& c) { return io::format_double(ref(const_cast<RunConfig&>(c))); }};
}

#define INT_FIELD(expr) int_field([](RunConfig& c) -> auto& { return expr; })
#define REAL_FIELD(expr) real_field([](RunConfig& c) -> auto& { return expr; })

const std::map<std::string, Field>& fields() {
    static const std::map<std::string, Field> table = [] {
        std::map<std::string, Field> f;
        f["case"] = {[](RunConfig& c, std::string_view v) {
                         const int id = parse_number<int>(v);
                         if (id == -1) {
                             c.case_config.case_id = -1;
                             return;
                         }
                         CaseConfig builtin;
                         try {
                             builtin = load_case(id);
                         } catch (const std::out_of_range& e) {
                             throw ConfigError(e.what());
                         }
                         c.case_config.case_id = builtin.case_id;
                         c.case_config.name = builtin.name;
                         c.case_config.roster = builtin.roster;
                     },
                     [](const RunConfig& c) { return std::to_string(c.case_config.case_id); }};
        f["roster"] = {[](RunConfig& c, std::string_view v) {
                           std::vector<RosterEntry> roster;
                           try {
                               roster = parse_roster(std::string(v));
                           } catch (const std::invalid_argument& e) {
                               throw ConfigError(e.what());
                           }
                           if (roster == c.case_config.roster) return;
                           c.case_config.roster = std::move(roster);
                           c.case_config.case_id = -1;
                           c.case_config.name = "custom";
                       },
                       [](const RunConfig& c) { return format_roster(c.case_config.roster); }};
        f["name"] = {[](RunConfig& c, std::string_view v) { c.case_config.name = std::string(v); },
                     [](const RunConfig& c) { return c.case_config.name; }};
        f["episodes"] = INT_FIELD(c.case_config.episodes);
        f["seeds"] = {[](RunConfig& c, std::string_view v) { c.case_config.seeds = parse_seeds(v); },
                      [](const RunConfig& c) { return join_seeds(c.case_config.seeds); }};
        f["out"] = {[](RunConfig& c, std::string_view v) { c.out = std::string(v); },
                    [](const RunConfig& c) { return c.out.string(); }};
        f["record"] = {[](RunConfig& c, std::string_view v) {
                           if (v == "last_cycle")
                               c.record = RecordMode::LastCycle;
                           else if (v == "all")
                               c.record = RecordMode::All;
                           else if (v == "none")
                               c.record = RecordMode::None;
                           else
                               throw ConfigError("record must be last_cycle, all or none");
                       },
                       [](const RunConfig& c) {
                           return std::string(c.record == RecordMode::All    ? "all"
                                              : c.record == RecordMode::None ? "none"
                                                                             : "last_cycle");
                       }};
        f["adv_sessions"] = INT_FIELD(c.adv_sessions);

        f["env.n_fundamentalists"] = INT_FIELD(c.case_config.env.n_fundamentalists);
        f["env.n_chartists"] = INT_FIELD(c.case_config.env.n_chartists);
        f["env.n_lps"] = INT_FIELD(c.case_config.env.n_lps);
        f["env.initial_price"] = INT_FIELD(c.case_config.env.initial_price);
        f["env.fundamental_value_sigma"] = REAL_FIELD(c.case_config.env.fundamental_value_sigma);
        f["env.fundamental_trend"] = REAL_FIELD(c.case_config.env.fundamental_trend);
        f["env.chartist_ewma_lambda"] = REAL_FIELD(c.case_config.env.chartist_ewma_lambda);
        f["env.lp_depth_min"] = INT_FIELD(c.case_config.env.lp_depth_min);
        f["env.lp_depth_max"] = INT_FIELD(c.case_config.env.lp_depth_max);
        f["env.lp_max_live_orders"] = INT_FIELD(c.case_config.env.lp_max_live_orders);
        f["env.volume_log_mean"] = REAL_FIELD(c.case_config.env.volume_log_mean);
        f["env.volume_log_sigma"] = REAL_FIELD(c.case_config.env.volume_log_sigma);
        f["env.rate_fundamentalist"] = REAL_FIELD(c.case_config.env.rate_fundamentalist);
        f["env.rate_chartist"] = REAL_FIELD(c.case_config.env.rate_chartist);
        f["env.rate_lp"] = REAL_FIELD(c.case_config.env.rate_lp);
        f["env.cancel_rate"] = REAL_FIELD(c.case_config.env.cancel_rate);
        f["env.taker_wealth_budget"] = REAL_FIELD(c.case_config.env.taker_wealth_budget);
        f["env.session_events"] = INT_FIELD(c.case_config.env.session_events);
        f["env.abort_after_empty_events"] = INT_FIELD(c.case_config.env.abort_after_empty_events);
        f["env.profit_sample_interval"] = INT_FIELD(c.case_config.env.profit_sample_interval);

        f["exec.decision_points"] = INT_FIELD(c.case_config.exec.decision_points);
        f["exec.depth_scale"] = REAL_FIELD(c.case_config.exec.depth_scale);
        f["exec.warmup_events"] = INT_FIELD(c.case_config.exec.warmup_events);
        f["reward.lambda_r"] = REAL_FIELD(c.case_config.exec.reward.lambda_r);
        f["reward.gamma_r"] = REAL_FIELD(c.case_config.exec.reward.gamma_r);
        f["learning.alpha"] = REAL_FIELD(c.case_config.exec.learning.alpha);
        f["learning.gamma"] = REAL_FIELD(c.case_config.exec.learning.gamma);
        f["learning.epsilon_initial"] = REAL_FIELD(c.case_config.exec.learning.epsilon_initial);
        f["learning.epsilon_floor"] = REAL_FIELD(c.case_config.exec.learning.epsilon_floor);
        f["learning.epsilon_decay"] = {
            [](RunConfig& c, std::string_view v) {
                if (v == "auto")
                    c.case_config.exec.learning.epsilon_decay.reset();
                else
                    c.case_config.exec.learning.epsilon_decay = parse_number<double>(v);
            },
            [](const RunConfig& c) {
                const auto& d = c.case_config.exec.learning.epsilon_decay;
                return d ? io::format_double(*d) : std::string("auto");
            }};

        f["analysis.acf_max_lag"] = INT_FIELD(c.analysis.acf_max_lag);
        f["analysis.bootstrap_resamples"] = INT_FIELD(c.analysis.moments.resamples);
        f["analysis.bootstrap_seed"] = INT_FIELD(c.analysis.moments.seed);
        f["analysis.confidence"] = REAL_FIELD(c.analysis.moments.confidence);
        f["analysis.adf_lags"] = INT_FIELD(c.analysis.moments.adf_lags);
        f["analysis.hill_tail_fraction"] = REAL_FIELD(c.analysis.moments.hill_tail_fraction);
        f["analysis.hill_variant"] = {
            [](RunConfig& c, std::string_view v) {
                if (v == "classic")
                    c.analysis.moments.hill_variant = facts::HillVariant::Classic;
                else if (v == "bias_corrected")
                    c.analysis.moments.hill_variant = facts::HillVariant::BiasCorrected;
                else
                    throw ConfigError("hill_variant must be classic or bias_corrected");
            },
            [](const RunConfig& c) {
                return std::string(c.analysis.moments.hill_variant == facts::HillVariant::Classic ? "classic"
                                                                                                   : "bias_corrected");
            }};
        f["analysis.impact_omega_min"] = REAL_FIELD(c.analysis.impact.omega_min);
        f["analysis.impact_omega_max"] = REAL_FIELD(c.analysis.impact.omega_max);
        f["analysis.impact_bins_per_decade"] = INT_FIELD(c.analysis.impact.bins_per_decade);
        f["analysis.m_min"] = INT_FIELD(c.analysis.m_min);
        f["analysis.m_max"] = INT_FIELD(c.analysis.m_max);
        f["analysis.phase_segment"] = INT_FIELD(c.analysis.phase_segment);
        f["analysis.phase_tau"] = {[](RunConfig& c, std::string_view v) {
                                       if (v == "auto")
                                           c.analysis.phase_tau.reset();
                                       else
                                           c.analysis.phase_tau = parse_number<int>(v);
                                   },
                                   [](const RunConfig& c) {
                                       return c.analysis.phase_tau ? std::to_string(*c.analysis.phase_tau)
                                                                   : std::string("auto");
                                   }};
        f["analysis.dimension_radii"] = INT_FIELD(c.analysis.dimension.n_radii);
        f["analysis.dimension_lo_quantile"] = REAL_FIELD(c.analysis.dimension.lo_quantile);
        f["analysis.dimension_hi_quantile"] = REAL_FIELD(c.analysis.dimension.hi_quantile);
        f["analysis.dimension_slope_tolerance"] = REAL_FIELD(c.analysis.dimension.slope_tolerance);
        f["analysis.dimension_max_points"] = INT_FIELD(c.analysis.dimension.max_points);
        return f;
    }();
    return table;
}

#undef INT_FIELD
#undef REAL_FIELD

}  // namespace

void apply_setting(RunConfig& config, const std::string& key, const std::string& value) {
    auto it = fields().find(key);
    if (it == fields().end()) throw ConfigError("unknown key '" + key + "'");
    it->second.set(config, io::trim(value));
}

void validate_config(const RunConfig& c) {
    try {
        c.case_config.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    if (c.adv_sessions < 1) throw ConfigError("adv_sessions must be >= 1");
    if (c.analysis.acf_max_lag < 1) throw ConfigError("analysis.acf_max_lag must be >= 1");
    if (c.analysis.m_min < 1 || c.analysis.m_max < c.analysis.m_min)
        throw ConfigError("analysis.m_min and m_max must satisfy 1 <= m_min <= m_max");
    if (c.analysis.phase_segment < 1) throw ConfigError("analysis.phase_segment must be >= 1");
    if (c.analysis.moments.resamples < 0) throw ConfigError("analysis.bootstrap_resamples must be >= 0");
}

RunConfig parse_config(const std::string& text, const std::string& origin) {
    RunConfig c;
    std::istringstream is(text);
    std::string line;
    int line_no = 0;
    while (std::getline(is, line)) {
        ++line_no;
        std::string_view body = line;
        if (auto hash = body.find('#'); hash != std::string_view::npos) body = body.substr(0, hash);
        body = io::trim(body);
        if (body.empty()) continue;
        const auto eq = body.find('=');
        const std::string where = origin + ":" + std::to_string(line_no) + ": ";
        if (eq == std::string_view::npos) throw ConfigError(where + "expected key = value");
        const std::string key(io::trim(body.substr(0, eq)));
        const std::string value(io::trim(body.substr(eq + 1)));
        try {
            apply_setting(c, key, value);
        } catch (const ConfigError& e) {
            throw ConfigError(where + e.what());
        }
    }
    validate_config(c);
    return c;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::string text;
    try {
        text = io::read_file(path);
    } catch (const std::runtime_error& e) {
        throw ConfigError(e.what());
    }
    return parse_config(text, path.string());
}

std::string canonical_text(const RunConfig& config) {
    // case and roster lead so that parsing the text back restores the name.
    std::string s;
    auto emit = [&](const std::string& key) { s += key + " = " + fields().at(key).get(config) + '\n'; };
    emit("case");
    emit("roster");
    for (const auto& [key, field] : fields())
        if (key != "out" && key != "case" && key != "roster") emit(key);
    return s;
}

}  // namespace marl_lob
