#include "marl_lob/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <iostream>
#include <map>
#include <numeric>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "marl_lob/complexity.hpp"
#include "marl_lob/event_log.hpp"
#include "marl_lob/io.hpp"
#include "marl_lob/stylized_facts.hpp"

namespace marl_lob::cli {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

/// Failure that maps to a specific exit code.
struct CommandError : std::runtime_error {
    int code;
    CommandError(int c, const std::string& what) : std::runtime_error(what), code(c) {}
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string padded(int v, int width) {
    std::ostringstream ss;
    ss << std::setw(width) << std::setfill('0') << v;
    return ss.str();
}

std::string side_label(Side s) { return s == Side::Bid ? "buy" : "sell"; }

bool recorded(RecordMode mode, int episode, int episodes, int cycle) {
    switch (mode) {
        case RecordMode::All: return true;
        case RecordMode::None: return false;
        case RecordMode::LastCycle: return episode >= episodes - cycle;
    }
    return false;
}

void write_returns(const fs::path& path, const ResolvedCase& rc, const TrainResult& tr) {
    std::ostringstream ss;
    ss << "episode,seed,epsilon,agent_id,type,side,return,policy_change\n";
    for (std::size_t e = 0; e < tr.epsilons.size(); ++e) {
        for (std::size_t a = 0; a < rc.agents.size(); ++a) {
            const auto& spec = rc.agents[a];
            ss << e << ',' << tr.episode_seeds[e] << ',' << io::format_double(tr.epsilons[e]) << ',' << spec.id << ','
               << to_string(spec.type) << ',' << side_label(spec.side) << ','
               << io::format_double(tr.returns[a][e]) << ',' << io::format_double(tr.policy_changes[a][e]) << '\n';
        }
    }
    io::write_file_atomic(path, ss.str());
}

void write_profit(const fs::path& path, const RunArtifacts& art) {
    std::ostringstream ss;
    ss << "event,fundamentalist,chartist,liquidity_provider,execution\n";
    for (const auto& p : art.profit) {
        ss << p.event;
        for (double v : p.profit) ss << ',' << io::format_double(v);
        ss << '\n';
    }
    io::write_file_atomic(path, ss.str());
}

void write_qtable(const fs::path& path, const QTable& q) {
    std::ostringstream ss;
    ss << "state,inventory,time,spread,volume,visits";
    for (int a = 0; a < q.actions(); ++a) ss << ",q" << a;
    ss << '\n';
    for (int s = 0; s < q.states(); ++s) {
        const auto d = DiscreteState::from_index(s);
        ss << s << ',' << d.inventory << ',' << d.time << ',' << d.spread << ',' << d.volume << ',' << q.visits(s);
        for (double v : q.row(s)) ss << ',' << io::format_double(v);
        ss << '\n';
    }
    io::write_file_atomic(path, ss.str());
}

void write_policy(const fs::path& path, const QTable& q) {
    const auto grid = greedy_policy_export(q);
    std::ostringstream ss;
    ss << "row,inventory,spread";
    for (int c = 0; c < 25; ++c) ss << ",t" << (c / 5 + 1) << "v" << (c % 5 + 1);
    ss << '\n';
    for (std::size_t r = 0; r < grid.size(); ++r) {
        ss << r << ',' << (r / 5 + 1) << ',' << (r % 5 + 1);
        for (int v : grid[r]) ss << ',' << v;
        ss << '\n';
    }
    io::write_file_atomic(path, ss.str());
}

int run_impl(const RunConfig& config, std::ostream& log) {
    const auto start = std::chrono::steady_clock::now();
    const CaseConfig& cc = config.case_config;
    validate_config(config);

    auto t = std::chrono::steady_clock::now();
    const double adv = estimate_adv(cc.env, config.adv_sessions);
    const double adv_seconds = seconds_since(t);
    const ResolvedCase rc = resolve_case(cc, adv);
    log << "case " << cc.name << " roster [" << format_roster(cc.roster) << "] adv " << io::format_double(adv)
        << '\n';

    const int cycle = static_cast<int>(cc.seeds.size());
    TrainOptions opts;
    opts.record = [&](int e) { return recorded(config.record, e, cc.episodes, cycle); };
    opts.on_episode = [&](int e, const RunArtifacts& art) {
        if ((e + 1) % 10 == 0 || e + 1 == cc.episodes) {
            log << "episode " << e + 1 << "/" << cc.episodes << " seed " << art.seed << " epsilon "
                << io::format_double(art.epsilon) << '\n';
        }
    };
    t = std::chrono::steady_clock::now();
    TrainResult tr;
    try {
        tr = train(rc, opts);
    } catch (const EpisodeAborted& e) {
        throw CommandError(kExitRuntime, std::string("episode aborted: ") + e.what());
    }
    const double train_seconds = seconds_since(t);

    t = std::chrono::steady_clock::now();
    const fs::path out = config.out;
    fs::create_directories(out);
    json artifacts;
    artifacts["event_logs"] = json::array();
    artifacts["profit"] = json::array();
    std::size_t next_recorded = 0;
    for (int e = 0; e < cc.episodes; ++e) {
        if (!recorded(config.record, e, cc.episodes, cycle)) continue;
        const RunArtifacts& art = tr.recorded.at(next_recorded++);
        const std::string stem = "episode_" + padded(e, 4) + "_seed_" + std::to_string(art.seed);
        const fs::path events = fs::path("events") / (stem + ".csv");
        const fs::path profit = fs::path("profit") / (stem + ".csv");
        write_event_log(out / events, art.events);
        write_profit(out / profit, art);
        artifacts["event_logs"].push_back({{"episode", e}, {"seed", art.seed}, {"path", events.generic_string()}});
        artifacts["profit"].push_back({{"episode", e}, {"seed", art.seed}, {"path", profit.generic_string()}});
    }
    write_returns(out / "returns.csv", rc, tr);
    artifacts["returns"] = "returns.csv";
    artifacts["qtables"] = json::array();
    artifacts["policies"] = json::array();
    json agents = json::array();
    for (std::size_t a = 0; a < rc.agents.size(); ++a) {
        const auto& spec = rc.agents[a];
        agents.push_back({{"id", spec.id},
                          {"type", std::string(to_string(spec.type))},
                          {"side", side_label(spec.side)},
                          {"parent_volume", spec.parent}});
        if (spec.type == ExecutionType::S) continue;
        const fs::path q = fs::path("qtables") / ("agent_" + std::to_string(spec.id) + ".csv");
        const fs::path p = fs::path("policies") / ("agent_" + std::to_string(spec.id) + ".csv");
        write_qtable(out / q, tr.tables[a]);
        write_policy(out / p, tr.tables[a]);
        artifacts["qtables"].push_back(q.generic_string());
        artifacts["policies"].push_back(p.generic_string());
    }
    const double write_seconds = seconds_since(t);

    const std::string canonical = canonical_text(config);
    json m;
    m["tool"] = "marl_lob";
    m["version"] = kVersion;
    m["config_hash"] = io::hex64(io::fnv1a(canonical));
    m["config"] = canonical;
    m["case_id"] = cc.case_id;
    m["case_name"] = cc.name;
    m["roster"] = format_roster(cc.roster);
    m["episodes"] = cc.episodes;
    m["seeds"] = cc.seeds;
    m["adv"] = adv;
    m["agents"] = agents;
    m["artifacts"] = artifacts;
    m["stage_seconds"] = {{"adv", adv_seconds},
                          {"train", train_seconds},
                          {"write", write_seconds},
                          {"total", seconds_since(start)}};
    io::write_file_atomic(out / "manifest.json", m.dump(2) + "\n");
    log << "wrote " << (out / "manifest.json").string() << '\n';
    return kExitOk;
}

struct Manifest {
    fs::path dir;
    json doc;
    RunConfig config;
    std::string label;
    double adv = 0.0;
    std::vector<fs::path> event_logs;
};

Manifest load_manifest(const fs::path& path) {
    if (!fs::exists(path)) throw CommandError(kExitRuntime, "manifest not found: " + path.string());
    Manifest m;
    m.dir = path.parent_path();
    try {
        m.doc = json::parse(io::read_file(path));
        m.config = parse_config(m.doc.at("config").get<std::string>(), path.string());
        m.label = m.doc.at("case_name").get<std::string>();
        m.adv = m.doc.at("adv").get<double>();
        for (const auto& e : m.doc.at("artifacts").at("event_logs"))
            m.event_logs.push_back(m.dir / e.at("path").get<std::string>());
    } catch (const json::exception& e) {
        throw CommandError(kExitRuntime, "malformed manifest " + path.string() + ": " + e.what());
    } catch (const ConfigError& e) {
        throw CommandError(kExitRuntime, std::string("manifest config: ") + e.what());
    }
    if (m.event_logs.empty()) throw CommandError(kExitRuntime, "manifest lists no event logs: " + path.string());
    for (const auto& p : m.event_logs)
        if (!fs::exists(p)) throw CommandError(kExitRuntime, "missing artifact: " + p.string());
    return m;
}

std::vector<double> micro_returns(const std::vector<EventRow>& rows) {
    return facts::log_returns(facts::price_series(rows).micro);
}

std::vector<double> fluctuations(const std::vector<double>& micro) {
    std::vector<double> d;
    for (std::size_t i = 1; i < micro.size(); ++i) d.push_back(micro[i] - micro[i - 1]);
    return d;
}

std::vector<complexity::DimensionPoint> dimension_curve(const std::vector<double>& micro, const AnalysisParams& a) {
    const auto x = fluctuations(micro);
    const int tau = complexity::correlation_time(x);
    return complexity::dimension_vs_embedding(x, a.m_min, a.m_max, a.dimension, tau);
}

std::string csv_value(double v) { return std::isnan(v) ? std::string{} : io::format_double(v); }

void write_moments(const fs::path& path, const facts::MomentReport& rep) {
    std::ostringstream ss;
    ss << "moment,value,ci_lo,ci_hi,note\n";
    for (std::size_t k = 0; k < facts::kMomentCount; ++k) {
        const auto& e = rep.m[k];
        ss << facts::to_string(static_cast<facts::Moment>(k)) << ',';
        if (e.value)
            ss << io::format_double(*e.value) << ',' << io::format_double(e.lo) << ',' << io::format_double(e.hi) << ',';
        else
            ss << ",,," << e.error;
        ss << '\n';
    }
    io::write_file_atomic(path, ss.str());
}

std::vector<double> mean_curves(const std::vector<std::vector<double>>& curves) {
    if (curves.empty()) return {};
    std::vector<double> out(curves.front().size(), 0.0);
    for (const auto& c : curves)
        for (std::size_t i = 0; i < out.size(); ++i) out[i] += c[i];
    for (double& v : out) v /= static_cast<double>(curves.size());
    return out;
}

void write_impact(const fs::path& path, const facts::PriceImpactCurve& c) {
    std::ostringstream ss;
    ss << "omega_lo,omega_hi,mean_impact,count\n";
    for (std::size_t b = 0; b < c.bins(); ++b)
        ss << io::format_double(c.edges[b]) << ',' << io::format_double(c.edges[b + 1]) << ','
           << csv_value(c.mean_impact[b]) << ',' << c.count[b] << '\n';
    io::write_file_atomic(path, ss.str());
}

}  // namespace

std::set<std::string> parse_which(const std::string& spec) {
    static const std::set<std::string> all{"moments", "acf", "impact", "complexity"};
    std::set<std::string> out;
    for (auto tok : io::split(spec, ',')) {
        const std::string t(io::trim(tok));
        if (t.empty()) continue;
        if (t == "all") {
            out.insert(all.begin(), all.end());
        } else if (all.count(t)) {
            out.insert(t);
        } else {
            throw CLI::ValidationError("--which", "unknown analysis '" + t + "'");
        }
    }
    if (out.empty()) out = all;
    return out;
}

namespace {

int analyze_impl(const fs::path& manifest_path, const std::set<std::string>& which, const fs::path& out_override,
                 std::ostream& log) {
    const Manifest man = load_manifest(manifest_path);
    const fs::path out = out_override.empty() ? man.dir : out_override;
    const AnalysisParams& a = man.config.analysis;

    std::vector<std::vector<EventRow>> logs;
    for (const auto& p : man.event_logs) {
        try {
            logs.push_back(read_event_log(p));
        } catch (const std::runtime_error& e) {
            throw CommandError(kExitRuntime, p.string() + ": " + e.what());
        }
    }
    const auto micro = facts::price_series(logs.front()).micro;

    if (which.count("moments")) {
        const auto rep = facts::moment_report(micro_returns(logs.front()), a.moments);
        write_moments(out / "moments.csv", rep);
        log << "moments: " << rep.n_returns << " returns\n";
    }
    if (which.count("acf")) {
        std::vector<std::vector<double>> raw, dem, absr;
        for (const auto& rows : logs) {
            const auto signs = facts::tradesign_series(rows);
            if (signs.size() > static_cast<std::size_t>(a.acf_max_lag)) {
                raw.push_back(facts::acf(signs, a.acf_max_lag, false).rho);
                auto d = facts::acf(signs, a.acf_max_lag, true);
                if (!d.undefined) dem.push_back(d.rho);
            }
            const auto r = facts::absolute(micro_returns(rows));
            if (r.size() > static_cast<std::size_t>(a.acf_max_lag)) {
                auto c = facts::acf(r, a.acf_max_lag, true);
                if (!c.undefined) absr.push_back(c.rho);
            }
        }
        const auto mr = mean_curves(raw), md = mean_curves(dem), ma = mean_curves(absr);
        std::ostringstream ts, as;
        ts << "lag,rho,rho_demeaned\n";
        as << "lag,rho\n";
        for (int k = 1; k <= a.acf_max_lag; ++k) {
            const auto i = static_cast<std::size_t>(k - 1);
            ts << k << ',' << (i < mr.size() ? csv_value(mr[i]) : "") << ',' << (i < md.size() ? csv_value(md[i]) : "")
               << '\n';
            as << k << ',' << (i < ma.size() ? csv_value(ma[i]) : "") << '\n';
        }
        io::write_file_atomic(out / "acf_tradesigns.csv", ts.str());
        io::write_file_atomic(out / "acf_absreturns.csv", as.str());
        log << "acf: " << logs.size() << " episodes\n";
    }
    if (which.count("impact")) {
        std::vector<facts::ImpactSample> samples;
        for (const auto& rows : logs) {
            auto s = facts::impact_samples(rows, man.adv);
            samples.insert(samples.end(), s.begin(), s.end());
        }
        const auto [buy, sell] = facts::price_impact_curves(samples, a.impact);
        write_impact(out / "price_impact_buyer.csv", buy);
        write_impact(out / "price_impact_seller.csv", sell);
        log << "impact: " << samples.size() << " orders\n";
    }
    if (which.count("complexity")) {
        const auto curve = dimension_curve(micro, a);
        std::ostringstream ds;
        ds << "m,tau,D,r_lo,r_hi,scaling_found\n";
        for (const auto& p : curve) {
            const auto& c = p.curve;
            ds << p.m << ',' << p.tau << ',' << io::format_double(c.dimension) << ','
               << io::format_double(c.radii[static_cast<std::size_t>(c.fit_first)]) << ','
               << io::format_double(c.radii[static_cast<std::size_t>(c.fit_last)]) << ','
               << (c.scaling_found ? 1 : 0) << '\n';
        }
        io::write_file_atomic(out / "dimension_curve.csv", ds.str());

        const int tau = a.phase_tau ? *a.phase_tau : curve.front().tau;
        const auto ps = complexity::phase_space_export(micro, tau, static_cast<std::size_t>(a.phase_segment));
        std::ostringstream pss;
        pss << "t,x_t,x_lag,highlighted\n";
        for (std::size_t i = 0; i < ps.t.size(); ++i)
            pss << ps.t[i] << ',' << io::format_double(ps.x[i]) << ',' << io::format_double(ps.lagged[i]) << ','
                << (i >= ps.segment_first && i < ps.segment_last ? 1 : 0) << '\n';
        io::write_file_atomic(out / "phase_space.csv", pss.str());
        log << "complexity: tau " << tau << '\n';
    }
    return kExitOk;
}

int compare_impl(const std::vector<fs::path>& manifests, const fs::path& baseline_path, const fs::path& out,
                 std::ostream& log) {
    std::vector<fs::path> paths;
    auto add = [&](const fs::path& p) {
        const auto canon = fs::weakly_canonical(p);
        for (const auto& q : paths)
            if (fs::weakly_canonical(q) == canon) return;
        paths.push_back(p);
    };
    for (const auto& p : manifests) add(p);
    if (!baseline_path.empty()) {
        if (!fs::exists(baseline_path)) throw CommandError(kExitUsage, "baseline manifest not found: " + baseline_path.string());
        add(baseline_path);
    }
    if (paths.size() < 2) throw CommandError(kExitUsage, "compare needs at least two distinct manifests");

    std::vector<Manifest> mans;
    for (const auto& p : paths) mans.push_back(load_manifest(p));
    std::size_t base = mans.size();
    if (!baseline_path.empty()) {
        const auto canon = fs::weakly_canonical(baseline_path);
        for (std::size_t i = 0; i < paths.size(); ++i)
            if (fs::weakly_canonical(paths[i]) == canon) base = i;
    } else {
        for (std::size_t i = 0; i < mans.size(); ++i)
            if (mans[i].doc.value("case_id", -1) == 0) base = i;
    }
    if (base == mans.size()) throw CommandError(kExitUsage, "no baseline: pass --baseline or include a case 0 manifest");

    // Unique column labels.
    std::map<std::string, int> seen;
    std::vector<std::string> labels;
    for (const auto& m : mans) {
        const int n = seen[m.label]++;
        labels.push_back(n == 0 ? m.label : m.label + "_" + std::to_string(n + 1));
    }

    std::vector<std::vector<double>> returns;
    std::vector<std::vector<double>> micros;
    for (const auto& m : mans) {
        const auto rows = read_event_log(m.event_logs.front());
        micros.push_back(facts::price_series(rows).micro);
        returns.push_back(facts::log_returns(micros.back()));
    }
    std::vector<facts::MomentReport> reports;
    for (std::size_t i = 0; i < mans.size(); ++i)
        reports.push_back(facts::moment_report(returns[i], mans[i].config.analysis.moments));

    std::vector<std::size_t> order(mans.size());
    std::iota(order.begin(), order.end(), 0);
    auto std_of = [&](std::size_t i) {
        const auto& e = reports[i][facts::Moment::Std];
        return e.value ? *e.value : -1.0;
    };
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return std_of(a) > std_of(b); });

    std::ostringstream ms;
    ms << "moment";
    for (auto i : order) ms << ',' << labels[i] << ',' << labels[i] << "_lo," << labels[i] << "_hi";
    ms << '\n';
    for (std::size_t k = 0; k < facts::kMomentCount; ++k) {
        ms << facts::to_string(static_cast<facts::Moment>(k));
        for (auto i : order) {
            const auto& e = reports[i].m[k];
            if (e.value)
                ms << ',' << io::format_double(*e.value) << ',' << io::format_double(e.lo) << ','
                   << io::format_double(e.hi);
            else
                ms << ",,,";
        }
        ms << '\n';
    }
    ms << "KS_baseline";
    for (auto i : order) ms << ',' << io::format_double(facts::ks_statistic(returns[i], returns[base])) << ",,";
    ms << '\n';
    io::write_file_atomic(out / "moments_compare.csv", ms.str());

    std::vector<std::vector<complexity::DimensionPoint>> curves;
    for (std::size_t i = 0; i < mans.size(); ++i) curves.push_back(dimension_curve(micros[i], mans[i].config.analysis));
    std::ostringstream dd;
    dd << "case,delta_mean,delta_mean_high\n";
    for (std::size_t i = 0; i < mans.size(); ++i) {
        const auto d = complexity::delta_dimension(curves[i], curves[base]);
        dd << labels[i] << ',' << io::format_double(d.mean_all) << ',' << io::format_double(d.mean_high) << '\n';
    }
    io::write_file_atomic(out / "delta_dimension.csv", dd.str());
    log << "compared " << mans.size() << " manifests against " << labels[base] << '\n';
    return kExitOk;
}

// Maps failures onto the exit-code contract.
template <class Fn>
int guarded(std::ostream& log, Fn&& fn) {
    try {
        return fn();
    } catch (const ConfigError& e) {
        log << "config error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const CLI::ValidationError& e) {
        log << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const CommandError& e) {
        log << "error: " << e.what() << '\n';
        return e.code;
    } catch (const std::exception& e) {
        log << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
}

}  // namespace

int cmd_run(const RunConfig& config, std::ostream& log) {
    return guarded(log, [&] { return run_impl(config, log); });
}

int cmd_analyze(const fs::path& manifest, const std::set<std::string>& which, const fs::path& out, std::ostream& log) {
    return guarded(log, [&] { return analyze_impl(manifest, which, out, log); });
}

int cmd_compare(const std::vector<fs::path>& manifests, const fs::path& baseline, const fs::path& out,
                std::ostream& log) {
    return guarded(log, [&] { return compare_impl(manifests, baseline, out, log); });
}

int main(int argc, char** argv) {
    CLI::App app{"Limit order book market simulator with learning execution agents"};
    app.set_version_flag("--version", std::string(kVersion));
    app.require_subcommand(1);
    app.footer("Environment: MARL_LOB_THREADS caps the worker thread count.\n"
               "Exit codes: 0 success, 1 runtime failure, 2 usage or configuration error.");

    std::string config_path, out_dir, seeds, roster;
    std::optional<int> case_id, episodes;
    std::optional<std::uint64_t> seed;
    std::vector<std::string> sets;
    auto* run = app.add_subcommand("run", "train a case and write its artifacts");
    run->add_option("--config", config_path, "key = value run configuration file");
    run->add_option("--case", case_id, "builtin case id 0..12");
    run->add_option("--roster", roster, "custom roster such as 5I+,5I-");
    run->add_option("--episodes", episodes, "training episodes");
    run->add_option("--seeds", seeds, "comma separated seed cycle");
    run->add_option("--seed", seed, "single seed; same as --seeds N");
    run->add_option("--out", out_dir, "output directory");
    run->add_option("--set", sets, "extra key=value setting, repeatable");

    std::string manifest, which = "all", analyze_out;
    auto* analyze = app.add_subcommand("analyze", "compute stylized facts and complexity measures of a run");
    analyze->add_option("manifest", manifest, "manifest.json of a run")->required();
    analyze->add_option("--which", which, "moments,acf,impact,complexity or all");
    analyze->add_option("--out", analyze_out, "output directory (default: the manifest's)");

    std::vector<std::string> compare_manifests;
    std::string baseline, compare_out = ".";
    auto* compare = app.add_subcommand("compare", "cross-case moment table and dimension differences");
    compare->add_option("manifests", compare_manifests, "manifest.json files")->required();
    compare->add_option("--baseline", baseline, "baseline manifest (default: the case 0 run)");
    compare->add_option("--out", compare_out, "output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        std::cout << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        std::cout << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::CallForVersion&) {
        std::cout << kVersion << '\n';
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    }

    return guarded(std::cerr, [&]() -> int {
        if (*run) {
            RunConfig cfg = config_path.empty() ? RunConfig{} : load_config(config_path);
            if (case_id) apply_setting(cfg, "case", std::to_string(*case_id));
            if (!roster.empty()) apply_setting(cfg, "roster", roster);
            if (episodes) apply_setting(cfg, "episodes", std::to_string(*episodes));
            if (!seeds.empty()) apply_setting(cfg, "seeds", seeds);
            if (seed) apply_setting(cfg, "seeds", std::to_string(*seed));
            if (!out_dir.empty()) cfg.out = out_dir;
            for (const auto& s : sets) {
                const auto eq = s.find('=');
                if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + s + "'");
                apply_setting(cfg, std::string(io::trim(s.substr(0, eq))), s.substr(eq + 1));
            }
            validate_config(cfg);
            return run_impl(cfg, std::cerr);
        }
        if (*analyze) return analyze_impl(manifest, parse_which(which), analyze_out, std::cerr);
        std::vector<fs::path> paths(compare_manifests.begin(), compare_manifests.end());
        return compare_impl(paths, baseline, compare_out, std::cerr);
    });
}

}  // namespace marl_lob::cli
