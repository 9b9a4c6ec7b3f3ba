// llsvn - command-line front end. Each subcommand runs one slice of the
// pipeline, writes its artifacts atomically, and drops a run manifest next to
// them (<out>.manifest.json, or run_manifest.json inside a sweep directory)
// with enough provenance to reproduce the output byte for byte.
//
// Exit codes: 0 success, 2 usage, 3 config or data error, 4 internal error.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "llsvn/asymmetry.hpp"
#include "llsvn/coarsen.hpp"
#include "llsvn/common.hpp"
#include "llsvn/community.hpp"
#include "llsvn/config.hpp"
#include "llsvn/ingest.hpp"
#include "llsvn/leadlag.hpp"
#include "llsvn/manifest.hpp"
#include "llsvn/sweep.hpp"
#include "llsvn/synth.hpp"
#include "llsvn/validate.hpp"

namespace {

using namespace llsvn;
namespace fs = std::filesystem;

class WallTimer {
  public:
    double ms() const {
        auto d = std::chrono::steady_clock::now() - start_;
        return std::chrono::duration<double, std::milli>(d).count();
    }

  private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

nlohmann::json load_config_or_empty(const std::string& path) {
    if (path.empty()) return nlohmann::json::object();
    return load_config(path);
}

TradeSet read_trades(const std::string& path, const SessionCalendar& cal) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open " + path);
    ParsedTrades parsed = parse_trades(in);
    for (const auto& w : parsed.warnings) std::cerr << "llsvn: " << w << '\n';
    return filter_session(parsed.trades, cal);
}

DayRange full_span(const TradeSet& ts) {
    return {0, static_cast<std::int32_t>(ts.n_days())};
}

template <class Emit>
void write_artifact(const fs::path& path, Emit&& emit) {
    std::ostringstream buf;
    emit(buf);
    write_file_atomic(path, buf.str());
}

// One bag of values for every subcommand; only the parsed subcommand's
// bindings are live. Option handles record which flags were actually given so
// config-file values are overridden only then.
struct Args {
    std::string config_path;
    std::string input;
    std::string out;
    std::string truth_out;
    std::string sweep_dir;
    std::string metric = "links";
    int dt_s = 0;
    int dt1_s = 0;
    int dt2_s = 0;
    double rho0 = 0.0;
    double alpha = 0.0;
    int min_active = 0;
    bool joint = false;
    bool pool_states = true;
    std::uint64_t seed = 0;
    int restarts = 0;
    int threads = 0;
    int t_in_days = 0;
    int step_days = 0;
    int grid_min = 0;
    int grid_max = 0;
    int grid_step = 0;
    int n_min = 0;
    bool hac = false;
};

struct Flags {
    CLI::Option* rho0 = nullptr;
    CLI::Option* alpha = nullptr;
    CLI::Option* min_active = nullptr;
    CLI::Option* seed = nullptr;
    CLI::Option* restarts = nullptr;
    CLI::Option* pool_states = nullptr;
    CLI::Option* threads = nullptr;
    CLI::Option* t_in = nullptr;
    CLI::Option* step = nullptr;
    CLI::Option* grid_min = nullptr;
    CLI::Option* grid_max = nullptr;
    CLI::Option* grid_step = nullptr;
    CLI::Option* n_min = nullptr;
    CLI::Option* hac = nullptr;
};

bool given(const CLI::Option* o) { return o != nullptr && o->count() > 0; }

// Single-timescale commands take their defaults from the [sweep] config table
// so one config file drives both the sweep and ad-hoc runs.
struct AnalysisParams {
    double rho0 = 0.01;
    double alpha = 0.05;
    int min_active = 10;
    std::uint64_t seed = 1;
    int restarts = 10;
    bool pool_states = true;
};

AnalysisParams analysis_params(const nlohmann::json& cfg, const Args& a, const Flags& f) {
    SweepOptions base = sweep_options_from(cfg);
    AnalysisParams p;
    p.rho0 = base.rho0;
    p.alpha = base.fdr_alpha;
    p.min_active = base.min_active_slices;
    p.seed = base.seed;
    p.restarts = base.community_restarts;
    p.pool_states = base.pool_state_pairs;
    if (given(f.rho0)) p.rho0 = a.rho0;
    if (given(f.alpha)) p.alpha = a.alpha;
    if (given(f.min_active)) p.min_active = a.min_active;
    if (given(f.seed)) p.seed = a.seed;
    if (given(f.restarts)) p.restarts = a.restarts;
    if (given(f.pool_states)) p.pool_states = a.pool_states;
    return p;
}

int resolve_threads(const CLI::Option* flag, int flag_val, const nlohmann::json& cfg,
                    int cfg_or_default) {
    if (given(flag)) return flag_val;
    auto it = cfg.find("sweep");
    if (it != cfg.end() && it->is_object() && it->contains("threads")) return cfg_or_default;
    if (const char* env = std::getenv("LLSVN_THREADS")) {
        std::int64_t v = 0;
        if (!detail::parse_int64(env, v) || v < 0) {
            throw ConfigError("LLSVN_THREADS must be a nonnegative integer");
        }
        return static_cast<int>(v);
    }
    return cfg_or_default;
}

RunManifest make_manifest(const std::string& command, nlohmann::json effective_config,
                          std::uint64_t seed) {
    RunManifest m;
    m.command = command;
    m.config_hash = config_digest(effective_config);
    m.config = std::move(effective_config);
    m.seed = seed;
    return m;
}

// Digest exactly the files load_sweep read, per the sweep's own shard list.
void add_sweep_inputs(RunManifest& m, const fs::path& dir) {
    m.add_input(dir / "manifest.json");
    std::ifstream in(dir / "manifest.json", std::ios::binary);
    nlohmann::json j;
    in >> j;
    for (const auto& s : j["shards"]) m.add_input(dir / s.get<std::string>());
    m.add_input(dir / j.value("summary", std::string("svn_summary.csv")));
}

struct LoadedMarket {
    nlohmann::json cfg;
    CalendarConfig cal_cfg;
    AnalysisParams params;
    TradeSet ts;
};

LoadedMarket load_market(const Args& a, const Flags& f) {
    LoadedMarket m;
    m.cfg = load_config_or_empty(a.config_path);
    m.cal_cfg = calendar_config_from(m.cfg);
    m.params = analysis_params(m.cfg, a, f);
    m.ts = read_trades(a.input, build_calendar(m.cal_cfg));
    return m;
}

StateMatrix states_at(const TradeSet& ts, int dt_s, double rho0) {
    SliceGrid grid = slice_grid(ts.calendar, dt_s, full_span(ts));
    return state_matrix(ts, grid, rho0);
}

Svn svn_at(const TradeSet& ts, int dt_s, const AnalysisParams& p, bool joint) {
    SvnOptions o;
    o.fdr_alpha = p.alpha;
    o.min_active_slices = p.min_active;
    o.condition_on_joint_activity = joint;
    return build_svn(states_at(ts, dt_s, p.rho0), o);
}

GroupPartition groups_at(const TradeSet& ts, int dt_s, const AnalysisParams& p, bool joint) {
    CommunityOptions o;
    o.n_restarts = p.restarts;
    return detect_communities(svn_at(ts, dt_s, p, joint), p.seed, o);
}

int cmd_synth(const Args& a, const Flags& f) {
    WallTimer timer;
    nlohmann::json cfg = load_config(a.config_path);
    SynthConfig sc = synth_config_from(cfg);
    if (given(f.seed)) sc.seed = a.seed;
    cfg["synth"]["seed"] = sc.seed;

    TradeSet ts = generate_market(sc);
    write_artifact(a.out, [&](std::ostream& s) { serialize_trades(ts, s); });

    RunManifest m = make_manifest("synth", cfg, sc.seed);
    m.add_input(a.config_path);
    m.outputs.push_back(a.out);
    if (!a.truth_out.empty()) {
        PlantedTruth truth = planted_truth(sc);
        write_artifact(a.truth_out, [&](std::ostream& s) { export_truth(truth, s); });
        m.outputs.push_back(a.truth_out);
    }
    m.wall_ms = timer.ms();
    write_manifest(m, a.out + ".manifest.json");
    std::cout << "wrote " << a.out << " (" << ts.n_trades() << " trades, " << ts.n_traders()
              << " traders, " << ts.n_days() << " days)\n";
    return 0;
}

int cmd_states(const Args& a, const Flags& f) {
    WallTimer timer;
    LoadedMarket mk = load_market(a, f);
    StateMatrix sm = states_at(mk.ts, a.dt_s, mk.params.rho0);
    write_artifact(a.out, [&](std::ostream& s) { export_states(sm, s); });

    nlohmann::json eff;
    eff["calendar"] = calendar_config_json(mk.cal_cfg);
    eff["states"] = {{"dt_s", a.dt_s}, {"rho0", mk.params.rho0}};
    RunManifest m = make_manifest("states", eff, 0);
    if (!a.config_path.empty()) m.add_input(a.config_path);
    m.add_input(a.input);
    m.outputs.push_back(a.out);
    m.wall_ms = timer.ms();
    write_manifest(m, a.out + ".manifest.json");
    std::cout << "wrote " << a.out << " (" << sm.n_traders() << " traders x " << sm.n_slices
              << " slices)\n";
    return 0;
}

int cmd_svn(const Args& a, const Flags& f) {
    WallTimer timer;
    LoadedMarket mk = load_market(a, f);
    Svn svn = svn_at(mk.ts, a.dt_s, mk.params, a.joint);
    write_artifact(a.out, [&](std::ostream& s) { export_svn(svn, s); });

    nlohmann::json eff;
    eff["calendar"] = calendar_config_json(mk.cal_cfg);
    eff["svn"] = {{"dt_s", a.dt_s},
                  {"rho0", mk.params.rho0},
                  {"fdr_alpha", mk.params.alpha},
                  {"min_active_slices", mk.params.min_active},
                  {"condition_on_joint_activity", a.joint}};
    RunManifest m = make_manifest("svn", eff, 0);
    if (!a.config_path.empty()) m.add_input(a.config_path);
    m.add_input(a.input);
    m.outputs.push_back(a.out);
    m.wall_ms = timer.ms();
    write_manifest(m, a.out + ".manifest.json");
    std::cout << "wrote " << a.out << " (" << svn.links.size() << " links from " << svn.m_tests
              << " tests)\n";
    return 0;
}

int cmd_groups(const Args& a, const Flags& f) {
    WallTimer timer;
    LoadedMarket mk = load_market(a, f);
    GroupPartition part = groups_at(mk.ts, a.dt_s, mk.params, a.joint);
    write_artifact(a.out, [&](std::ostream& s) { export_partition(part, s); });

    nlohmann::json eff;
    eff["calendar"] = calendar_config_json(mk.cal_cfg);
    eff["groups"] = {{"dt_s", a.dt_s},
                     {"rho0", mk.params.rho0},
                     {"fdr_alpha", mk.params.alpha},
                     {"min_active_slices", mk.params.min_active},
                     {"condition_on_joint_activity", a.joint},
                     {"seed", mk.params.seed},
                     {"community_restarts", mk.params.restarts}};
    RunManifest m = make_manifest("groups", eff, mk.params.seed);
    if (!a.config_path.empty()) m.add_input(a.config_path);
    m.add_input(a.input);
    m.outputs.push_back(a.out);
    m.wall_ms = timer.ms();
    write_manifest(m, a.out + ".manifest.json");
    std::cout << "wrote " << a.out << " (" << part.n_groups() << " groups covering "
              << part.n_grouped() << " of " << part.trader_ids.size() << " traders)\n";
    return 0;
}

int cmd_leadlag(const Args& a, const Flags& f) {
    WallTimer timer;
    LoadedMarket mk = load_market(a, f);
    GroupPartition g1 = groups_at(mk.ts, a.dt1_s, mk.params, a.joint);
    GroupPartition g2 = groups_at(mk.ts, a.dt2_s, mk.params, a.joint);
    LeadLagObservations obs = leadlag_observations(mk.ts, g1, g2, full_span(mk.ts), a.dt1_s,
                                                   a.dt2_s, mk.params.rho0);
    LlOptions lo;
    lo.fdr_alpha = mk.params.alpha;
    lo.pool_state_pairs = mk.params.pool_states;
    LeadLagNetwork net = build_llsvn(obs, lo);
    write_artifact(a.out, [&](std::ostream& s) { export_llsvn(net, s); });

    nlohmann::json eff;
    eff["calendar"] = calendar_config_json(mk.cal_cfg);
    eff["leadlag"] = {{"dt1_s", a.dt1_s},
                      {"dt2_s", a.dt2_s},
                      {"rho0", mk.params.rho0},
                      {"fdr_alpha", mk.params.alpha},
                      {"min_active_slices", mk.params.min_active},
                      {"condition_on_joint_activity", a.joint},
                      {"seed", mk.params.seed},
                      {"community_restarts", mk.params.restarts},
                      {"pool_state_pairs", mk.params.pool_states}};
    RunManifest m = make_manifest("leadlag", eff, mk.params.seed);
    if (!a.config_path.empty()) m.add_input(a.config_path);
    m.add_input(a.input);
    m.outputs.push_back(a.out);
    m.wall_ms = timer.ms();
    write_manifest(m, a.out + ".manifest.json");
    std::cout << "wrote " << a.out << " (" << net.links.size() << " directed links, " << net.n_g1
              << "x" << net.n_g2 << " groups, " << obs.n_points << " alignment points)\n";
    return 0;
}

int cmd_sweep(const Args& a, const Flags& f) {
    WallTimer timer;
    nlohmann::json cfg = load_config_or_empty(a.config_path);
    CalendarConfig cal_cfg = calendar_config_from(cfg);
    SweepOptions so = sweep_options_from(cfg);
    if (given(f.t_in)) so.t_in_days = a.t_in_days;
    if (given(f.step)) so.window_step_days = a.step_days;
    if (given(f.grid_min)) so.grid_min_s = a.grid_min;
    if (given(f.grid_max)) so.grid_max_s = a.grid_max;
    if (given(f.grid_step)) so.grid_step_s = a.grid_step;
    if (given(f.rho0)) so.rho0 = a.rho0;
    if (given(f.alpha)) so.fdr_alpha = a.alpha;
    if (given(f.seed)) so.seed = a.seed;
    if (given(f.min_active)) so.min_active_slices = a.min_active;
    if (given(f.restarts)) so.community_restarts = a.restarts;
    if (given(f.pool_states)) so.pool_state_pairs = a.pool_states;
    so.threads = resolve_threads(f.threads, a.threads, cfg, so.threads);

    TradeSet ts = read_trades(a.input, build_calendar(cal_cfg));
    SweepResult res = run_sweep(ts, so);
    save_sweep(res, a.out);

    nlohmann::json eff;
    eff["calendar"] = calendar_config_json(cal_cfg);
    eff["sweep"] = sweep_options_json(so);
    RunManifest m = make_manifest("sweep", eff, so.seed);
    if (!a.config_path.empty()) m.add_input(a.config_path);
    m.add_input(a.input);
    m.outputs.push_back((fs::path(a.out) / "manifest.json").string());
    for (std::size_t w = 0; w < res.n_windows(); ++w) {
        m.outputs.push_back((fs::path(a.out) / ("cells_w" + std::to_string(w) + ".csv")).string());
    }
    m.outputs.push_back((fs::path(a.out) / "svn_summary.csv").string());
    m.wall_ms = timer.ms();
    write_manifest(m, fs::path(a.out) / "run_manifest.json");
    std::cout << "swept " << res.n_windows() << " windows x " << res.n_dt()
              << " timescales into " << a.out << '\n';
    return 0;
}

int cmd_asym(const Args& a, const Flags& f) {
    WallTimer timer;
    nlohmann::json cfg = load_config_or_empty(a.config_path);
    AsymmetryOptions ao = asymmetry_options_from(cfg);
    if (given(f.alpha)) ao.fdr_alpha = a.alpha;
    if (given(f.n_min)) ao.tstat.n_min = a.n_min;
    if (given(f.hac)) ao.tstat.hac = a.hac;

    std::string metric;
    if (a.metric == "links" || a.metric == "delta_w") {
        metric = "delta_w";
    } else if (a.metric == "rates" || a.metric == "delta_rho") {
        metric = "delta_rho";
    } else {
        throw ConfigError("unknown metric '" + a.metric + "' (expected links or rates)");
    }

    SweepResult res = load_sweep(a.sweep_dir);
    AsymmetryReport rep = asymmetry_report(res, ao);
    write_artifact(a.out, [&](std::ostream& s) { export_mugshot(rep, metric, s); });

    nlohmann::json eff;
    eff["asymmetry"] = asymmetry_options_json(ao);
    eff["metric"] = metric;
    RunManifest m = make_manifest("asym", eff, res.seed);
    if (!a.config_path.empty()) m.add_input(a.config_path);
    add_sweep_inputs(m, a.sweep_dir);
    m.outputs.push_back(a.out);
    m.wall_ms = timer.ms();
    write_manifest(m, a.out + ".manifest.json");
    std::cout << "wrote " << a.out << " (" << metric << " over " << rep.pairs.size()
              << " timescale pairs, " << rep.n_windows << " windows)\n";
    return 0;
}

int cmd_report(const Args& a) {
    WallTimer timer;
    SweepResult res = load_sweep(a.sweep_dir);
    write_artifact(a.out, [&](std::ostream& s) { write_sweep_report(res, s); });

    RunManifest m = make_manifest("report", nlohmann::json::object(), res.seed);
    add_sweep_inputs(m, a.sweep_dir);
    m.outputs.push_back(a.out);
    m.wall_ms = timer.ms();
    write_manifest(m, a.out + ".manifest.json");
    std::cout << "wrote " << a.out << " (" << res.n_dt() << " timescales, " << res.n_windows()
              << " windows)\n";
    return 0;
}

void add_config_flag(CLI::App* cmd, Args& a) {
    cmd->add_option("--config", a.config_path, "TOML or JSON config file")
        ->check(CLI::ExistingFile);
}

void add_io_flags(CLI::App* cmd, Args& a) {
    add_config_flag(cmd, a);
    cmd->add_option("--input", a.input, "trades CSV")->required()->check(CLI::ExistingFile);
    cmd->add_option("--out", a.out, "output file")->required();
}

void add_state_flags(CLI::App* cmd, Args& a, Flags& f) {
    f.rho0 = cmd->add_option("--rho0", a.rho0, "dead zone for the buy/sell sign rule");
}

void add_svn_flags(CLI::App* cmd, Args& a, Flags& f) {
    add_state_flags(cmd, a, f);
    f.alpha = cmd->add_option("--alpha", a.alpha, "false discovery rate for link validation");
    f.min_active = cmd->add_option("--min-active", a.min_active,
                                   "slices a trader must be active in to enter the network");
    cmd->add_flag("--joint", a.joint, "condition each test on joint activity slices only");
}

void add_group_flags(CLI::App* cmd, Args& a, Flags& f) {
    add_svn_flags(cmd, a, f);
    f.seed = cmd->add_option("--seed", a.seed, "seed for the community search");
    f.restarts = cmd->add_option("--restarts", a.restarts, "community search restarts");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"statistically validated trader networks and lead-lag asymmetry"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string("llsvn ") + std::string(kVersion));

    Args a;
    Flags f_synth, f_states, f_svn, f_groups, f_ll, f_sweep, f_asym;

    CLI::App* synth = app.add_subcommand("synth", "generate a synthetic market from [synth] config");
    add_config_flag(synth, a);
    synth->get_option("--config")->required();
    synth->add_option("--out", a.out, "trades CSV to write")->required();
    synth->add_option("--truth", a.truth_out, "also write planted ground truth JSON");
    f_synth.seed = synth->add_option("--seed", a.seed, "override the config seed");

    CLI::App* states = app.add_subcommand("states", "coarsen trades into per-slice trader states");
    add_io_flags(states, a);
    states->add_option("--dt", a.dt_s, "slice length in seconds")->required();
    add_state_flags(states, a, f_states);

    CLI::App* svn = app.add_subcommand("svn", "validate co-trading links at one timescale");
    add_io_flags(svn, a);
    svn->add_option("--dt", a.dt_s, "slice length in seconds")->required();
    add_svn_flags(svn, a, f_svn);

    CLI::App* groups = app.add_subcommand("groups", "detect trader groups in the validated network");
    add_io_flags(groups, a);
    groups->add_option("--dt", a.dt_s, "slice length in seconds")->required();
    add_group_flags(groups, a, f_groups);

    CLI::App* leadlag = app.add_subcommand("leadlag", "validate directed group links across two timescales");
    add_io_flags(leadlag, a);
    leadlag->add_option("--dt1", a.dt1_s, "past-interval length in seconds")->required();
    leadlag->add_option("--dt2", a.dt2_s, "future-interval length in seconds")->required();
    add_group_flags(leadlag, a, f_ll);
    f_ll.pool_states = leadlag->add_flag("--pool-states,!--no-pool-states", a.pool_states,
                                         "one FDR family across all state pairs");

    CLI::App* sweep = app.add_subcommand("sweep", "run the rolling-window timescale-grid sweep");
    add_io_flags(sweep, a);
    f_sweep.t_in = sweep->add_option("--t-in", a.t_in_days, "calibration window length in days");
    f_sweep.step = sweep->add_option("--step", a.step_days, "window step in days");
    f_sweep.grid_min = sweep->add_option("--grid-min", a.grid_min, "smallest timescale in seconds");
    f_sweep.grid_max = sweep->add_option("--grid-max", a.grid_max, "largest timescale in seconds");
    f_sweep.grid_step = sweep->add_option("--grid-step", a.grid_step, "grid step in seconds");
    add_svn_flags(sweep, a, f_sweep);
    f_sweep.seed = sweep->add_option("--seed", a.seed, "seed for the community searches");
    f_sweep.restarts = sweep->add_option("--restarts", a.restarts, "community search restarts");
    f_sweep.pool_states = sweep->add_flag("--pool-states,!--no-pool-states", a.pool_states,
                                          "one FDR family across all state pairs");
    f_sweep.threads = sweep->add_option(
        "--threads", a.threads, "worker threads (0 = all cores; default from LLSVN_THREADS)");

    CLI::App* asym = app.add_subcommand("asym", "timescale-asymmetry statistics from a sweep");
    add_config_flag(asym, a);
    asym->add_option("--sweep", a.sweep_dir, "sweep directory")
        ->required()
        ->check(CLI::ExistingDirectory);
    asym->add_option("--metric", a.metric, "links (link-count difference) or rates (activity-rate correlation difference)");
    asym->add_option("--out", a.out, "mugshot CSV to write")->required();
    f_asym.alpha = asym->add_option("--alpha", a.alpha, "false discovery rate across the grid");
    f_asym.n_min = asym->add_option("--n-min", a.n_min, "fewest windows for a t statistic");
    f_asym.hac = asym->add_flag("--hac", a.hac, "use the autocorrelation-robust variance directly");

    CLI::App* report = app.add_subcommand("report", "per-timescale summary of a finished sweep");
    report->add_option("--sweep", a.sweep_dir, "sweep directory")
        ->required()
        ->check(CLI::ExistingDirectory);
    report->add_option("--out", a.out, "summary CSV to write")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (app.got_subcommand(synth)) return cmd_synth(a, f_synth);
        if (app.got_subcommand(states)) return cmd_states(a, f_states);
        if (app.got_subcommand(svn)) return cmd_svn(a, f_svn);
        if (app.got_subcommand(groups)) return cmd_groups(a, f_groups);
        if (app.got_subcommand(leadlag)) return cmd_leadlag(a, f_ll);
        if (app.got_subcommand(sweep)) return cmd_sweep(a, f_sweep);
        if (app.got_subcommand(asym)) return cmd_asym(a, f_asym);
        if (app.got_subcommand(report)) return cmd_report(a);
        std::cerr << "llsvn: no subcommand\n";
        return 2;
    } catch (const ConfigError& e) {
        std::cerr << "llsvn: " << e.what() << '\n';
        return 3;
    } catch (const ParseError& e) {
        std::cerr << "llsvn: " << e.what() << '\n';
        return 3;
    } catch (const DataError& e) {
        std::cerr << "llsvn: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "llsvn: internal error: " << e.what() << '\n';
        return 4;
    }
}
