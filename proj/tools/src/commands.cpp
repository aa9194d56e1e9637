#include "scmra_cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>

#include <Eigen/SVD>

#include "scmra/analytics.hpp"
#include "scmra/channel.hpp"
#include "scmra/error.hpp"
#include "scmra/metrics.hpp"
#include "scmra/units.hpp"
#include "scmra_cli/artifacts.hpp"

#ifndef SCMRA_VERSION
#define SCMRA_VERSION "unknown"
#endif

namespace scmra::cli {

namespace fs = std::filesystem;

namespace {

constexpr double kSetupCdfPoint = 10.0;  // symbols
constexpr int kFixedPointIterations = 100000;

double db(double lin) { return linear_to_db(lin); }

std::vector<double> db_to_linear_all(const std::vector<double>& v) {
    std::vector<double> out;
    for (double x : v) out.push_back(db_to_linear(x));
    return out;
}

// Iterates the rank-1 recursion until it stops moving; cross-checks the closed form.
double iterate_fixed_point(double s, int n) {
    std::vector<double> snr{s / n};
    for (int i = 0; i < kFixedPointIterations; ++i) {
        auto next = snr_recursion_step(snr, {s}, n);
        if (std::abs(next[0] - snr[0]) <= 1e-15 * std::max(1.0, snr[0])) return next[0];
        snr = next;
    }
    return snr[0];
}

void add_trajectory(CsvTable& t, const std::string& name, const SnrTrajectory& traj) {
    for (std::size_t k = 0; k < traj.snr.size(); ++k) {
        for (std::size_t j = 0; j < traj.rank(); ++j) {
            const double v = traj.snr[k][j];
            t.row()
                .add(name)
                .add(static_cast<long long>(j + 1))
                .add(db(traj.snr_max[j]))
                .add(static_cast<long long>(k + 1))
                .add(v)
                .add(db(v));
        }
    }
}

void write_event_log_header(std::ostream& os, const std::string& hash) {
    nlohmann::ordered_json h;
    h["kind"] = "header";
    h["format_version"] = kFormatVersion;
    h["manifest_hash"] = hash;
    os << h.dump() << '\n';
}

void add_per_row(CsvTable& t, const PerEstimate& e) {
    const bool has_setup = !e.setup_symbols.empty();
    t.add(e.per)
        .add(e.ci.low)
        .add(e.ci.high)
        .add(static_cast<long long>(e.n_packets))
        .add(static_cast<long long>(e.n_errors))
        .add(static_cast<long long>(e.episodes))
        .add(has_setup ? median(e.setup_symbols) : std::nan(""))
        .add(empirical_cdf(e.setup_symbols, kSetupCdfPoint))
        .add(e.fully_decoded_rate())
        .add(e.ber())
        .add(static_cast<long long>(e.false_alarms));
}

const std::vector<std::string> kPerColumns{"per",          "ci_low",       "ci_high",
                                           "n_packets",    "n_errors",     "episodes",
                                           "setup_median", "setup_cdf_10", "fully_decoded_rate",
                                           "ber",          "false_alarms"};

std::vector<std::string> concat(std::vector<std::string> a, const std::vector<std::string>& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

}  // namespace

const std::vector<std::string>& command_names() {
    static const std::vector<std::string> names{"analyze", "simulate", "linkbudget", "sweep"};
    return names;
}

int workers_from_env() {
    const char* v = std::getenv("SCMRA_WORKERS");
    if (!v || !*v) return 1;
    char* end = nullptr;
    const long n = std::strtol(v, &end, 10);
    if (*end != '\0' || n < 1 || n > 1024) throw Error("SCMRA_WORKERS: expected an integer in [1, 1024]");
    return static_cast<int>(n);
}

void run_analyze(const SimConfig& cfg, const fs::path& out, const std::string& hash) {
    const int n = cfg.analysis_bs_elements;
    const int horizon = cfg.analysis_horizon;

    CsvTable traj({"case", "direction", "snr_max_db", "k", "snr_linear", "snr_db"}, hash);
    CsvTable fixed({"snr_max_db", "bs_elements", "bootstrap_db", "fixed_point_linear", "fixed_point_db",
                    "iterated_fixed_point_db", "convergence_step", "decision_snr_db"},
                   hash);
    for (double s_db : cfg.analysis_snr_max_db) {
        const double s = db_to_linear(s_db);
        const double boot = bootstrap_snr(s, n);
        const double fp = rank1_fixed_point(s, n);
        const auto t = snr_trajectory({s}, n, {boot}, horizon);
        add_trajectory(traj, "rank1", t);
        add_trajectory(traj, "rank1_low_init", snr_trajectory({s}, n, {boot / n}, horizon));
        const int conv = convergence_step(t, fp, 0.1);
        fixed.row()
            .add(s_db)
            .add(n)
            .add(db(boot))
            .add(fp)
            .add(db(fp))
            .add(db(iterate_fixed_point(s, n)))
            .add(conv < 0 ? -1 : conv + 1)
            .add(db(decision_snr(cfg.p_tx_w(), cfg.p_scout_w(), s)));
    }
    const auto s3 = db_to_linear_all(cfg.analysis_rank3_snr_max_db);
    std::vector<double> init;
    for (double s : s3) init.push_back(bootstrap_snr(s, n));
    add_trajectory(traj, "rank" + std::to_string(s3.size()), snr_trajectory(s3, n, init, horizon));

    traj.write(out / "trajectories.csv");
    fixed.write(out / "fixed_points.csv");
}

void run_linkbudget(const SimConfig& cfg, const fs::path& out, const std::string& hash) {
    const double d = cfg.link_distance_m;
    const auto noise = cfg.noise();
    const double gbs = db_to_linear(cfg.bs_element_gain_db);
    const double gscm = db_to_linear(cfg.scm_cell_gain_db);
    const int n = cfg.bs_rows * cfg.bs_cols;
    const int m = cfg.scm_rows * cfg.scm_cols;
    const double g = cfg.g_amplitude();

    const double fs_snr = free_space_snr(cfg.p_tx_w(), g, n, m, gbs, gscm, cfg.wavelength(), d, noise.sigma_sq);

    // Broadside UE: top eigenvalue of A = g H^H H is g sigma_1(H)^2.
    const auto h = los_channel(cfg.bs_geometry(), cfg.scm_geometry(Point3(0.0, 0.0, d)), cfg.wavelength(), gbs, gscm);
    Eigen::BDCSVD<ComplexMatrix> svd(h.h);
    const double s1 = svd.singularValues()(0);
    const double lambda1 = g * s1 * s1;
    const double ch_snr = cfg.p_tx_w() * lambda1 * lambda1 / noise.sigma_sq;
    const double scout = cfg.p_scout_w() * lambda1 * lambda1 / noise.sigma_sq;

    CsvTable t({"distance_m", "free_space_snr_db", "channel_snr_db", "relative_difference", "scout_snr_max_db",
                "bootstrap_snr_db", "decision_snr_db", "fixed_point_db", "noise_variance_w"},
               hash);
    t.row()
        .add(d)
        .add(db(fs_snr))
        .add(db(ch_snr))
        .add(std::abs(fs_snr - ch_snr) / ch_snr)
        .add(db(scout))
        .add(db(bootstrap_snr(scout, n)))
        .add(db(decision_snr(cfg.p_tx_w(), cfg.p_scout_w(), scout)))
        .add(db(rank1_fixed_point(scout, n)))
        .add(noise.sigma_sq);
    t.write(out / "linkbudget.csv");
}

void run_simulate(const SimConfig& cfg, std::uint64_t seed, int workers, const fs::path& out,
                  const std::string& hash) {
    CsvTable per(concat({"g_offered"}, kPerColumns), hash);
    CsvTable setup({"g_offered", "setup_symbols", "count", "cdf"}, hash);
    std::ofstream events(out / "events.ndjson", std::ios::binary | std::ios::trunc);
    if (!events) throw Error("cannot write events.ndjson");
    write_event_log_header(events, hash);

    for (double g : cfg.offered_traffic_sweep) {
        SimConfig c = cfg;
        c.offered_traffic = g;
        EventLog log;
        const auto est = monte_carlo_per(c, seed, c.stop_errors, workers, &log);
        per.row().add(g);
        add_per_row(per, est);

        std::map<std::int64_t, long long> hist;
        for (auto s : est.setup_symbols) ++hist[s];
        long long cum = 0;
        for (const auto& [s, count] : hist) {
            cum += count;
            setup.row().add(g).add(static_cast<long long>(s)).add(count).add(
                static_cast<double>(cum) / static_cast<double>(est.setup_symbols.size()));
        }

        nlohmann::ordered_json marker;
        marker["kind"] = "episode";
        marker["offered_traffic"] = g;
        marker["episode"] = 0;
        marker["warmup"] = log.warmup;
        marker["horizon"] = log.horizon;
        events << marker.dump() << '\n';
        write_ndjson(events, log);
    }
    per.write(out / "per.csv");
    setup.write(out / "setup_time.csv");
    if (!events) throw Error("write failed for events.ndjson");
}

void run_sweep(const SimConfig& cfg, std::uint64_t seed, int workers, const fs::path& out, const std::string& hash) {
    CsvTable t(concat({"parameter", "value", "g_offered"}, kPerColumns), hash);
    for (double v : cfg.sweep_values) {
        SimConfig c = cfg;
        set_config_value(c, cfg.sweep_parameter, v);
        validate(c);
        const auto est = monte_carlo_per(c, seed, c.stop_errors, workers);
        t.row().add(cfg.sweep_parameter).add(v).add(c.offered_traffic);
        add_per_row(t, est);
    }
    t.write(out / "sweep.csv");
}

void run_command(const ExperimentSpec& spec) {
    const auto& names = command_names();
    if (std::find(names.begin(), names.end(), spec.command) == names.end())
        throw Error("unknown command '" + spec.command + "'");

    std::vector<Override> overrides;
    for (const auto& o : spec.overrides) overrides.push_back(parse_override(o));
    const SimConfig cfg = load_config(spec.config.string(), overrides);

    std::error_code ec;
    fs::create_directories(spec.out, ec);
    if (ec) throw Error("cannot create output directory '" + spec.out.string() + "': " + ec.message());

    // The worker count is left out on purpose: results do not depend on it.
    nlohmann::ordered_json manifest;
    manifest["format_version"] = kFormatVersion;
    manifest["tool"] = "scmra";
    manifest["version"] = SCMRA_VERSION;
    manifest["command"] = spec.command;
    manifest["seed"] = spec.seed;
    manifest["overrides"] = spec.overrides;
    manifest["config"] = config_to_json(cfg);
    const std::string hash = write_manifest(spec.out, manifest);

    if (spec.command == "analyze") {
        run_analyze(cfg, spec.out, hash);
    } else if (spec.command == "linkbudget") {
        run_linkbudget(cfg, spec.out, hash);
    } else if (spec.command == "simulate") {
        run_simulate(cfg, spec.seed, spec.workers, spec.out, hash);
    } else {
        run_sweep(cfg, spec.seed, spec.workers, spec.out, hash);
    }
}

}  // namespace scmra::cli
