// phiotdr: coherent dual-polarization phi-OTDR simulator CLI
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "phiotdr/config.hpp"
#include "phiotdr/errors.hpp"
#include "phiotdr/experiments.hpp"
#include "phiotdr/io.hpp"

namespace {

using namespace phiotdr;

struct CommonOpts {
    std::string config_path;
    std::string out_dir;
    std::string schemes;
    std::string diff_mode;
    std::uint64_t seed = 0;
    bool seed_set = false;
    bool no_plots = false;
};

std::string default_out_dir() {
    const char* env = std::getenv("PHIOTDR_OUT_DIR");
    return env && *env ? env : "out";
}

void add_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--config", opts.config_path, "scenario config file (key = value)");
    cmd->add_option("--seed", opts.seed, "master seed override")
        ->each([&opts](const std::string&) { opts.seed_set = true; });
    cmd->add_option("--out", opts.out_dir, "output directory (default $PHIOTDR_OUT_DIR or ./out)");
    cmd->add_option("--schemes", opts.schemes, "comma list of probing schemes (siso,simo,mimo)");
    cmd->add_option("--diff-mode", opts.diff_mode, "phase differencing: temporal|spatial|none");
    cmd->add_flag("--no-plots", opts.no_plots, "skip SVG plot generation");
}

ScenarioConfig resolve_config(const CommonOpts& opts, SweepKind sweep) {
    ScenarioConfig cfg;
    if (!opts.config_path.empty()) cfg = parse_config(opts.config_path);
    // a grid from the config file only applies when it targeted this sweep
    if (cfg.sweep != sweep) cfg.sweep_grid.clear();
    cfg.sweep = sweep;
    if (opts.seed_set) cfg.master_seed = opts.seed;
    if (!opts.schemes.empty()) apply_config_entry(cfg, "schemes", opts.schemes, "--schemes");
    if (!opts.diff_mode.empty()) apply_config_entry(cfg, "diff_mode", opts.diff_mode, "--diff-mode");
    if (cfg.name == "scenario") cfg.name = sweep_name(sweep);
    finalize_config(cfg);
    return cfg;
}

int run_sim(const CommonOpts& opts, SweepKind sweep, bool dump_channels) {
    const ScenarioConfig cfg = resolve_config(opts, sweep);
    const std::string out_dir = opts.out_dir.empty() ? default_out_dir() : opts.out_dir;
    preflight_output_dir(out_dir);

    ScenarioResult result;
    ObservationSet capture;
    if (sweep == SweepKind::DistanceProfile && dump_channels)
        result = run_distance_profile(cfg, &capture);
    else
        result = run_scenario(cfg);

    const auto written = emit_outputs(result, cfg, out_dir, opts.no_plots);
    for (const auto& f : written) std::cout << f << "\n";
    if (dump_channels && capture.n_segments > 0) {
        const std::string path =
            (std::filesystem::path(out_dir) / (cfg.name + "_channels.csv")).string();
        write_measured_csv(capture, path);
        std::cout << path << "\n";
    }
    return 0;
}

int run_ingest(const std::string& input, const CommonOpts& opts, double dt_s,
               double segment_length_m, int simo_column) {
    std::vector<ProbeScheme> schemes = {ProbeScheme::Siso, ProbeScheme::Simo, ProbeScheme::Mimo};
    if (!opts.schemes.empty()) {
        ScenarioConfig tmp;
        apply_config_entry(tmp, "schemes", opts.schemes, "--schemes");
        schemes = tmp.schemes;
    }
    DiffMode mode = DiffMode::Temporal;
    if (!opts.diff_mode.empty()) mode = diff_mode_from_name(opts.diff_mode);
    if (dt_s <= 0.0) throw ConfigError("--dt must be positive");
    if (segment_length_m <= 0.0) throw ConfigError("--segment-length must be positive");
    if (simo_column != 1 && simo_column != 2) throw ConfigError("--simo-column must be 1 or 2");

    const std::string out_dir = opts.out_dir.empty() ? default_out_dir() : opts.out_dir;
    preflight_output_dir(out_dir);

    const MeasuredSeries series = ingest_measured(input);
    std::vector<double> z_m;
    for (int i = 0; i < series.n_segments; ++i) z_m.push_back((i + 0.5) * segment_length_m);

    const std::string stem = std::filesystem::path(input).stem().string();
    for (ProbeScheme scheme : schemes) {
        const PhaseTrace trace = estimate_from_measured(series, scheme, dt_s, simo_column);
        const StdvProfile profile = temporal_stdv(differential(trace, mode), mode);
        const std::string path =
            (std::filesystem::path(out_dir) /
             (stem + "_" + scheme_name(scheme) + "_profile.csv"))
                .string();
        write_profile_csv(profile, z_m, path);
        std::cout << path << "\n";
        if (!opts.no_plots) {
            PlotSeries ps{scheme_name(scheme), z_m, profile.per_segment_stdv};
            const std::string svg =
                (std::filesystem::path(out_dir) /
                 (stem + "_" + scheme_name(scheme) + "_profile.svg"))
                    .string();
            write_svg_plot(svg, stem + " " + scheme_name(scheme), "z_m", "stdv_rad", {ps});
            std::cout << svg << "\n";
        }
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"coherent dual-polarization phi-OTDR simulator"};
    app.require_subcommand(1);

    CommonOpts sweep_opts, cap_opts, prof_opts, mc_opts, ing_opts;
    bool dump_channels = false;
    std::string ingest_input;
    double ingest_dt = 160e-6, ingest_seg_len = 10.0;
    int ingest_simo_column = 1;

    CLI::App* sweep = app.add_subcommand(
        "sweep-theta", "StDv of one fixed segment versus the launch misalignment angle");
    add_common(sweep, sweep_opts);

    CLI::App* cap = app.add_subcommand(
        "sweep-theta-cap", "SIMO column sum and StDv versus the segment rotation angle");
    add_common(cap, cap_opts);

    CLI::App* prof =
        app.add_subcommand("profile", "per-segment StDv profile for one fiber realization");
    add_common(prof, prof_opts);
    prof->add_flag("--dump-channels", dump_channels,
                   "also export the raw per-sample channel estimates");

    CLI::App* mc =
        app.add_subcommand("monte-carlo", "mean StDv profile over independent fiber draws");
    add_common(mc, mc_opts);

    CLI::App* ing =
        app.add_subcommand("ingest", "recompute StDv profiles from exported channel estimates");
    ing->add_option("input", ingest_input, "measured channel-estimate CSV")->required();
    add_common(ing, ing_opts);
    ing->add_option("--dt", ingest_dt, "sample interval of the measured series [s]");
    ing->add_option("--segment-length", ingest_seg_len, "segment length for the z axis [m]");
    ing->add_option("--simo-column", ingest_simo_column, "SIMO column (1 or 2)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return phiotdr::ConfigError::exit_code;
    }

    try {
        if (sweep->parsed()) return run_sim(sweep_opts, SweepKind::ThetaMis, false);
        if (cap->parsed()) return run_sim(cap_opts, SweepKind::ThetaCap, false);
        if (prof->parsed()) return run_sim(prof_opts, SweepKind::DistanceProfile, dump_channels);
        if (mc->parsed()) return run_sim(mc_opts, SweepKind::MonteCarlo, false);
        if (ing->parsed())
            return run_ingest(ingest_input, ing_opts, ingest_dt, ingest_seg_len,
                              ingest_simo_column);
    } catch (const phiotdr::ConfigError& e) {
        std::cerr << phiotdr::ConfigError::code << ": " << e.what() << "\n";
        return phiotdr::ConfigError::exit_code;
    } catch (const phiotdr::DataError& e) {
        std::cerr << phiotdr::DataError::code << ": " << e.what() << "\n";
        return phiotdr::DataError::exit_code;
    } catch (const phiotdr::IoError& e) {
        std::cerr << phiotdr::IoError::code << ": " << e.what() << "\n";
        return phiotdr::IoError::exit_code;
    } catch (const std::exception& e) {
        std::cerr << "E_CONFIG: " << e.what() << "\n";
        return phiotdr::ConfigError::exit_code;
    }
    return 0;
}
