#include "phiotdr/experiments.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace phiotdr {

namespace {

// stream index reserved for the shared laser walk; segment streams use the
// segment index, which stays far below this
constexpr std::uint64_t kWalkStream = 0x57414C4BULL << 32;
constexpr std::uint64_t kTheta0Stream = 0;
constexpr std::uint64_t kJitterStream = 1;

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

LaserWalk make_walk(const NoiseConfig& noise, const FiberSpec& spec, std::uint64_t noise_seed) {
    RngStream rng = RngStream::substream(noise_seed, kWalkStream);
    const double max_tau = 2.0 * spec.length_m * spec.group_index / kSpeedOfLight;
    return laser_walk(noise.linewidth_hz, noise.dt_s, noise.n_samples, rng, max_tau + noise.dt_s);
}

FiberRealization single_segment_fiber(const ScenarioConfig& cfg, std::uint64_t fiber_seed,
                                      double theta_cap) {
    FiberSpec spec = cfg.fiber;
    spec.length_m = spec.segment_length_m;
    FiberRealization fiber{spec, fiber_seed, {}};
    RngStream rng = RngStream::substream(fiber_seed, 0);
    SegmentParams seg;
    seg.theta_cap = theta_cap;
    seg.beta = cfg.preset.beta;
    seg.gamma = cfg.preset.gamma;
    seg.phasor = sample_phasor(spec.scatterers_per_segment, rng);
    seg.z_m = 0.5 * spec.segment_length_m;
    seg.attenuation = std::pow(10.0, -spec.alpha_db_per_km * (2.0 * seg.z_m / 1000.0) / 20.0);
    seg.tau_s = 2.0 * seg.z_m * spec.group_index / kSpeedOfLight;
    fiber.segments.push_back(seg);
    return fiber;
}

StdvProfile profile_for(const PhaseTrace& trace, DiffMode mode) {
    return temporal_stdv(differential(trace, mode), mode);
}

}  // namespace

const char* sweep_name(SweepKind k) {
    switch (k) {
        case SweepKind::ThetaMis: return "theta_mis";
        case SweepKind::ThetaCap: return "theta_cap";
        case SweepKind::DistanceProfile: return "distance_profile";
        case SweepKind::MonteCarlo: return "monte_carlo";
    }
    return "?";
}

SweepKind sweep_from_name(const std::string& name) {
    if (name == "theta_mis") return SweepKind::ThetaMis;
    if (name == "theta_cap") return SweepKind::ThetaCap;
    if (name == "distance_profile") return SweepKind::DistanceProfile;
    if (name == "monte_carlo") return SweepKind::MonteCarlo;
    throw std::invalid_argument("unknown sweep kind: " + name);
}

void ScenarioConfig::validate() const {
    fiber.validate();
    noise.validate();
    if (schemes.empty()) throw std::invalid_argument("at least one probing scheme required");
    if ((sweep == SweepKind::ThetaMis || sweep == SweepKind::ThetaCap) && sweep_grid.empty())
        throw std::invalid_argument("sweep scenarios require a nonempty grid");
    if (n_fibers < 1) throw std::invalid_argument("n_fibers must be >= 1");
    if (simo_column != 1 && simo_column != 2)
        throw std::invalid_argument("simo column must be 1 or 2");
}

RunSeeds derive_seeds(std::uint64_t master_seed, int run_index) {
    const std::uint64_t base = static_cast<std::uint64_t>(run_index) * 3;
    return RunSeeds{mix_seed(master_seed, base), mix_seed(master_seed, base + 1),
                    mix_seed(master_seed, base + 2)};
}

ScenarioResult run_theta_mis_sweep(const ScenarioConfig& cfg) {
    cfg.validate();
    const RunSeeds seeds = derive_seeds(cfg.master_seed, 0);
    const FiberRealization fiber = single_segment_fiber(cfg, seeds.fiber_seed, cfg.preset.theta_cap);

    ScenarioResult res;
    ResultTable table{"theta_sweep", {"theta", "scheme", "stdv"}, {}};
    for (std::size_t k = 0; k < cfg.sweep_grid.size(); ++k) {
        const double theta = cfg.sweep_grid[k];
        const std::uint64_t point_seed = mix_seed(seeds.noise_seed, k);
        const LaserWalk walk = make_walk(cfg.noise, fiber.spec, point_seed);
        const std::vector<double> theta_series(static_cast<std::size_t>(cfg.noise.n_samples),
                                               theta);
        const auto traces = estimate_traces(fiber, walk, theta_series, cfg.noise, point_seed,
                                            cfg.schemes, cfg.simo_column);
        for (const auto& tr : traces) {
            const StdvProfile prof = profile_for(tr, cfg.diff_mode);
            table.rows.push_back({fmt(theta), scheme_name(tr.scheme),
                                  fmt(prof.per_segment_stdv[0])});
        }
    }
    res.tables.push_back(std::move(table));
    return res;
}

ScenarioResult run_theta_cap_sweep(const ScenarioConfig& cfg) {
    cfg.validate();
    const RunSeeds seeds = derive_seeds(cfg.master_seed, 0);

    ScenarioResult res;
    ResultTable table{"theta_cap_sweep", {"theta_cap", "re_sum", "im_sum", "stdv_simo"}, {}};
    for (std::size_t k = 0; k < cfg.sweep_grid.size(); ++k) {
        const double theta_cap = cfg.sweep_grid[k];
        const FiberRealization fiber = single_segment_fiber(cfg, seeds.fiber_seed, theta_cap);
        const SegmentParams& seg = fiber.segments[0];

        // noiseless column sum, misalignment included
        const JonesMatrix h = backscatter_matrix(seg, cfg.preset.theta_mis);
        const Complex sum = cfg.simo_column == 2 ? h.xy + h.yy : h.xx + h.yx;

        const std::uint64_t point_seed = mix_seed(seeds.noise_seed, k);
        const LaserWalk walk = make_walk(cfg.noise, fiber.spec, point_seed);
        const std::vector<double> theta_series(static_cast<std::size_t>(cfg.noise.n_samples),
                                               cfg.preset.theta_mis);
        const PhaseTrace trace = estimate_trace(fiber, walk, theta_series, cfg.noise,
                                                point_seed, ProbeScheme::Simo, cfg.simo_column);
        const StdvProfile prof = profile_for(trace, cfg.diff_mode);
        table.rows.push_back(
            {fmt(theta_cap), fmt(sum.real()), fmt(sum.imag()), fmt(prof.per_segment_stdv[0])});
    }
    res.tables.push_back(std::move(table));
    return res;
}

namespace {

// Shared by the profile and monte-carlo runners so that a one-fiber
// monte-carlo is identical to a profile run with the same seeds.
struct FiberRun {
    FiberRealization fiber;
    std::vector<StdvProfile> profiles;  // one per requested scheme
};

FiberRun run_one_fiber(const ScenarioConfig& cfg, int run_index,
                       ObservationSet* capture = nullptr) {
    const RunSeeds seeds = derive_seeds(cfg.master_seed, run_index);
    FiberRun run{sample_fiber(cfg.fiber, seeds.fiber_seed), {}};

    RngStream theta0_rng = RngStream::substream(seeds.theta_seed, kTheta0Stream);
    const double theta0 = theta0_rng.uniform(-M_PI, M_PI);
    RngStream jitter_rng = RngStream::substream(seeds.theta_seed, kJitterStream);
    const std::vector<double> theta_series = theta_trajectory(theta0, cfg.noise, jitter_rng);

    const LaserWalk walk = make_walk(cfg.noise, cfg.fiber, seeds.noise_seed);
    const auto traces = estimate_traces(run.fiber, walk, theta_series, cfg.noise,
                                        seeds.noise_seed, cfg.schemes, cfg.simo_column,
                                        ExecPolicy::Parallel, capture);
    for (const auto& tr : traces) run.profiles.push_back(profile_for(tr, cfg.diff_mode));
    return run;
}

void fill_fiber_metadata(ScenarioResult& res, const FiberRealization& fiber) {
    res.z_m.clear();
    res.backscatter_mag.clear();
    for (const auto& seg : fiber.segments) {
        res.z_m.push_back(seg.z_m);
        res.backscatter_mag.push_back(seg.attenuation * std::abs(seg.phasor));
    }
}

}  // namespace

ScenarioResult run_distance_profile(const ScenarioConfig& cfg, ObservationSet* capture) {
    cfg.validate();
    FiberRun run = run_one_fiber(cfg, 0, capture);

    ScenarioResult res;
    fill_fiber_metadata(res, run.fiber);
    ResultTable table{"distance_profile", {"z_m", "scheme", "stdv", "unreliable"}, {}};
    for (const auto& prof : run.profiles)
        for (std::size_t i = 0; i < prof.per_segment_stdv.size(); ++i)
            table.rows.push_back({fmt(res.z_m[i]), scheme_name(prof.scheme),
                                  fmt(prof.per_segment_stdv[i]),
                                  prof.unreliable[i] ? "1" : "0"});
    res.tables.push_back(std::move(table));
    return res;
}

ScenarioResult run_monte_carlo(const ScenarioConfig& cfg) {
    cfg.validate();
    std::vector<std::vector<StdvProfile>> per_scheme(cfg.schemes.size());

    ScenarioResult res;
    for (int f = 0; f < cfg.n_fibers; ++f) {
        FiberRun run = run_one_fiber(cfg, f);
        for (std::size_t s = 0; s < run.profiles.size(); ++s)
            per_scheme[s].push_back(std::move(run.profiles[s]));
        if (f == cfg.n_fibers - 1) fill_fiber_metadata(res, run.fiber);
    }

    ResultTable table{"monte_carlo", {"z_m", "scheme", "mean_stdv"}, {}};
    for (const auto& profiles : per_scheme) {
        const StdvProfile mean = aggregate_mean(profiles);
        for (std::size_t i = 0; i < mean.per_segment_stdv.size(); ++i)
            table.rows.push_back(
                {fmt(res.z_m[i]), scheme_name(mean.scheme), fmt(mean.per_segment_stdv[i])});
    }
    res.tables.push_back(std::move(table));
    return res;
}

ScenarioResult run_scenario(const ScenarioConfig& cfg) {
    switch (cfg.sweep) {
        case SweepKind::ThetaMis: return run_theta_mis_sweep(cfg);
        case SweepKind::ThetaCap: return run_theta_cap_sweep(cfg);
        case SweepKind::DistanceProfile: return run_distance_profile(cfg);
        case SweepKind::MonteCarlo: return run_monte_carlo(cfg);
    }
    throw std::invalid_argument("unknown sweep kind");
}

}  // namespace phiotdr
