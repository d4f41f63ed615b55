#ifndef PHIOTDR_EXPERIMENTS_HPP
#define PHIOTDR_EXPERIMENTS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "phiotdr/fiber.hpp"
#include "phiotdr/metrics.hpp"
#include "phiotdr/noise.hpp"

namespace phiotdr {

enum class SweepKind { ThetaMis, ThetaCap, DistanceProfile, MonteCarlo };

const char* sweep_name(SweepKind k);
SweepKind sweep_from_name(const std::string& name);

// Fixed per-segment angles used by the single-segment sweeps.  The defaults
// place an exact SISO fade at theta = -7pi/8 and an exact SIMO fade at
// theta = -pi/8, both on the default 64-point misalignment grid, so the
// single-input schemes show their worst case.
struct AnglePreset {
    double theta_cap = 0.9035987897138955;
    double beta = -0.15828241204904936;
    double gamma = -2.045848628519226;
    double theta_mis = 0.0;
};

struct ScenarioConfig {
    std::string name = "scenario";
    FiberSpec fiber;
    NoiseConfig noise;
    std::vector<ProbeScheme> schemes = {ProbeScheme::Siso, ProbeScheme::Simo,
                                        ProbeScheme::Mimo};
    SweepKind sweep = SweepKind::DistanceProfile;
    std::vector<double> sweep_grid;
    int n_fibers = 1;
    std::uint64_t master_seed = 1;
    DiffMode diff_mode = DiffMode::Temporal;
    AnglePreset preset;
    int simo_column = 1;
    void validate() const;
};

// Long-format result table, one row per observation.  Cells are preformatted
// so CSV emission is byte-deterministic.
struct ResultTable {
    std::string name;
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
};

struct RunSeeds {
    std::uint64_t fiber_seed;
    std::uint64_t noise_seed;
    std::uint64_t theta_seed;
};

// Documented fan-out: any single run is re-derivable from (master, run index).
RunSeeds derive_seeds(std::uint64_t master_seed, int run_index);

struct ScenarioResult {
    std::vector<ResultTable> tables;
    // populated by the profile/monte-carlo runners for downstream checks
    std::vector<double> z_m;
    std::vector<double> backscatter_mag;  // |A_i p_i| of the last fiber
};

// Fig 1a shape: one fixed segment, StDv versus the misalignment angle.
// columns: theta, scheme, stdv
ScenarioResult run_theta_mis_sweep(const ScenarioConfig& cfg);

// Fig 2 shape: noiseless Re/Im of the SIMO column sum plus the simulated
// SIMO StDv versus the segment rotation angle.
// columns: theta_cap, re_sum, im_sum, stdv_simo
ScenarioResult run_theta_cap_sweep(const ScenarioConfig& cfg);

// Fig 1b shape: per-segment StDv for one fiber realization.
// columns: z_m, scheme, stdv, unreliable
// capture, when given, receives the raw per-sample channel observations.
ScenarioResult run_distance_profile(const ScenarioConfig& cfg,
                                    ObservationSet* capture = nullptr);

// Fig 1c shape: per-segment mean StDv over independent fibers.
// columns: z_m, scheme, mean_stdv
ScenarioResult run_monte_carlo(const ScenarioConfig& cfg);

ScenarioResult run_scenario(const ScenarioConfig& cfg);

}  // namespace phiotdr

#endif
