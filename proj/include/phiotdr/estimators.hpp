#ifndef PHIOTDR_ESTIMATORS_HPP
#define PHIOTDR_ESTIMATORS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "phiotdr/fiber.hpp"
#include "phiotdr/jones.hpp"
#include "phiotdr/noise.hpp"

namespace phiotdr {

enum class ProbeScheme { Siso, Simo, Mimo };

const char* scheme_name(ProbeScheme s);
ProbeScheme scheme_from_name(const std::string& name);

// Phase defined modulo pi for MIMO (half-angle of the determinant),
// modulo 2*pi otherwise.
double phase_modulus(ProbeScheme s);

struct PhaseSample {
    double value = 0.0;
    bool faded = false;  // operand magnitude below the floor
};

// 0.5 * angle(det H), in (-pi/2, pi/2]
PhaseSample phase_mimo(const JonesMatrix& h, double mag_floor = 0.0);

// angle(h_xx + h_yx)
PhaseSample phase_simo(Complex h_xx, Complex h_yx, double mag_floor = 0.0);

// angle(h_xx)
PhaseSample phase_siso(Complex h_xx, double mag_floor = 0.0);

// Closed-form SIMO phase of a segment at theta_mis = 0, the expanded
// column sum: angle(A p (cos2b (e^{j2g} cos2T - sin2T) + j sin2b e^{j2g}))
PhaseSample simo_closed_form(const SegmentParams& seg, double mag_floor = 0.0);

// Adjusts consecutive differences by multiples of the modulus so each lies
// in (-modulus/2, modulus/2]; first element unchanged.
std::vector<double> unwrap(const std::vector<double>& values, double modulus);

struct PhaseTrace {
    ProbeScheme scheme = ProbeScheme::Mimo;
    int n_segments = 0;
    int n_samples = 0;
    double dt_s = 0.0;
    std::vector<double> values;        // [segment * n_samples + t], unwrapped
    std::vector<std::uint8_t> flags;   // same layout, 1 = faded sample
    std::vector<std::uint8_t> unreliable;  // per segment, flagged fraction > 1/2

    double& at(int seg, int t) { return values[static_cast<std::size_t>(seg) * n_samples + t]; }
    double at(int seg, int t) const {
        return values[static_cast<std::size_t>(seg) * n_samples + t];
    }
};

enum class ExecPolicy { Serial, Parallel };

// Raw per-sample channel observations, [segment * n_samples + t].
struct ObservationSet {
    int n_segments = 0;
    int n_samples = 0;
    std::vector<JonesMatrix> values;
};

// Simulates the full observation pipeline and runs all requested estimators
// on the shared per-sample channel observations.  Deterministic: each segment
// consumes its own substream of noise_seed, so Serial and Parallel produce
// identical traces.
std::vector<PhaseTrace> estimate_traces(const FiberRealization& fiber, const LaserWalk& walk,
                                        const std::vector<double>& theta_series,
                                        const NoiseConfig& cfg, std::uint64_t noise_seed,
                                        const std::vector<ProbeScheme>& schemes,
                                        int simo_column = 1,
                                        ExecPolicy policy = ExecPolicy::Parallel,
                                        ObservationSet* capture = nullptr);

PhaseTrace estimate_trace(const FiberRealization& fiber, const LaserWalk& walk,
                          const std::vector<double>& theta_series, const NoiseConfig& cfg,
                          std::uint64_t noise_seed, ProbeScheme scheme, int simo_column = 1,
                          ExecPolicy policy = ExecPolicy::Parallel);

// segment_index,time_index,value,flag
void write_trace_csv(const PhaseTrace& trace, const std::string& path);

}  // namespace phiotdr

#endif
