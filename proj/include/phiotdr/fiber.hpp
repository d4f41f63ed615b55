#ifndef PHIOTDR_FIBER_HPP
#define PHIOTDR_FIBER_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "phiotdr/jones.hpp"
#include "phiotdr/rng.hpp"

namespace phiotdr {

inline constexpr double kSpeedOfLight = 299792458.0;  // m/s

struct FiberSpec {
    double length_m = 25000.0;
    double segment_length_m = 10.0;  // spatial resolution
    double alpha_db_per_km = 0.2;    // one-way power attenuation
    int scatterers_per_segment = 20;
    double group_index = 1.468;

    int segment_count() const {
        return static_cast<int>(length_m / segment_length_m);
    }
    void validate() const;
};

// One spatial segment's random draw.
struct SegmentParams {
    double theta_cap = 0.0;    // rotation angle, arcsin(sqrt(xi))
    double beta = 0.0;         // retardance, launch-side
    double gamma = 0.0;        // retardance, far-side
    double attenuation = 1.0;  // round-trip amplitude factor
    Complex phasor{1.0, 0.0};  // aggregate reflection coefficient
    double z_m = 0.0;          // segment center
    double tau_s = 0.0;        // round-trip delay
};

struct FiberRealization {
    FiberSpec spec;
    std::uint64_t seed = 0;
    std::vector<SegmentParams> segments;
};

// Normalized sum of K Rayleigh-amplitude, uniform-phase scatterers.
// E[|p|^2] = 1.
Complex sample_phasor(int scatterers, RngStream& rng);

// Deterministic for a given (spec, seed): every segment uses its own
// substream keyed by segment index.
FiberRealization sample_fiber(const FiberSpec& spec, std::uint64_t seed);

// U = D_beta * R_theta_cap * D_gamma, det = 1
JonesMatrix forward_unitary(double theta_cap, double beta, double gamma);

// A p (U^T M U R_theta_mis)
JonesMatrix backscatter_matrix(const SegmentParams& seg, double theta_mis);

// Expanded round-trip matrix; independent oracle for backscatter_matrix at
// theta_mis = 0.
JonesMatrix closed_form_matrix(const SegmentParams& seg);

// One row per segment:
// index,z_m,theta_cap,beta,gamma,attenuation,phasor_re,phasor_im,tau_s
void write_fiber_csv(const FiberRealization& fiber, const std::string& path);
FiberRealization read_fiber_csv(const std::string& path);

}  // namespace phiotdr

#endif
