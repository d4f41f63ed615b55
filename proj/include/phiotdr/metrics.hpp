#ifndef PHIOTDR_METRICS_HPP
#define PHIOTDR_METRICS_HPP

#include <string>
#include <vector>

#include "phiotdr/estimators.hpp"

namespace phiotdr {

enum class DiffMode { Temporal, Spatial, None };

const char* diff_mode_name(DiffMode m);
DiffMode diff_mode_from_name(const std::string& name);

struct StdvProfile {
    ProbeScheme scheme = ProbeScheme::Mimo;
    DiffMode diff_mode = DiffMode::Temporal;
    std::vector<double> per_segment_stdv;
    std::vector<std::uint8_t> unreliable;
};

// Temporal: lag-1 difference along time (n_samples shrinks by one).
// Spatial: row i minus row i-1, first row kept as-is.  None: identity.
PhaseTrace differential(const PhaseTrace& trace, DiffMode mode);

// Per-segment sample standard deviation (denominator n-1) over time.
StdvProfile temporal_stdv(const PhaseTrace& trace, DiffMode diff_mode_tag = DiffMode::None);

// Per-segment arithmetic mean; unreliable masks OR-reduced.
StdvProfile aggregate_mean(const std::vector<StdvProfile>& profiles);

// segment_index,z_m,stdv_rad,unreliable
void write_profile_csv(const StdvProfile& profile, const std::vector<double>& z_m,
                       const std::string& path);

}  // namespace phiotdr

#endif
