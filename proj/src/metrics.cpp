#include "phiotdr/metrics.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "phiotdr/errors.hpp"

namespace phiotdr {

const char* diff_mode_name(DiffMode m) {
    switch (m) {
        case DiffMode::Temporal: return "temporal";
        case DiffMode::Spatial: return "spatial";
        case DiffMode::None: return "none";
    }
    return "?";
}

DiffMode diff_mode_from_name(const std::string& name) {
    if (name == "temporal") return DiffMode::Temporal;
    if (name == "spatial") return DiffMode::Spatial;
    if (name == "none") return DiffMode::None;
    throw std::invalid_argument("unknown diff mode: " + name);
}

PhaseTrace differential(const PhaseTrace& trace, DiffMode mode) {
    if (mode == DiffMode::None) return trace;
    PhaseTrace out = trace;
    if (mode == DiffMode::Temporal) {
        if (trace.n_samples < 2)
            throw std::invalid_argument("temporal differential needs at least 2 samples");
        out.n_samples = trace.n_samples - 1;
        out.values.assign(static_cast<std::size_t>(trace.n_segments) * out.n_samples, 0.0);
        out.flags.assign(out.values.size(), 0);
        for (int i = 0; i < trace.n_segments; ++i)
            for (int t = 0; t < out.n_samples; ++t) {
                out.at(i, t) = trace.at(i, t + 1) - trace.at(i, t);
                const std::size_t a = static_cast<std::size_t>(i) * trace.n_samples;
                out.flags[static_cast<std::size_t>(i) * out.n_samples + t] =
                    trace.flags[a + t] | trace.flags[a + t + 1];
            }
    } else {  // Spatial: first row unchanged, row i becomes row i - row (i-1)
        if (trace.n_segments < 2)
            throw std::invalid_argument("spatial differential needs at least 2 segments");
        for (int i = trace.n_segments - 1; i >= 1; --i)
            for (int t = 0; t < trace.n_samples; ++t) {
                out.at(i, t) = trace.at(i, t) - trace.at(i - 1, t);
                const std::size_t idx = static_cast<std::size_t>(i) * trace.n_samples + t;
                out.flags[idx] =
                    trace.flags[idx] |
                    trace.flags[static_cast<std::size_t>(i - 1) * trace.n_samples + t];
            }
    }
    return out;
}

StdvProfile temporal_stdv(const PhaseTrace& trace, DiffMode diff_mode_tag) {
    if (trace.n_samples < 2) throw std::invalid_argument("stdv needs at least 2 samples");
    StdvProfile prof;
    prof.scheme = trace.scheme;
    prof.diff_mode = diff_mode_tag;
    prof.per_segment_stdv.resize(static_cast<std::size_t>(trace.n_segments));
    prof.unreliable = trace.unreliable;
    const int n = trace.n_samples;
    for (int i = 0; i < trace.n_segments; ++i) {
        double mean = 0.0;
        for (int t = 0; t < n; ++t) mean += trace.at(i, t);
        mean /= n;
        double acc = 0.0;
        for (int t = 0; t < n; ++t) {
            const double d = trace.at(i, t) - mean;
            acc += d * d;
        }
        prof.per_segment_stdv[static_cast<std::size_t>(i)] = std::sqrt(acc / (n - 1));
    }
    return prof;
}

StdvProfile aggregate_mean(const std::vector<StdvProfile>& profiles) {
    if (profiles.empty()) throw std::invalid_argument("aggregate_mean: empty input");
    const std::size_t n = profiles.front().per_segment_stdv.size();
    for (const auto& p : profiles) {
        if (p.scheme != profiles.front().scheme || p.diff_mode != profiles.front().diff_mode)
            throw std::invalid_argument("aggregate_mean: mixed schemes or diff modes");
        if (p.per_segment_stdv.size() != n)
            throw std::invalid_argument("aggregate_mean: mismatched lengths");
    }
    StdvProfile out = profiles.front();
    for (std::size_t k = 1; k < profiles.size(); ++k) {
        for (std::size_t i = 0; i < n; ++i) {
            out.per_segment_stdv[i] += profiles[k].per_segment_stdv[i];
            out.unreliable[i] |= profiles[k].unreliable[i];
        }
    }
    for (std::size_t i = 0; i < n; ++i)
        out.per_segment_stdv[i] /= static_cast<double>(profiles.size());
    return out;
}

void write_profile_csv(const StdvProfile& profile, const std::vector<double>& z_m,
                       const std::string& path) {
    if (z_m.size() != profile.per_segment_stdv.size())
        throw std::invalid_argument("profile/z length mismatch");
    std::ofstream out(path);
    if (!out) throw IoError("cannot open for writing: " + path);
    out << "segment_index,z_m,stdv_rad,unreliable\n";
    char buf[128];
    for (std::size_t i = 0; i < z_m.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%zu,%.17g,%.17g,%d\n", i, z_m[i],
                      profile.per_segment_stdv[i], static_cast<int>(profile.unreliable[i]));
        out << buf;
    }
    if (!out) throw IoError("write failed: " + path);
}

}  // namespace phiotdr
