#include "phiotdr/estimators.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "phiotdr/errors.hpp"

namespace phiotdr {

namespace {
constexpr double kFadeFloorScale = 1.0e-3;
}

const char* scheme_name(ProbeScheme s) {
    switch (s) {
        case ProbeScheme::Siso: return "siso";
        case ProbeScheme::Simo: return "simo";
        case ProbeScheme::Mimo: return "mimo";
    }
    return "?";
}

ProbeScheme scheme_from_name(const std::string& name) {
    if (name == "siso" || name == "SISO") return ProbeScheme::Siso;
    if (name == "simo" || name == "SIMO") return ProbeScheme::Simo;
    if (name == "mimo" || name == "MIMO") return ProbeScheme::Mimo;
    throw std::invalid_argument("unknown probing scheme: " + name);
}

double phase_modulus(ProbeScheme s) { return s == ProbeScheme::Mimo ? M_PI : 2.0 * M_PI; }

PhaseSample phase_mimo(const JonesMatrix& h, double mag_floor) {
    const Complex d = determinant(h);
    return {0.5 * std::arg(d), std::abs(d) < mag_floor};
}

PhaseSample phase_simo(Complex h_xx, Complex h_yx, double mag_floor) {
    const Complex sum = h_xx + h_yx;
    return {std::arg(sum), std::abs(sum) < mag_floor || sum == Complex{0.0, 0.0}};
}

PhaseSample phase_siso(Complex h_xx, double mag_floor) {
    return {std::arg(h_xx), std::abs(h_xx) < mag_floor || h_xx == Complex{0.0, 0.0}};
}

PhaseSample simo_closed_form(const SegmentParams& seg, double mag_floor) {
    const double c2b = std::cos(2.0 * seg.beta), s2b = std::sin(2.0 * seg.beta);
    const double c2t = std::cos(2.0 * seg.theta_cap), s2t = std::sin(2.0 * seg.theta_cap);
    const Complex e2g = std::polar(1.0, 2.0 * seg.gamma);
    const Complex operand =
        seg.attenuation * seg.phasor *
        (c2b * (e2g * c2t - s2t) + Complex{0.0, s2b} * e2g);
    return {std::arg(operand), std::abs(operand) < mag_floor || operand == Complex{0.0, 0.0}};
}

std::vector<double> unwrap(const std::vector<double>& values, double modulus) {
    if (values.empty()) throw std::invalid_argument("unwrap: empty series");
    std::vector<double> out(values.size());
    out[0] = values[0];
    for (std::size_t i = 1; i < values.size(); ++i) {
        double d = values[i] - values[i - 1];
        d -= modulus * std::floor(d / modulus + 0.5);
        if (d <= -modulus / 2.0) d += modulus;  // land in (-m/2, m/2]
        out[i] = out[i - 1] + d;
    }
    return out;
}

namespace {

// Simulates one segment across the whole time window and fills the trace rows
// of every requested scheme.  Pure function of (fiber, walk, theta, cfg,
// noise substream), used identically by the serial and parallel drivers.
void simulate_segment(const SegmentParams& seg, const LaserWalk& walk,
                      const std::vector<double>& theta_series, bool theta_static,
                      const NoiseConfig& cfg, std::uint64_t noise_seed, int seg_index,
                      int simo_column, std::vector<PhaseTrace>& traces,
                      ObservationSet* capture) {
    RngStream rng = RngStream::substream(noise_seed, static_cast<std::uint64_t>(seg_index));
    const int n = cfg.n_samples;

    JonesMatrix h_static;
    if (theta_static) h_static = backscatter_matrix(seg, theta_series.empty() ? 0.0 : theta_series[0]);

    const double floor_lin = kFadeFloorScale * seg.attenuation;
    const double floor_det = kFadeFloorScale * seg.attenuation * seg.attenuation;

    std::vector<std::vector<double>> rows(traces.size(), std::vector<double>(n));
    std::vector<int> flag_counts(traces.size(), 0);

    for (int t = 0; t < n; ++t) {
        const JonesMatrix h_true =
            theta_static ? h_static : backscatter_matrix(seg, theta_series[t]);
        const JonesMatrix obs = observe_channel(h_true, seg, walk, t, cfg, rng);
        if (capture) capture->values[static_cast<std::size_t>(seg_index) * n + t] = obs;
        for (std::size_t s = 0; s < traces.size(); ++s) {
            PhaseSample sample;
            switch (traces[s].scheme) {
                case ProbeScheme::Mimo:
                    sample = phase_mimo(obs, floor_det);
                    break;
                case ProbeScheme::Simo:
                    sample = simo_column == 2 ? phase_simo(obs.xy, obs.yy, floor_lin)
                                              : phase_simo(obs.xx, obs.yx, floor_lin);
                    break;
                case ProbeScheme::Siso:
                    sample = phase_siso(obs.xx, floor_lin);
                    break;
            }
            rows[s][t] = sample.value;
            if (sample.faded) {
                traces[s].flags[static_cast<std::size_t>(seg_index) * n + t] = 1;
                ++flag_counts[s];
            }
        }
    }

    for (std::size_t s = 0; s < traces.size(); ++s) {
        const std::vector<double> unwrapped = unwrap(rows[s], phase_modulus(traces[s].scheme));
        for (int t = 0; t < n; ++t) traces[s].at(seg_index, t) = unwrapped[t];
        if (2 * flag_counts[s] > n) traces[s].unreliable[seg_index] = 1;
    }
}

}  // namespace

std::vector<PhaseTrace> estimate_traces(const FiberRealization& fiber, const LaserWalk& walk,
                                        const std::vector<double>& theta_series,
                                        const NoiseConfig& cfg, std::uint64_t noise_seed,
                                        const std::vector<ProbeScheme>& schemes,
                                        int simo_column, ExecPolicy policy,
                                        ObservationSet* capture) {
    cfg.validate();
    if (theta_series.size() != static_cast<std::size_t>(cfg.n_samples) && theta_series.size() != 1)
        throw std::invalid_argument("theta series length does not match the sample count");
    const int n_seg = static_cast<int>(fiber.segments.size());
    const int n = cfg.n_samples;

    std::vector<PhaseTrace> traces;
    traces.reserve(schemes.size());
    for (ProbeScheme s : schemes) {
        PhaseTrace tr;
        tr.scheme = s;
        tr.n_segments = n_seg;
        tr.n_samples = n;
        tr.dt_s = cfg.dt_s;
        tr.values.assign(static_cast<std::size_t>(n_seg) * n, 0.0);
        tr.flags.assign(static_cast<std::size_t>(n_seg) * n, 0);
        tr.unreliable.assign(static_cast<std::size_t>(n_seg), 0);
        traces.push_back(std::move(tr));
    }

    if (capture) {
        capture->n_segments = n_seg;
        capture->n_samples = n;
        capture->values.assign(static_cast<std::size_t>(n_seg) * n, JonesMatrix{});
    }

    bool theta_static = true;
    for (std::size_t t = 1; t < theta_series.size(); ++t)
        if (theta_series[t] != theta_series[0]) {
            theta_static = false;
            break;
        }

    if (policy == ExecPolicy::Parallel) {
#pragma omp parallel for schedule(dynamic, 8)
        for (int i = 0; i < n_seg; ++i)
            simulate_segment(fiber.segments[i], walk, theta_series, theta_static, cfg,
                             noise_seed, i, simo_column, traces, capture);
    } else {
        for (int i = 0; i < n_seg; ++i)
            simulate_segment(fiber.segments[i], walk, theta_series, theta_static, cfg,
                             noise_seed, i, simo_column, traces, capture);
    }
    return traces;
}

PhaseTrace estimate_trace(const FiberRealization& fiber, const LaserWalk& walk,
                          const std::vector<double>& theta_series, const NoiseConfig& cfg,
                          std::uint64_t noise_seed, ProbeScheme scheme, int simo_column,
                          ExecPolicy policy) {
    return estimate_traces(fiber, walk, theta_series, cfg, noise_seed, {scheme}, simo_column,
                           policy)[0];
}

void write_trace_csv(const PhaseTrace& trace, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open for writing: " + path);
    out << "segment_index,time_index,value,flag\n";
    char buf[128];
    for (int i = 0; i < trace.n_segments; ++i)
        for (int t = 0; t < trace.n_samples; ++t) {
            std::snprintf(buf, sizeof(buf), "%d,%d,%.17g,%d\n", i, t, trace.at(i, t),
                          static_cast<int>(trace.flags[static_cast<std::size_t>(i) * trace.n_samples + t]));
            out << buf;
        }
    if (!out) throw IoError("write failed: " + path);
}

}  // namespace phiotdr
