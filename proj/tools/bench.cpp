// Compares the serial and OpenMP drivers of the observation/estimation
// kernel and checks that both produce identical traces.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <vector>

#include "phiotdr/estimators.hpp"
#include "phiotdr/experiments.hpp"

using namespace phiotdr;

namespace {

double run_once(const FiberRealization& fiber, const LaserWalk& walk,
                const std::vector<double>& theta, const NoiseConfig& noise, ExecPolicy policy,
                std::vector<PhaseTrace>& out) {
    const auto t0 = std::chrono::steady_clock::now();
    out = estimate_traces(fiber, walk, theta, noise, 42, {ProbeScheme::Siso, ProbeScheme::Simo,
                                                          ProbeScheme::Mimo},
                          1, policy);
    const auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double>(t1 - t0).count();
}

}  // namespace

int main(int argc, char** argv) {
    int n_segments = 1000, n_samples = 2000, reps = 3;
    if (argc > 1) n_segments = std::atoi(argv[1]);
    if (argc > 2) n_samples = std::atoi(argv[2]);
    if (argc > 3) reps = std::atoi(argv[3]);

    FiberSpec spec;
    spec.length_m = n_segments * spec.segment_length_m;
    const FiberRealization fiber = sample_fiber(spec, 7);

    NoiseConfig noise;
    noise.n_samples = n_samples;
    RngStream walk_rng = RngStream::substream(42, 0x57414C4BULL << 32);
    const double max_tau = 2.0 * spec.length_m * spec.group_index / kSpeedOfLight;
    const LaserWalk walk =
        laser_walk(noise.linewidth_hz, noise.dt_s, noise.n_samples, walk_rng, max_tau + noise.dt_s);
    const std::vector<double> theta(static_cast<std::size_t>(n_samples), 0.3);

    std::printf("segments=%d samples=%d reps=%d\n", n_segments, n_samples, reps);
    std::vector<PhaseTrace> serial, parallel;
    double best_serial = 1e99, best_parallel = 1e99;
    for (int r = 0; r < reps; ++r) {
        best_serial = std::min(best_serial, run_once(fiber, walk, theta, noise,
                                                     ExecPolicy::Serial, serial));
        best_parallel = std::min(best_parallel, run_once(fiber, walk, theta, noise,
                                                         ExecPolicy::Parallel, parallel));
    }

    bool identical = true;
    for (std::size_t s = 0; s < serial.size() && identical; ++s)
        identical = std::memcmp(serial[s].values.data(), parallel[s].values.data(),
                                serial[s].values.size() * sizeof(double)) == 0;

    std::printf("serial   : %.3f s\n", best_serial);
    std::printf("parallel : %.3f s\n", best_parallel);
    std::printf("speedup  : %.2fx\n", best_serial / best_parallel);
    std::printf("traces identical: %s\n", identical ? "yes" : "NO");
    return identical ? 0 : 1;
}
