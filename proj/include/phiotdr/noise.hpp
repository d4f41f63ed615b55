#ifndef PHIOTDR_NOISE_HPP
#define PHIOTDR_NOISE_HPP

#include <limits>
#include <vector>

#include "phiotdr/fiber.hpp"
#include "phiotdr/jones.hpp"
#include "phiotdr/rng.hpp"

namespace phiotdr {

struct NoiseConfig {
    double linewidth_hz = 75.0;
    double dt_s = 160e-6;     // estimation interval
    int n_samples = 12500;    // 2 s window at the default interval
    double snr_db = 20.0;     // per-coefficient, referenced to unit signal
    double theta_jitter_rad_per_sqrt_s = 0.0;

    bool additive_noise_enabled() const {
        return snr_db < std::numeric_limits<double>::infinity();
    }
    double noise_variance() const {  // E[|W entry|^2]
        return additive_noise_enabled() ? std::pow(10.0, -snr_db / 10.0) : 0.0;
    }
    void validate() const;
};

// Cumulative laser phase walk sampled at dt, extended before t=0 so that
// delayed reads t - tau stay inside the stored range.  walk(0) = 0.
class LaserWalk {
public:
    LaserWalk(double dt_s, int n_pre, std::vector<double> values);

    // phase at an arbitrary time, linear interpolation between samples
    double at_time(double t_s) const;

    // self-heterodyne phase walk(t) - walk(t - tau) at sample index t
    double phase_at(int t, double tau_s) const {
        return at_time(t * dt_s_) - at_time(t * dt_s_ - tau_s);
    }

    double dt_s() const { return dt_s_; }
    int n_pre() const { return n_pre_; }
    const std::vector<double>& values() const { return values_; }

private:
    double dt_s_;
    int n_pre_;                   // samples stored before t=0
    std::vector<double> values_;  // values_[n_pre_] is t=0
};

// Wiener walk with increment variance 2*pi*linewidth*dt per step.
// max_delay_s bounds the largest tau that phase_at will be asked for.
LaserWalk laser_walk(double linewidth_hz, double dt_s, int n_samples, RngStream& rng,
                     double max_delay_s = 1.0e-3);

// e^{j(walk(t) - walk(t - tau))} * H + W, W circular complex Gaussian
// per entry with variance cfg.noise_variance().
JonesMatrix observe_channel(const JonesMatrix& h_true, const SegmentParams& seg,
                            const LaserWalk& walk, int t, const NoiseConfig& cfg,
                            RngStream& rng);

// theta0 plus a random walk; constant series when the jitter rate is 0.
std::vector<double> theta_trajectory(double theta0, const NoiseConfig& cfg, RngStream& rng);

}  // namespace phiotdr

#endif
