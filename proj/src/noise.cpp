#include "phiotdr/noise.hpp"

#include <cmath>
#include <stdexcept>

namespace phiotdr {

void NoiseConfig::validate() const {
    if (linewidth_hz < 0.0) throw std::invalid_argument("linewidth must be >= 0");
    if (!(dt_s > 0.0)) throw std::invalid_argument("estimation interval must be > 0");
    if (n_samples < 2) throw std::invalid_argument("need at least 2 time samples");
    if (theta_jitter_rad_per_sqrt_s < 0.0)
        throw std::invalid_argument("theta jitter rate must be >= 0");
}

LaserWalk::LaserWalk(double dt_s, int n_pre, std::vector<double> values)
    : dt_s_(dt_s), n_pre_(n_pre), values_(std::move(values)) {}

double LaserWalk::at_time(double t_s) const {
    const double pos = t_s / dt_s_ + n_pre_;
    if (pos <= 0.0) return values_.front();
    const double last = static_cast<double>(values_.size() - 1);
    if (pos >= last) return values_.back();
    const int k = static_cast<int>(pos);
    const double f = pos - k;
    return values_[k] + f * (values_[k + 1] - values_[k]);
}

LaserWalk laser_walk(double linewidth_hz, double dt_s, int n_samples, RngStream& rng,
                     double max_delay_s) {
    if (linewidth_hz < 0.0) throw std::invalid_argument("linewidth must be >= 0");
    if (!(dt_s > 0.0)) throw std::invalid_argument("dt must be > 0");
    if (n_samples < 1) throw std::invalid_argument("n_samples must be >= 1");
    const int n_pre = static_cast<int>(std::ceil(max_delay_s / dt_s)) + 2;
    const double inc_std = std::sqrt(2.0 * M_PI * linewidth_hz * dt_s);
    std::vector<double> values(static_cast<std::size_t>(n_pre + n_samples));
    double acc = 0.0;
    values[0] = 0.0;
    for (std::size_t k = 1; k < values.size(); ++k) {
        acc += inc_std * rng.normal();
        values[k] = acc;
    }
    const double at_zero = values[n_pre];
    for (auto& v : values) v -= at_zero;
    return LaserWalk(dt_s, n_pre, std::move(values));
}

JonesMatrix observe_channel(const JonesMatrix& h_true, const SegmentParams& seg,
                            const LaserWalk& walk, int t, const NoiseConfig& cfg,
                            RngStream& rng) {
    JonesMatrix h = h_true;
    const double lp = walk.phase_at(t, seg.tau_s);
    if (lp != 0.0) h = scale(h, std::polar(1.0, lp));
    if (cfg.additive_noise_enabled()) {
        const double s = std::sqrt(cfg.noise_variance() / 2.0);
        h.xx += Complex{s * rng.normal(), s * rng.normal()};
        h.xy += Complex{s * rng.normal(), s * rng.normal()};
        h.yx += Complex{s * rng.normal(), s * rng.normal()};
        h.yy += Complex{s * rng.normal(), s * rng.normal()};
    }
    return h;
}

std::vector<double> theta_trajectory(double theta0, const NoiseConfig& cfg, RngStream& rng) {
    cfg.validate();
    std::vector<double> theta(static_cast<std::size_t>(cfg.n_samples), theta0);
    if (cfg.theta_jitter_rad_per_sqrt_s > 0.0) {
        const double step = cfg.theta_jitter_rad_per_sqrt_s * std::sqrt(cfg.dt_s);
        double acc = theta0;
        for (int t = 1; t < cfg.n_samples; ++t) {
            acc += step * rng.normal();
            theta[t] = acc;
        }
    }
    return theta;
}

}  // namespace phiotdr
