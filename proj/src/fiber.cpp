#include "phiotdr/fiber.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "phiotdr/errors.hpp"

namespace phiotdr {

void FiberSpec::validate() const {
    if (!(length_m > 0.0)) throw std::invalid_argument("fiber length must be > 0");
    if (!(segment_length_m > 0.0)) throw std::invalid_argument("segment length must be > 0");
    if (length_m < segment_length_m)
        throw std::invalid_argument("fiber length must be >= segment length");
    if (alpha_db_per_km < 0.0) throw std::invalid_argument("attenuation must be >= 0");
    if (scatterers_per_segment < 1) throw std::invalid_argument("scatterers per segment must be >= 1");
    if (!(group_index > 1.0)) throw std::invalid_argument("group index must be > 1");
    if (segment_count() < 1) throw std::invalid_argument("fiber must contain at least one segment");
}

Complex sample_phasor(int scatterers, RngStream& rng) {
    if (scatterers < 1) throw std::invalid_argument("sample_phasor: need at least one scatterer");
    const double sigma = 1.0 / std::sqrt(2.0);
    Complex sum{0.0, 0.0};
    for (int k = 0; k < scatterers; ++k) {
        const double a = rng.rayleigh(sigma);
        const double phi = rng.uniform(-M_PI, M_PI);
        sum += std::polar(a, phi);
    }
    return sum / std::sqrt(static_cast<double>(scatterers));
}

FiberRealization sample_fiber(const FiberSpec& spec, std::uint64_t seed) {
    spec.validate();
    const int n = spec.segment_count();
    FiberRealization fiber{spec, seed, std::vector<SegmentParams>(n)};
    for (int i = 0; i < n; ++i) {
        RngStream rng = RngStream::substream(seed, static_cast<std::uint64_t>(i));
        SegmentParams& seg = fiber.segments[i];
        const double xi = rng.uniform();
        seg.theta_cap = std::asin(std::sqrt(xi));
        seg.beta = rng.uniform(-M_PI, M_PI);
        seg.gamma = rng.uniform(-M_PI, M_PI);
        seg.phasor = sample_phasor(spec.scatterers_per_segment, rng);
        seg.z_m = (i + 0.5) * spec.segment_length_m;
        // round-trip amplitude: alpha is one-way power loss in dB/km
        seg.attenuation = std::pow(10.0, -spec.alpha_db_per_km * (2.0 * seg.z_m / 1000.0) / 20.0);
        seg.tau_s = 2.0 * seg.z_m * spec.group_index / kSpeedOfLight;
    }
    return fiber;
}

JonesMatrix forward_unitary(double theta_cap, double beta, double gamma) {
    return retarder(beta) * rotation(theta_cap) * retarder(gamma);
}

JonesMatrix backscatter_matrix(const SegmentParams& seg, double theta_mis) {
    const JonesMatrix u = forward_unitary(seg.theta_cap, seg.beta, seg.gamma);
    JonesMatrix h = transpose(u) * mirror() * u * rotation(theta_mis);
    return scale(h, seg.attenuation * seg.phasor);
}

// Expanded U^T M U with U = D_b R_T D_g and M = diag(1, -1):
//   [[ e^{2jg}(cos2b cos2T + j sin2b),  -cos2b sin2T                    ],
//    [ -cos2b sin2T,                     e^{-2jg}(-cos2b cos2T + j sin2b)]]
// det = -1, symmetric off-diagonals.
JonesMatrix closed_form_matrix(const SegmentParams& seg) {
    const double c2b = std::cos(2.0 * seg.beta), s2b = std::sin(2.0 * seg.beta);
    const double c2t = std::cos(2.0 * seg.theta_cap), s2t = std::sin(2.0 * seg.theta_cap);
    const Complex e2g = std::polar(1.0, 2.0 * seg.gamma);
    const Complex off{-c2b * s2t, 0.0};
    JonesMatrix h{
        e2g * Complex{c2b * c2t, s2b}, off,
        off, std::conj(e2g) * Complex{-c2b * c2t, s2b}};
    return scale(h, seg.attenuation * seg.phasor);
}

void write_fiber_csv(const FiberRealization& fiber, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open for writing: " + path);
    out << "index,z_m,theta_cap,beta,gamma,attenuation,phasor_re,phasor_im,tau_s\n";
    char buf[256];
    for (std::size_t i = 0; i < fiber.segments.size(); ++i) {
        const SegmentParams& s = fiber.segments[i];
        std::snprintf(buf, sizeof(buf),
                      "%zu,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", i, s.z_m,
                      s.theta_cap, s.beta, s.gamma, s.attenuation, s.phasor.real(),
                      s.phasor.imag(), s.tau_s);
        out << buf;
    }
    if (!out) throw IoError("write failed: " + path);
}

FiberRealization read_fiber_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open: " + path);
    std::string line;
    if (!std::getline(in, line)) throw DataError("empty fiber file: " + path);
    FiberRealization fiber;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ss(line);
        std::string field;
        std::vector<double> v;
        while (std::getline(ss, field, ',')) v.push_back(std::stod(field));
        if (v.size() != 9) throw DataError("malformed fiber row: " + line);
        SegmentParams s;
        s.z_m = v[1];
        s.theta_cap = v[2];
        s.beta = v[3];
        s.gamma = v[4];
        s.attenuation = v[5];
        s.phasor = {v[6], v[7]};
        s.tau_s = v[8];
        fiber.segments.push_back(s);
    }
    return fiber;
}

}  // namespace phiotdr
