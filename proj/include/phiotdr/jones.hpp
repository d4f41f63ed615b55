#ifndef PHIOTDR_JONES_HPP
#define PHIOTDR_JONES_HPP

#include <cmath>
#include <complex>
#include <stdexcept>

namespace phiotdr {

using Complex = std::complex<double>;

inline bool is_finite(const Complex& z) {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
}

// 2x2 complex channel matrix, row-major [[xx, xy], [yx, yy]].
// Column 1 (xx, yx) is the response to an X-polarized launch.
struct JonesMatrix {
    Complex xx{1.0, 0.0};
    Complex xy{0.0, 0.0};
    Complex yx{0.0, 0.0};
    Complex yy{1.0, 0.0};

    bool finite() const {
        return is_finite(xx) && is_finite(xy) && is_finite(yx) && is_finite(yy);
    }
};

inline JonesMatrix identity() { return JonesMatrix{}; }

// [[cos t, -sin t], [sin t, cos t]], det = 1
inline JonesMatrix rotation(double theta) {
    if (!std::isfinite(theta)) throw std::invalid_argument("rotation: non-finite angle");
    const double c = std::cos(theta), s = std::sin(theta);
    return JonesMatrix{{c, 0.0}, {-s, 0.0}, {s, 0.0}, {c, 0.0}};
}

// diag(e^{j d}, e^{-j d}), det = 1
inline JonesMatrix retarder(double delta) {
    if (!std::isfinite(delta)) throw std::invalid_argument("retarder: non-finite angle");
    const Complex e = std::polar(1.0, delta);
    return JonesMatrix{e, {0.0, 0.0}, {0.0, 0.0}, std::conj(e)};
}

// perfect reflection, [[1, 0], [0, -1]]
inline JonesMatrix mirror() {
    return JonesMatrix{{1.0, 0.0}, {0.0, 0.0}, {0.0, 0.0}, {-1.0, 0.0}};
}

inline Complex determinant(const JonesMatrix& m) {
    return m.xx * m.yy - m.xy * m.yx;
}

inline JonesMatrix matmul(const JonesMatrix& a, const JonesMatrix& b) {
    return JonesMatrix{
        a.xx * b.xx + a.xy * b.yx, a.xx * b.xy + a.xy * b.yy,
        a.yx * b.xx + a.yy * b.yx, a.yx * b.xy + a.yy * b.yy,
    };
}

inline JonesMatrix operator*(const JonesMatrix& a, const JonesMatrix& b) {
    return matmul(a, b);
}

// plain transpose, no conjugation
inline JonesMatrix transpose(const JonesMatrix& m) {
    return JonesMatrix{m.xx, m.yx, m.xy, m.yy};
}

inline JonesMatrix scale(const JonesMatrix& m, Complex s) {
    return JonesMatrix{s * m.xx, s * m.xy, s * m.yx, s * m.yy};
}

inline JonesMatrix operator*(Complex s, const JonesMatrix& m) { return scale(m, s); }

inline JonesMatrix operator+(const JonesMatrix& a, const JonesMatrix& b) {
    return JonesMatrix{a.xx + b.xx, a.xy + b.xy, a.yx + b.yx, a.yy + b.yy};
}

}  // namespace phiotdr

#endif
