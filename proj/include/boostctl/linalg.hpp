#pragma once

// Fixed 2x2 / 2-vector arithmetic used throughout the toolkit. Everything is
// closed form; there is no iteration anywhere in this header.

#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>

namespace boostctl {

struct Vec2 {
    double x0 = 0.0;
    double x1 = 0.0;

    constexpr double operator[](int i) const { return i == 0 ? x0 : x1; }
    constexpr double& operator[](int i) { return i == 0 ? x0 : x1; }

    friend constexpr bool operator==(const Vec2&, const Vec2&) = default;
};

/// Row-major 2x2 matrix: [[a, b], [c, d]].
struct Mat2 {
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
    double d = 0.0;

    [[nodiscard]] static constexpr Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
    [[nodiscard]] static constexpr Mat2 diag(double d0, double d1) { return {d0, 0.0, 0.0, d1}; }

    [[nodiscard]] constexpr double at(int row, int col) const {
        return row == 0 ? (col == 0 ? a : b) : (col == 0 ? c : d);
    }

    friend constexpr bool operator==(const Mat2&, const Mat2&) = default;
};

constexpr Vec2 operator+(const Vec2& u, const Vec2& v) { return {u.x0 + v.x0, u.x1 + v.x1}; }
constexpr Vec2 operator-(const Vec2& u, const Vec2& v) { return {u.x0 - v.x0, u.x1 - v.x1}; }
constexpr Vec2 operator-(const Vec2& u) { return {-u.x0, -u.x1}; }
constexpr Vec2 operator*(double s, const Vec2& v) { return {s * v.x0, s * v.x1}; }
constexpr double dot(const Vec2& u, const Vec2& v) { return u.x0 * v.x0 + u.x1 * v.x1; }

constexpr Mat2 operator+(const Mat2& m, const Mat2& n) { return {m.a + n.a, m.b + n.b, m.c + n.c, m.d + n.d}; }
constexpr Mat2 operator-(const Mat2& m, const Mat2& n) { return {m.a - n.a, m.b - n.b, m.c - n.c, m.d - n.d}; }
constexpr Mat2 operator*(double s, const Mat2& m) { return {s * m.a, s * m.b, s * m.c, s * m.d}; }

constexpr Mat2 operator*(const Mat2& m, const Mat2& n) {
    return {m.a * n.a + m.b * n.c, m.a * n.b + m.b * n.d,
            m.c * n.a + m.d * n.c, m.c * n.b + m.d * n.d};
}

constexpr Vec2 operator*(const Mat2& m, const Vec2& v) {
    return {m.a * v.x0 + m.b * v.x1, m.c * v.x0 + m.d * v.x1};
}

constexpr Mat2 transpose(const Mat2& m) { return {m.a, m.c, m.b, m.d}; }
constexpr double trace(const Mat2& m) { return m.a + m.d; }
constexpr double det(const Mat2& m) { return m.a * m.d - m.b * m.c; }

/// xᵀ M y
constexpr double quad(const Vec2& x, const Mat2& m, const Vec2& y) { return dot(x, m * y); }

inline double norm(const Vec2& v) { return std::hypot(v.x0, v.x1); }

inline double frobenius(const Mat2& m) {
    return std::sqrt(m.a * m.a + m.b * m.b + m.c * m.c + m.d * m.d);
}

inline bool is_finite(const Vec2& v) { return std::isfinite(v.x0) && std::isfinite(v.x1); }

/// Adjugate inverse. Throws std::domain_error when |det| is zero.
inline Mat2 inverse(const Mat2& m) {
    const double dt = det(m);
    if (dt == 0.0 || !std::isfinite(dt)) {
        throw std::domain_error("inverse: singular 2x2 matrix");
    }
    return {m.d / dt, -m.b / dt, -m.c / dt, m.a / dt};
}

/// Eigenvalues of a symmetric matrix (uses a, d and the mean of b, c), ascending.
inline std::array<double, 2> sym_eigenvalues(const Mat2& m) {
    const double off = 0.5 * (m.b + m.c);
    const double mean = 0.5 * (m.a + m.d);
    const double half_gap = 0.5 * (m.a - m.d);
    const double r = std::hypot(half_gap, off);
    return {mean - r, mean + r};
}

inline double sym_max_eigenvalue(const Mat2& m) { return sym_eigenvalues(m)[1]; }
inline double sym_min_eigenvalue(const Mat2& m) { return sym_eigenvalues(m)[0]; }

/// Eigenvalues of a general real 2x2 matrix.
inline std::array<std::complex<double>, 2> eigenvalues(const Mat2& m) {
    const double half_tr = 0.5 * trace(m);
    const double disc = half_tr * half_tr - det(m);
    if (disc >= 0.0) {
        const double r = std::sqrt(disc);
        // Avoid cancellation for the smaller-magnitude root.
        const double big = half_tr + std::copysign(r, half_tr);
        const double small = big != 0.0 ? det(m) / big : 0.0;
        return {std::complex<double>{std::min(big, small), 0.0},
                std::complex<double>{std::max(big, small), 0.0}};
    }
    const double im = std::sqrt(-disc);
    return {std::complex<double>{half_tr, -im}, std::complex<double>{half_tr, im}};
}

/// Largest real part among the eigenvalues.
inline double spectral_abscissa(const Mat2& m) {
    const auto ev = eigenvalues(m);
    return std::max(ev[0].real(), ev[1].real());
}

inline double spectral_radius(const Mat2& m) {
    const auto ev = eigenvalues(m);
    return std::max(std::abs(ev[0]), std::abs(ev[1]));
}

}  // namespace boostctl
