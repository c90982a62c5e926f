#pragma once

#include <array>
#include <cmath>
#include <ostream>

namespace flp {

/// Point or vector in the plane.
struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    constexpr Vec2() = default;
    constexpr Vec2(double x_, double y_) : x(x_), y(y_) {}

    constexpr Vec2& operator+=(const Vec2& o) { x += o.x; y += o.y; return *this; }
    constexpr Vec2& operator-=(const Vec2& o) { x -= o.x; y -= o.y; return *this; }
    constexpr Vec2& operator*=(double s) { x *= s; y *= s; return *this; }

    friend constexpr Vec2 operator+(Vec2 a, const Vec2& b) { return a += b; }
    friend constexpr Vec2 operator-(Vec2 a, const Vec2& b) { return a -= b; }
    friend constexpr Vec2 operator-(const Vec2& a) { return {-a.x, -a.y}; }
    friend constexpr Vec2 operator*(double s, Vec2 a) { return a *= s; }
    friend constexpr Vec2 operator*(Vec2 a, double s) { return a *= s; }
    friend constexpr bool operator==(const Vec2&, const Vec2&) = default;

    [[nodiscard]] double norm() const { return std::hypot(x, y); }
    [[nodiscard]] bool finite() const { return std::isfinite(x) && std::isfinite(y); }
};

inline std::ostream& operator<<(std::ostream& os, const Vec2& v) {
    return os << '(' << v.x << ", " << v.y << ')';
}

/// Row-major 2x2 matrix.
struct Mat2 {
    double a11 = 0.0, a12 = 0.0;
    double a21 = 0.0, a22 = 0.0;

    static constexpr Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
    static constexpr Mat2 diag(double d1, double d2) { return {d1, 0.0, 0.0, d2}; }

    [[nodiscard]] constexpr double trace() const { return a11 + a22; }
    [[nodiscard]] constexpr double det() const { return a11 * a22 - a12 * a21; }
    [[nodiscard]] double norm_max() const {
        return std::max(std::max(std::abs(a11), std::abs(a12)), std::max(std::abs(a21), std::abs(a22)));
    }
    [[nodiscard]] bool finite() const {
        return std::isfinite(a11) && std::isfinite(a12) && std::isfinite(a21) && std::isfinite(a22);
    }

    /// Inverse; caller guarantees det() != 0.
    [[nodiscard]] constexpr Mat2 inverse() const {
        const double d = det();
        return {a22 / d, -a12 / d, -a21 / d, a11 / d};
    }

    friend constexpr Vec2 operator*(const Mat2& m, const Vec2& v) {
        return {m.a11 * v.x + m.a12 * v.y, m.a21 * v.x + m.a22 * v.y};
    }
    friend constexpr Mat2 operator*(const Mat2& m, const Mat2& n) {
        return {m.a11 * n.a11 + m.a12 * n.a21, m.a11 * n.a12 + m.a12 * n.a22,
                m.a21 * n.a11 + m.a22 * n.a21, m.a21 * n.a12 + m.a22 * n.a22};
    }
    friend constexpr Mat2 operator*(double s, const Mat2& m) {
        return {s * m.a11, s * m.a12, s * m.a21, s * m.a22};
    }
    friend constexpr Mat2 operator+(const Mat2& m, const Mat2& n) {
        return {m.a11 + n.a11, m.a12 + n.a12, m.a21 + n.a21, m.a22 + n.a22};
    }
    friend constexpr Mat2 operator-(const Mat2& m, const Mat2& n) {
        return {m.a11 - n.a11, m.a12 - n.a12, m.a21 - n.a21, m.a22 - n.a22};
    }
    friend constexpr bool operator==(const Mat2&, const Mat2&) = default;
};

inline std::ostream& operator<<(std::ostream& os, const Mat2& m) {
    return os << "[[" << m.a11 << ", " << m.a12 << "], [" << m.a21 << ", " << m.a22 << "]]";
}

}  // namespace flp
