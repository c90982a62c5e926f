#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "flp/error.hpp"
#include "flp/linalg.hpp"

namespace flp {

enum class Side { Left, Right };

/// ż = A z + b on one half-plane.
struct AffineField {
    Mat2 A;
    Vec2 b;

    [[nodiscard]] Vec2 operator()(const Vec2& z) const { return A * z + b; }
    [[nodiscard]] bool nondegenerate() const;
    /// First velocity component on the axis, ẋ(0, y).
    [[nodiscard]] double normal(double y) const { return A.a12 * y + b.x; }
    /// Second velocity component on the axis, ẏ(0, y).
    [[nodiscard]] double tangential(double y) const { return A.a22 * y + b.y; }
    [[nodiscard]] AffineField reversed() const { return {-1.0 * A, -b}; }
    friend bool operator==(const AffineField&, const AffineField&) = default;
};

/// Two affine fields separated by the line c·z + d = 0; `plus` governs c·z + d > 0.
struct RawSystem {
    AffineField plus;
    AffineField minus;
    Vec2 c{1.0, 0.0};
    double d = 0.0;

    [[nodiscard]] double H(const Vec2& z) const { return c.x * z.x + c.y * z.y + d; }
};

/// Piecewise affine system with switching line x = 0.
struct FilippovSystem {
    AffineField left;   // x < 0
    AffineField right;  // x > 0

    [[nodiscard]] const AffineField& field(Side s) const { return s == Side::Left ? left : right; }
    /// Same orbits traversed backwards in time.
    [[nodiscard]] FilippovSystem reversed() const { return {left.reversed(), right.reversed()}; }
    /// Image under (x, y) -> (-x, y); the two sides swap.
    [[nodiscard]] FilippovSystem mirrored_x() const;
    /// Image under (x, y) -> (x, -y).
    [[nodiscard]] FilippovSystem mirrored_y() const;
    friend bool operator==(const FilippovSystem&, const FilippovSystem&) = default;
};

/// Change of variables old = B (new + nu) carrying c·z + d = 0 onto x = 0.
struct AxisTransform {
    Mat2 B = Mat2::identity();
    Vec2 nu{};

    [[nodiscard]] Vec2 to_axis_frame(const Vec2& old) const { return B.inverse() * old - nu; }
    [[nodiscard]] Vec2 to_raw_frame(const Vec2& z) const { return B * (z + nu); }
};

enum class Region {
    Crossing,
    AttractiveSliding,
    RepulsiveSliding,
    SingularSliding,
    TangencyLeft,
    TangencyRight,
    TangencyBoth,
    BoundaryEquilibriumLeft,
    BoundaryEquilibriumRight,
};

enum class EqKind { Focus, Node, Saddle, Center, Degenerate };
enum class Stability { Stable, Unstable, Neutral };
enum class Placement { Admissible, Virtual, Boundary };
enum class Visibility { Visible, Invisible, Degenerate };

struct EquilibriumInfo {
    Vec2 location;
    EqKind kind = EqKind::Degenerate;
    Stability stability = Stability::Neutral;
    Placement placement = Placement::Virtual;
};

struct TangencyInfo {
    Vec2 location;
    Side side = Side::Right;
    Visibility visibility = Visibility::Degenerate;
};

struct LabeledInterval {
    double lo;  // may be -inf
    double hi;  // may be +inf
    Region label;
};

struct LabeledPoint {
    double y;
    Region label;
};

struct SigmaDecomposition {
    std::vector<LabeledInterval> intervals;
    std::vector<LabeledPoint> points;

    /// Label of the open interval containing y, or of the breakpoint at y.
    [[nodiscard]] Region label_at(double y) const;
};

std::string_view to_string(Side s);
std::string_view to_string(Region r);
std::string_view to_string(EqKind k);
std::string_view to_string(Stability s);
std::string_view to_string(Placement p);
std::string_view to_string(Visibility v);

[[nodiscard]] bool is_sliding(Region r);
[[nodiscard]] bool is_tangency(Region r);

/// Relative tolerance used for "vanishes" tests on the axis.
inline constexpr double kVanishTol = 1e-10;

std::pair<FilippovSystem, AxisTransform> normalize_to_y_axis(const RawSystem& raw);

Region classify_point(const FilippovSystem& sys, double y);
SigmaDecomposition sigma_decomposition(const FilippovSystem& sys);

/// y-component of the sliding vector field at (0, y).
double sliding_field(const FilippovSystem& sys, double y);
std::vector<Vec2> pseudo_equilibria(const FilippovSystem& sys);

EquilibriumInfo equilibrium_info(const AffineField& field, Side side);
std::vector<TangencyInfo> tangency_points(const FilippovSystem& sys);
std::optional<TangencyInfo> tangency_point(const FilippovSystem& sys, Side side);

/// Numerator and denominator of the sliding field: F_s = N(y) / Dn(y).
struct SlidingRational {
    double q2, q1, q0;  // N(y) = q2 y^2 + q1 y + q0
    double d1, d0;      // Dn(y) = d1 y + d0

    [[nodiscard]] double N(double y) const { return (q2 * y + q1) * y + q0; }
    [[nodiscard]] double Dn(double y) const { return d1 * y + d0; }
};
SlidingRational sliding_rational(const FilippovSystem& sys);

}  // namespace flp
