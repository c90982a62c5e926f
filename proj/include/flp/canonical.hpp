#pragma once

#include <optional>
#include <string>
#include <vector>

#include "flp/core.hpp"

namespace flp {

/// Eight-parameter normal form: right block [[2α,1],[m-α²,0]] z + (0,β),
/// left block [[γ1,δ],[γ2,γ3]] z + (η,ρ).
struct CanonicalParams {
    double alpha = 0.0;
    double beta = 0.0;
    int delta = 0;
    double eta = 0.0;
    double rho = 0.0;
    double gamma1 = 0.0;
    double gamma2 = 0.0;
    double gamma3 = 0.0;
    int m = -1;

    [[nodiscard]] double tau() const { return gamma1 + gamma3; }
    [[nodiscard]] double Delta() const { return gamma1 * gamma3 - gamma2; }
    [[nodiscard]] double nu() const;
    [[nodiscard]] FilippovSystem system() const;
};

/// Affine change new = L old + o on one half-plane, with the field scaled by time_scale.
struct SideMap {
    Mat2 L = Mat2::identity();
    Vec2 o{};
    double time_scale = 1.0;

    [[nodiscard]] Vec2 apply(const Vec2& z) const { return L * z + o; }
    [[nodiscard]] Vec2 invert(const Vec2& z) const { return L.inverse() * (z - o); }
    [[nodiscard]] AffineField transform(const AffineField& f) const;
    /// this first, then next.
    [[nodiscard]] SideMap then(const SideMap& next) const;
};

/// Optional mirrors (applied first), then one affine map per half-plane.
struct TransformRecord {
    bool mirror_x = false;  // (x, y) -> (-x, y), sides swap
    bool mirror_y = false;  // (x, y) -> (x, -y)
    SideMap right;
    SideMap left;
    std::vector<std::string> steps;

    [[nodiscard]] Vec2 push(const Vec2& z) const;
    [[nodiscard]] Vec2 pull(const Vec2& z) const;
    [[nodiscard]] FilippovSystem push(const FilippovSystem& sys) const;
    /// Positive factor relating time in the target frame to time in the source frame at z.
    [[nodiscard]] double time_scale_at(const Vec2& z) const;
    /// this first, then next (next may not carry mirrors).
    [[nodiscard]] TransformRecord then(const TransformRecord& next) const;
};

/// Quantities produced along the reduction chain.
struct ChainIntermediates {
    double u = 1.0;
    double w = 1.0;
    double A11 = 0.0, A21 = 0.0, B = 0.0;
    double C11 = 0.0, C21 = 0.0, C22 = 0.0;
    double D1 = 0.0, D2 = 0.0;
};

enum class FocusSide { None, Left, Right, Both };
std::string_view to_string(FocusSide s);

struct Premises {
    bool cross_products_distinct = false;
    FocusSide admissible_focus_side = FocusSide::None;
    std::optional<Stability> left_focus_stability;
    std::optional<Stability> right_focus_stability;
};

Premises check_premises(const FilippovSystem& sys);

struct CanonicalForm {
    CanonicalParams params;
    TransformRecord record;
    ChainIntermediates intermediates;
};

CanonicalForm to_canonical(const FilippovSystem& sys);

/// Piecewise shear on x <= 0 making gamma1 == gamma3; requires delta == 1.
std::pair<CanonicalParams, TransformRecord> shear_to_equal_gammas(const CanonicalParams& p);

/// Switching-line pattern key 'a'..'f' from (delta, sign eta).
char classify_csl(const CanonicalParams& p);

}  // namespace flp
