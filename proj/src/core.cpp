#include "flp/core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "flp/roots.hpp"

namespace flp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr Mat2 kMirrorX = Mat2::diag(-1.0, 1.0);
constexpr Mat2 kMirrorY = Mat2::diag(1.0, -1.0);

AffineField conjugate(const AffineField& f, const Mat2& P) { return {P * f.A * P, P * f.b}; }

bool vanishes(double value, double scale) { return std::abs(value) <= kVanishTol * std::max(1.0, scale); }

bool field_vanishes(const AffineField& f, double y) {
    const Vec2 v = f(Vec2{0.0, y});
    const double scale = f.A.norm_max() * std::abs(y) + std::max(std::abs(f.b.x), std::abs(f.b.y));
    return vanishes(v.x, scale) && vanishes(v.y, scale);
}

}  // namespace

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::ZeroNormal: return "ZeroNormal";
        case ErrorCode::DegenerateField: return "DegenerateField";
        case ErrorCode::NotSlidingRegion: return "NotSlidingRegion";
        case ErrorCode::NoAdmissibleFocus: return "NoAdmissibleFocus";
        case ErrorCode::DeltaNotOne: return "DeltaNotOne";
        case ErrorCode::EtaZero: return "EtaZero";
        case ErrorCode::NoReturn: return "NoReturn";
        case ErrorCode::DegenerateTangency: return "DegenerateTangency";
        case ErrorCode::ConditionViolated: return "ConditionViolated";
        case ErrorCode::OutOfRange: return "OutOfRange";
        case ErrorCode::DomainError: return "DomainError";
        case ErrorCode::TheoremViolation: return "TheoremViolation";
        case ErrorCode::WindowNotFound: return "WindowNotFound";
        case ErrorCode::MalformedInput: return "MalformedInput";
    }
    return "Unknown";
}

std::string_view to_string(Side s) { return s == Side::Left ? "left" : "right"; }

std::string_view to_string(Region r) {
    switch (r) {
        case Region::Crossing: return "Crossing";
        case Region::AttractiveSliding: return "AttractiveSliding";
        case Region::RepulsiveSliding: return "RepulsiveSliding";
        case Region::SingularSliding: return "SingularSliding";
        case Region::TangencyLeft: return "TangencyLeft";
        case Region::TangencyRight: return "TangencyRight";
        case Region::TangencyBoth: return "TangencyBoth";
        case Region::BoundaryEquilibriumLeft: return "BoundaryEquilibriumLeft";
        case Region::BoundaryEquilibriumRight: return "BoundaryEquilibriumRight";
    }
    return "Unknown";
}

std::string_view to_string(EqKind k) {
    switch (k) {
        case EqKind::Focus: return "focus";
        case EqKind::Node: return "node";
        case EqKind::Saddle: return "saddle";
        case EqKind::Center: return "center";
        case EqKind::Degenerate: return "degenerate";
    }
    return "unknown";
}

std::string_view to_string(Stability s) {
    switch (s) {
        case Stability::Stable: return "stable";
        case Stability::Unstable: return "unstable";
        case Stability::Neutral: return "neutral";
    }
    return "unknown";
}

std::string_view to_string(Placement p) {
    switch (p) {
        case Placement::Admissible: return "admissible";
        case Placement::Virtual: return "virtual";
        case Placement::Boundary: return "boundary";
    }
    return "unknown";
}

std::string_view to_string(Visibility v) {
    switch (v) {
        case Visibility::Visible: return "visible";
        case Visibility::Invisible: return "invisible";
        case Visibility::Degenerate: return "degenerate";
    }
    return "unknown";
}

bool is_sliding(Region r) {
    return r == Region::AttractiveSliding || r == Region::RepulsiveSliding || r == Region::SingularSliding;
}

bool is_tangency(Region r) {
    return r == Region::TangencyLeft || r == Region::TangencyRight || r == Region::TangencyBoth;
}

bool AffineField::nondegenerate() const {
    return std::abs(A.det()) > 1e-13 * std::max(1.0, A.norm_max() * A.norm_max());
}

FilippovSystem FilippovSystem::mirrored_x() const {
    return {conjugate(right, kMirrorX), conjugate(left, kMirrorX)};
}

FilippovSystem FilippovSystem::mirrored_y() const {
    return {conjugate(left, kMirrorY), conjugate(right, kMirrorY)};
}

Region SigmaDecomposition::label_at(double y) const {
    for (const auto& p : points)
        if (p.y == y) return p.label;
    for (const auto& iv : intervals)
        if (iv.lo < y && y < iv.hi) return iv.label;
    return points.empty() ? intervals.front().label : points.front().label;
}

std::pair<FilippovSystem, AxisTransform> normalize_to_y_axis(const RawSystem& raw) {
    const double c1 = raw.c.x;
    const double c2 = raw.c.y;
    if (!(std::isfinite(c1) && std::isfinite(c2)) || (c1 == 0.0 && c2 == 0.0))
        throw Error(ErrorCode::ZeroNormal, "switching-line normal c must be nonzero");

    AxisTransform tr;
    tr.B = c1 != 0.0 ? Mat2{1.0 / c1, -c2 / c1, 0.0, 1.0} : Mat2{0.0, 1.0, 1.0 / c2, 0.0};
    tr.nu = Vec2{-raw.d, 0.0};

    // old = B(new + nu): new field is B^{-1} A B new + B^{-1}(A B nu + b).
    const Mat2 Binv = tr.B.inverse();
    auto pull = [&](const AffineField& f) {
        return AffineField{Binv * f.A * tr.B, Binv * (f.A * (tr.B * tr.nu) + f.b)};
    };
    return {FilippovSystem{pull(raw.minus), pull(raw.plus)}, tr};
}

Region classify_point(const FilippovSystem& sys, double y) {
    if (field_vanishes(sys.right, y)) return Region::BoundaryEquilibriumRight;
    if (field_vanishes(sys.left, y)) return Region::BoundaryEquilibriumLeft;

    const Vec2 fp = sys.right(Vec2{0.0, y});
    const Vec2 fm = sys.left(Vec2{0.0, y});
    const bool zp = vanishes(fp.x, fp.norm());
    const bool zm = vanishes(fm.x, fm.norm());
    if (zp && zm) {
        return sys.right.A.a12 * sys.left.A.a12 < 0.0 ? Region::SingularSliding : Region::TangencyBoth;
    }
    if (zp) return Region::TangencyRight;
    if (zm) return Region::TangencyLeft;
    if (fp.x * fm.x > 0.0) return Region::Crossing;
    return fp.x < 0.0 ? Region::AttractiveSliding : Region::RepulsiveSliding;
}

SigmaDecomposition sigma_decomposition(const FilippovSystem& sys) {
    std::vector<double> breaks;
    for (const AffineField* f : {&sys.right, &sys.left})
        if (f->A.a12 != 0.0) breaks.push_back(-f->b.x / f->A.a12);
    std::sort(breaks.begin(), breaks.end());
    if (breaks.size() == 2 && std::abs(breaks[1] - breaks[0]) <= kVanishTol * std::max(1.0, std::abs(breaks[0]))) {
        // Coincident roots: keep the one the point classifier agrees on.
        breaks.pop_back();
    }

    SigmaDecomposition out;
    double lo = -kInf;
    for (std::size_t i = 0; i <= breaks.size(); ++i) {
        const double hi = i < breaks.size() ? breaks[i] : kInf;
        double probe;
        if (std::isinf(lo) && std::isinf(hi))
            probe = 0.0;
        else if (std::isinf(lo))
            probe = hi - std::max(1.0, std::abs(hi));
        else if (std::isinf(hi))
            probe = lo + std::max(1.0, std::abs(lo));
        else
            probe = 0.5 * (lo + hi);
        out.intervals.push_back({lo, hi, classify_point(sys, probe)});
        if (i < breaks.size()) out.points.push_back({breaks[i], classify_point(sys, breaks[i])});
        lo = hi;
    }
    return out;
}

SlidingRational sliding_rational(const FilippovSystem& sys) {
    const Mat2& P = sys.right.A;
    const Mat2& M = sys.left.A;
    const Vec2& p = sys.right.b;
    const Vec2& m = sys.left.b;
    SlidingRational r{};
    r.q2 = M.a12 * P.a22 - P.a12 * M.a22;
    r.q1 = M.a12 * p.y + m.x * P.a22 - P.a12 * m.y - p.x * M.a22;
    r.q0 = m.x * p.y - p.x * m.y;
    r.d1 = M.a12 - P.a12;
    r.d0 = m.x - p.x;
    return r;
}

double sliding_field(const FilippovSystem& sys, double y) {
    const Region reg = classify_point(sys, y);
    if (reg == Region::Crossing)
        throw Error(ErrorCode::NotSlidingRegion, "point (0, " + std::to_string(y) + ") lies in the crossing region");

    const double up = sys.right.normal(y);
    const double um = sys.left.normal(y);
    const double vp = sys.right.tangential(y);
    const double vm = sys.left.tangential(y);
    if (reg == Region::SingularSliding || reg == Region::TangencyBoth) {
        // Both normal components vanish; the quotient extends by its limit along the axis.
        const double ap = sys.right.A.a12;
        const double am = sys.left.A.a12;
        return am != ap ? (am * vp - ap * vm) / (am - ap) : 0.0;
    }
    const double den = um - up;
    if (den == 0.0) return 0.0;
    return (um * vp - up * vm) / den;
}

std::vector<Vec2> pseudo_equilibria(const FilippovSystem& sys) {
    const SigmaDecomposition dec = sigma_decomposition(sys);
    const SlidingRational sr = sliding_rational(sys);
    std::vector<Vec2> out;
    const auto roots = quadratic_roots(sr.q2, sr.q1, sr.q0);
    for (const auto& iv : dec.intervals) {
        if (iv.label != Region::AttractiveSliding && iv.label != Region::RepulsiveSliding) continue;
        for (double y : roots)
            if (iv.lo < y && y < iv.hi && classify_point(sys, y) == iv.label) out.push_back({0.0, y});
    }
    for (const auto& p : dec.points) {
        if (p.label != Region::SingularSliding) continue;
        const double fs = sliding_field(sys, p.y);
        const double scale = std::max(std::abs(sys.right.tangential(p.y)), std::abs(sys.left.tangential(p.y)));
        if (vanishes(fs, scale)) out.push_back({0.0, p.y});
    }
    std::sort(out.begin(), out.end(), [](const Vec2& a, const Vec2& b) { return a.y < b.y; });
    return out;
}

EquilibriumInfo equilibrium_info(const AffineField& field, Side side) {
    if (!field.nondegenerate()) throw Error(ErrorCode::DegenerateField, "det(A) = 0, equilibrium is not isolated");
    const Mat2& A = field.A;
    EquilibriumInfo info;
    info.location = -(A.inverse() * field.b);

    const double tr = A.trace();
    const double det = A.det();
    const double disc = tr * tr - 4.0 * det;
    const double scale = std::max(1.0, A.norm_max());
    const double tr_tol = 1e-12 * scale;
    const double disc_tol = 1e-12 * scale * scale;
    if (det < 0.0) {
        info.kind = EqKind::Saddle;
        info.stability = Stability::Unstable;
    } else if (disc < -disc_tol) {
        info.kind = std::abs(tr) <= tr_tol ? EqKind::Center : EqKind::Focus;
    } else if (disc > disc_tol) {
        info.kind = EqKind::Node;
    } else {
        info.kind = EqKind::Degenerate;  // repeated eigenvalue
    }
    if (info.kind != EqKind::Saddle) {
        if (std::abs(tr) <= tr_tol)
            info.stability = Stability::Neutral;
        else
            info.stability = tr > 0.0 ? Stability::Unstable : Stability::Stable;
    }

    const double x = info.location.x;
    const double x_tol = 1e-12 * std::max(1.0, info.location.norm());
    if (std::abs(x) <= x_tol)
        info.placement = Placement::Boundary;
    else if ((side == Side::Right) == (x > 0.0))
        info.placement = Placement::Admissible;
    else
        info.placement = Placement::Virtual;
    return info;
}

std::optional<TangencyInfo> tangency_point(const FilippovSystem& sys, Side side) {
    const AffineField& f = sys.field(side);
    if (f.A.a12 == 0.0) return std::nullopt;
    const double y = -f.b.x / f.A.a12;
    if (field_vanishes(f, y)) return std::nullopt;

    // At a tangency ẍ = a12 ẏ, since ẋ = 0 there.
    const double xdd = f.A.a12 * f.tangential(y);
    const double scale = std::abs(f.A.a12) * std::max(1.0, f(Vec2{0.0, y}).norm());
    TangencyInfo t;
    t.location = {0.0, y};
    t.side = side;
    if (vanishes(xdd, scale))
        t.visibility = Visibility::Degenerate;
    else if ((xdd > 0.0) == (side == Side::Right))
        t.visibility = Visibility::Visible;
    else
        t.visibility = Visibility::Invisible;
    return t;
}

std::vector<TangencyInfo> tangency_points(const FilippovSystem& sys) {
    std::vector<TangencyInfo> out;
    for (Side s : {Side::Left, Side::Right})
        if (auto t = tangency_point(sys, s)) out.push_back(*t);
    return out;
}

}  // namespace flp
