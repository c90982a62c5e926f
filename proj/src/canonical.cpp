#include "flp/canonical.hpp"

#include <cmath>

#include "flp/roots.hpp"

namespace flp {

namespace {

Vec2 mirror(const Vec2& z, bool mx, bool my) { return {mx ? -z.x : z.x, my ? -z.y : z.y}; }

}  // namespace

std::string_view to_string(FocusSide s) {
    switch (s) {
        case FocusSide::None: return "none";
        case FocusSide::Left: return "left";
        case FocusSide::Right: return "right";
        case FocusSide::Both: return "both";
    }
    return "unknown";
}

double CanonicalParams::nu() const { return std::sqrt(std::abs(gamma2)); }

FilippovSystem CanonicalParams::system() const {
    FilippovSystem s;
    s.right = {{2.0 * alpha, 1.0, m - alpha * alpha, 0.0}, {0.0, beta}};
    s.left = {{gamma1, static_cast<double>(delta), gamma2, gamma3}, {eta, rho}};
    return s;
}

AffineField SideMap::transform(const AffineField& f) const {
    const Mat2 Li = L.inverse();
    return {time_scale * (L * f.A * Li), time_scale * (L * (f.b - f.A * (Li * o)))};
}

SideMap SideMap::then(const SideMap& next) const {
    return {next.L * L, next.L * o + next.o, time_scale * next.time_scale};
}

Vec2 TransformRecord::push(const Vec2& z) const {
    const Vec2 m = mirror(z, mirror_x, mirror_y);
    return m.x >= 0.0 ? right.apply(m) : left.apply(m);
}

Vec2 TransformRecord::pull(const Vec2& z) const {
    // Side maps fix the sign of x, so the side is read off the image.
    const Vec2 m = z.x >= 0.0 ? right.invert(z) : left.invert(z);
    return mirror(m, mirror_x, mirror_y);
}

FilippovSystem TransformRecord::push(const FilippovSystem& sys) const {
    FilippovSystem w = sys;
    if (mirror_x) w = w.mirrored_x();
    if (mirror_y) w = w.mirrored_y();
    return {left.transform(w.left), right.transform(w.right)};
}

double TransformRecord::time_scale_at(const Vec2& z) const {
    const Vec2 m = mirror(z, mirror_x, mirror_y);
    return m.x >= 0.0 ? right.time_scale : left.time_scale;
}

TransformRecord TransformRecord::then(const TransformRecord& next) const {
    if (next.mirror_x || next.mirror_y)
        throw Error(ErrorCode::DomainError, "cannot append a mirrored record");
    TransformRecord out = *this;
    out.right = right.then(next.right);
    out.left = left.then(next.left);
    out.steps.insert(out.steps.end(), next.steps.begin(), next.steps.end());
    return out;
}

Premises check_premises(const FilippovSystem& sys) {
    if (!sys.left.nondegenerate() || !sys.right.nondegenerate())
        throw Error(ErrorCode::DegenerateField, "both fields must have det(A) != 0");
    Premises p;
    const double lhs = sys.right.A.a12 * sys.left.b.x;
    const double rhs = sys.left.A.a12 * sys.right.b.x;
    p.cross_products_distinct = std::abs(lhs - rhs) > 1e-12 * std::max({1.0, std::abs(lhs), std::abs(rhs)});

    const EquilibriumInfo el = equilibrium_info(sys.left, Side::Left);
    const EquilibriumInfo er = equilibrium_info(sys.right, Side::Right);
    const bool fl = el.kind == EqKind::Focus && el.placement == Placement::Admissible;
    const bool fr = er.kind == EqKind::Focus && er.placement == Placement::Admissible;
    if (fl) p.left_focus_stability = el.stability;
    if (fr) p.right_focus_stability = er.stability;
    p.admissible_focus_side = fl && fr ? FocusSide::Both : fr ? FocusSide::Right : fl ? FocusSide::Left : FocusSide::None;
    return p;
}

CanonicalForm to_canonical(const FilippovSystem& sys) {
    const Premises prem = check_premises(sys);
    if (prem.admissible_focus_side == FocusSide::None)
        throw Error(ErrorCode::NoAdmissibleFocus, "neither field has an admissible focus");

    CanonicalForm out;
    TransformRecord& rec = out.record;
    FilippovSystem work = sys;
    if (prem.admissible_focus_side == FocusSide::Left) {
        rec.mirror_x = true;
        rec.steps.emplace_back("mirror x");
        work = work.mirrored_x();
    }
    // The chain below has Jacobian determinant a12+; flip y first so it stays orientation preserving.
    if (work.right.A.a12 < 0.0) {
        rec.mirror_y = true;
        rec.steps.emplace_back("mirror y");
        work = work.mirrored_y();
    }

    const Mat2& P = work.right.A;
    const Vec2& p = work.right.b;
    const Mat2& M = work.left.A;
    const Vec2& q = work.left.b;
    const double a = P.a12;
    const double a2 = a * a;

    ChainIntermediates& ci = out.intermediates;
    ci.A11 = P.a11 + P.a22;
    ci.A21 = (a * P.a21 - P.a11 * P.a22) / a2;
    ci.B = (a * p.y - P.a22 * p.x) / a2;
    ci.C11 = (M.a11 * a + M.a12 * P.a22) / a;
    ci.C22 = (a * M.a22 - P.a22 * M.a12) / a;
    ci.D1 = (a * q.x - M.a12 * p.x) / a;
    ci.C21 = (a * M.a21 + M.a22 * P.a22 - P.a22 * ci.C11) / a2;
    ci.D2 = (a * q.y - P.a22 * q.x - p.x * ci.C22) / a2;
    ci.u = M.a12 != 0.0 ? 1.0 / std::abs(M.a12 * a) : 1.0;
    const double disc = ci.A11 * ci.A11 + 4.0 * ci.A21 * a2;
    ci.w = disc == 0.0 ? 1.0 : std::sqrt(std::abs(disc)) / (2.0 * a2);

    CanonicalParams& cp = out.params;
    cp.delta = sgn(M.a12 * a);
    cp.alpha = ci.A11 / (2.0 * ci.w * a2);
    cp.beta = ci.B / (ci.w * a2);
    cp.eta = ci.u * ci.D1;
    cp.rho = ci.u * ci.D2 / ci.w;
    cp.gamma1 = ci.u * ci.C11 / ci.w;
    cp.gamma2 = ci.u * ci.C21 / (ci.w * ci.w);
    cp.gamma3 = ci.u * ci.C22 / ci.w;
    cp.m = sgn(disc);

    // old = T new + c with T = [[1,0],[a22/a12, a12]], c = (0, -b1/a12).
    const Mat2 T{1.0, 0.0, P.a22 / a, a};
    const Vec2 c{0.0, -p.x / a};
    const Mat2 Ti = T.inverse();
    const SideMap vch{Ti, -(Ti * c), 1.0};
    const SideMap rescale_right{Mat2::identity(), {}, 1.0 / a2};
    const SideMap rescale_left{Mat2::identity(), {}, ci.u};
    const SideMap wstep{Mat2::diag(ci.w, 1.0), {}, 1.0 / ci.w};
    rec.right = vch.then(rescale_right).then(wstep);
    rec.left = vch.then(rescale_left).then(wstep);
    rec.steps.emplace_back("shift and shear of y");
    rec.steps.emplace_back("time rescale per side");
    rec.steps.emplace_back("x and time scaling by w");
    return out;
}

std::pair<CanonicalParams, TransformRecord> shear_to_equal_gammas(const CanonicalParams& p) {
    if (p.delta != 1) throw Error(ErrorCode::DeltaNotOne, "the shear needs delta = 1");
    const double k = 0.5 * (p.gamma1 - p.gamma3);
    CanonicalParams out = p;
    out.gamma1 = p.gamma1 - k;
    out.gamma3 = p.gamma3 + k;
    out.gamma2 = p.gamma2 + k * k;
    out.rho = p.rho + k * p.eta;
    TransformRecord rec;
    rec.left.L = Mat2{1.0, 0.0, k, 1.0};
    rec.steps.emplace_back("shear on x <= 0");
    return {out, rec};
}

char classify_csl(const CanonicalParams& p) {
    if (p.eta == 0.0) throw Error(ErrorCode::EtaZero, "eta = 0 has no pattern");
    const bool pos = p.eta > 0.0;
    switch (p.delta) {
        case 0: return pos ? 'b' : 'a';
        case -1: return pos ? 'd' : 'c';
        default: return pos ? 'f' : 'e';
    }
}

}  // namespace flp
