#include "flp/halfmaps.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "flp/roots.hpp"

namespace flp {

namespace {

constexpr double kPi = std::numbers::pi;

// Both maps are evaluated in the offset s = (rate * t) - pi, which keeps sin s accurate
// where the maps blow up (s -> 0+).

struct RightEval {
    double y, P, t;
};

RightEval right_at(double s, const CanonicalParams& p) {
    const double a = p.alpha;
    const double t = kPi + s;
    const double k = p.beta / (1.0 + a * a);
    const double cs = std::cos(s);
    const double sn = std::sin(s);
    const double psi_p = 1.0 + std::exp(a * t) * (cs - a * sn);
    const double psi_m = 1.0 + std::exp(-a * t) * (cs + a * sn);
    return {k * std::exp(-a * t) * psi_p / sn, -k * std::exp(a * t) * psi_m / sn, t};
}

struct LeftEval {
    double y, P, t;
};

LeftEval left_at(double s, const CanonicalParams& p, double nu) {
    const double g3 = p.gamma3;
    const double t = (kPi + s) / nu;
    const double c0 = nu * (p.rho - g3 * p.eta) / p.Delta();
    const double cs = std::cos(s);
    const double sn = std::sin(s);
    const double phi_p = 1.0 + std::exp(g3 * t) * (cs - g3 / nu * sn);
    const double phi_m = 1.0 + std::exp(-g3 * t) * (cs + g3 / nu * sn);
    return {-p.eta - c0 * phi_m * std::exp(g3 * t) / sn, -p.eta + c0 * phi_p * std::exp(-g3 * t) / sn, t};
}

double s_hat_plus(const CanonicalParams& p) {
    const double a = p.alpha;
    auto f = [&](double s) { return 1.0 + std::exp(a * (kPi + s)) * (std::cos(s) - a * std::sin(s)); };
    return bisect_root(f, 0.0, kPi);
}

double s_hat_minus(const CanonicalParams& p, double nu) {
    const double g3 = p.gamma3;
    auto f = [&](double s) {
        const double t = (kPi + s) / nu;
        return 1.0 + std::exp(g3 * t) * (std::cos(s) - g3 / nu * std::sin(s));
    };
    return bisect_root(f, 0.0, kPi);
}

/// s in (0, s_hat] with y(s) = y; y(s) is strictly decreasing.
template <class Eval>
double invert(double y, double s_hat, Eval&& eval) {
    double lo = s_hat;
    if (eval(lo) >= y) return lo;
    // Shrink toward 0 until y(s) exceeds the target.
    double hi = 0.5 * s_hat;
    while (eval(hi) < y) {
        lo = hi;
        hi *= 0.5;
        if (hi < 1e-300) throw Error(ErrorCode::DomainError, "half-map inversion underflow");
    }
    return bisect_root([&](double s) { return eval(s) - y; }, hi, lo);
}

double right_s(double y, const HalfMapContext& ctx) {
    if (!(y >= 0.0)) throw Error(ErrorCode::DomainError, "P_R needs y >= 0");
    const double sh = ctx.t_hat_plus - kPi;
    if (y == 0.0) return sh;
    return invert(y, sh, [&](double s) { return right_at(s, ctx.params).y; });
}

double left_s(double y, const HalfMapContext& ctx) {
    if (!(y >= ctx.y_eta)) throw Error(ErrorCode::DomainError, "P_L^{-1} needs y >= y_eta");
    const double sh = ctx.nu * ctx.t_hat_minus - kPi;
    if (y == ctx.y_eta) return sh;
    return invert(y, sh, [&](double s) { return left_at(s, ctx.params, ctx.nu).y; });
}

}  // namespace

bool satisfies_addcond(const CanonicalParams& p, std::string* why) {
    auto fail = [&](const char* msg) {
        if (why) *why = msg;
        return false;
    };
    if (!(p.alpha > 0.0)) return fail("alpha > 0");
    if (!(p.beta > 0.0)) return fail("beta > 0");
    if (!(p.eta > 0.0)) return fail("eta > 0");
    if (!(p.rho - p.gamma3 * p.eta < 0.0)) return fail("rho - gamma3*eta < 0");
    if (p.delta != 1) return fail("delta = 1");
    if (p.gamma1 != p.gamma3) return fail("gamma1 = gamma3");
    if (!(p.tau() > 0.0)) return fail("tau > 0");
    if (!(p.tau() * p.tau() < 4.0 * p.Delta())) return fail("tau^2 < 4 Delta");
    if (p.m != -1) return fail("m = -1");
    return true;
}

HalfMapContext HalfMapContext::make(const CanonicalParams& p) {
    HalfMapContext ctx;
    ctx.params = p;
    if (p.delta == 1 && p.gamma1 != p.gamma3) {
        auto [sheared, rec] = shear_to_equal_gammas(p);
        ctx.params = sheared;
        ctx.params.gamma1 = ctx.params.gamma3;  // exact equality after rounding
        ctx.shear = rec;
    }
    std::string why;
    if (!satisfies_addcond(ctx.params, &why)) throw Error(ErrorCode::ConditionViolated, "half-map hypotheses fail: " + why);
    ctx.nu = ctx.params.nu();
    const double sm = s_hat_minus(ctx.params, ctx.nu);
    const double sp = s_hat_plus(ctx.params);
    ctx.t_hat_minus = (kPi + sm) / ctx.nu;
    ctx.t_hat_plus = kPi + sp;
    ctx.y_eta = left_at(sm, ctx.params, ctx.nu).y;
    ctx.y_star = std::max(ctx.y_eta, 0.0);
    return ctx;
}

double phi(int sign, double t, const HalfMapContext& ctx) {
    const double g3 = ctx.params.gamma3;
    const double nu = ctx.nu;
    const double sg = sign >= 0 ? 1.0 : -1.0;
    return 1.0 - std::exp(sg * g3 * t) * (std::cos(nu * t) - sg * g3 / nu * std::sin(nu * t));
}

double psi(int sign, double t, const HalfMapContext& ctx) {
    const double a = ctx.params.alpha;
    const double sg = sign >= 0 ? 1.0 : -1.0;
    return 1.0 - std::exp(sg * a * t) * (std::cos(t) - sg * a * std::sin(t));
}

std::pair<double, double> solve_t_hats(const CanonicalParams& p) {
    const HalfMapContext ctx = HalfMapContext::make(p);
    return {ctx.t_hat_minus, ctx.t_hat_plus};
}

MapPoint right_map_param(double t_plus, const HalfMapContext& ctx) {
    if (!(t_plus > kPi && t_plus <= ctx.t_hat_plus)) throw Error(ErrorCode::OutOfRange, "t_plus outside (pi, t_hat_plus]");
    const RightEval e = right_at(t_plus - kPi, ctx.params);
    return {e.y, e.P};
}

MapPoint left_map_param(double t_minus, const HalfMapContext& ctx) {
    const double lo = kPi / ctx.nu;
    if (!(t_minus > lo && t_minus <= ctx.t_hat_minus)) throw Error(ErrorCode::OutOfRange, "t_minus outside (pi/nu, t_hat_minus]");
    const LeftEval e = left_at(ctx.nu * t_minus - kPi, ctx.params, ctx.nu);
    return {e.y, e.P};
}

double P_R(double y, const HalfMapContext& ctx) {
    if (y == 0.0) return right_at(ctx.t_hat_plus - kPi, ctx.params).P;
    return right_at(right_s(y, ctx), ctx.params).P;
}

double P_L_inv(double y, const HalfMapContext& ctx) {
    if (y == ctx.y_eta) return -ctx.params.eta;
    return left_at(left_s(y, ctx), ctx.params, ctx.nu).P;
}

double right_time(double y, const HalfMapContext& ctx) { return kPi + right_s(y, ctx); }

double left_time(double y, const HalfMapContext& ctx) { return (kPi + left_s(y, ctx)) / ctx.nu; }

HalfMapDerivatives derivatives(double y, const HalfMapContext& ctx) {
    if (!(y > ctx.y_star)) throw Error(ErrorCode::DomainError, "derivatives need y > y_star");
    const CanonicalParams& p = ctx.params;
    const RightEval r = right_at(right_s(y, ctx), p);
    const LeftEval l = left_at(left_s(y, ctx), p, ctx.nu);
    const double a = p.alpha;
    const double g3 = p.gamma3;
    const double eta = p.eta;
    const double nu = ctx.nu;

    HalfMapDerivatives d{};
    d.dPR = y / r.P * std::exp(2.0 * a * r.t);
    d.d2PR = 2.0 * p.beta * p.beta / (1.0 + a * a) * (std::sinh(a * r.t) - a * std::sin(r.t)) / (r.P * r.P * r.P) *
             std::exp(3.0 * a * r.t);
    const double Pe = l.P + eta;
    d.dPLinv = (y + eta) / Pe * std::exp(-2.0 * g3 * l.t);
    const double k = p.rho - g3 * eta;
    d.d2PLinv = -2.0 * k * k / p.Delta() * (std::sinh(g3 * l.t) - g3 / nu * std::sin(nu * l.t)) / (Pe * Pe * Pe) *
                std::exp(-3.0 * g3 * l.t);
    return d;
}

double displacement(double y, const HalfMapContext& ctx) {
    if (!(y >= ctx.y_star)) throw Error(ErrorCode::DomainError, "D needs y >= y_star");
    return P_L_inv(y, ctx) - P_R(y, ctx);
}

double displacement_slope(double y, const HalfMapContext& ctx) {
    const HalfMapDerivatives d = derivatives(y, ctx);
    return d.dPLinv - d.dPR;
}

std::vector<DisplacementZero> zeros_of_D(const HalfMapContext& ctx) {
    constexpr double kYMax = 1e12;
    const double ys = ctx.y_star;
    auto D = [&](double y) { return displacement(y, ctx); };
    auto slope = [&](double y) { return displacement_slope(y, ctx); };
    auto make_zero = [&](double y, bool endpoint) {
        double dp = y > ys ? slope(y) : -std::numeric_limits<double>::infinity();
        return DisplacementZero{y, sgn(dp), dp, endpoint};
    };

    // D is convex with D'(y_star+) < 0 and D'(+inf) > 0: locate its minimiser first.
    double hi = ys + 1.0;
    while (slope(hi) <= 0.0) {
        hi = ys + 2.0 * (hi - ys);
        if (hi > kYMax) return {};
    }
    double lo = ys + 1e-12 * std::max(1.0, ys);
    if (slope(lo) > 0.0) lo = ys;
    const double ym = lo == ys ? ys : bisect_root(slope, lo, hi);

    std::vector<DisplacementZero> out;
    const double d0 = D(ys);
    const double dmin = D(ym);
    const bool endpoint_zero = std::abs(d0) <= 1e-9 * std::max(1.0, std::abs(ys));
    if (endpoint_zero) out.push_back({ys, -1, -std::numeric_limits<double>::infinity(), true});
    if (dmin >= 0.0) return out;
    if (!endpoint_zero && d0 > 0.0) out.push_back(make_zero(brent_root(D, ys, ym), false));

    double top = std::max(ym + 1.0, 2.0 * ym);
    while (D(top) <= 0.0) {
        top *= 2.0;
        if (top > kYMax) return out;
    }
    out.push_back(make_zero(brent_root(D, ym, top), false));
    return out;
}

}  // namespace flp
