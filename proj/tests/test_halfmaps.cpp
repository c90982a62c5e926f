#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "flp/flow.hpp"
#include "flp/halfmaps.hpp"
#include "flp/roots.hpp"

using namespace flp;

namespace {

constexpr double kPi = std::numbers::pi;

CanonicalParams base(double alpha, double g3) {
    CanonicalParams p;
    p.alpha = alpha;
    p.beta = 1.0;
    p.delta = 1;
    p.eta = 1.0;
    p.gamma1 = p.gamma3 = g3;
    p.gamma2 = -1.0;
    p.rho = g3 - 1.0;
    return p;
}

CanonicalParams mirrored_focus(double alpha) {
    CanonicalParams p;
    p.alpha = alpha;
    p.beta = 1.0;
    p.delta = 1;
    p.eta = 1.0;
    p.rho = -1.0;
    p.gamma1 = 2 * alpha;
    p.gamma2 = -1 - alpha * alpha;
    p.gamma3 = 0.0;
    return p;
}

std::vector<HalfMapContext> random_contexts(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    auto U = [&](double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); };
    std::vector<HalfMapContext> out;
    while (out.size() < n) {
        CanonicalParams p;
        p.alpha = U(0.05, 1.5);
        p.beta = U(0.2, 2.0);
        p.delta = 1;
        p.eta = U(0.2, 2.0);
        p.gamma1 = p.gamma3 = U(0.05, 1.0);
        p.gamma2 = U(-3.0, -0.2);
        p.rho = p.gamma3 * p.eta - U(0.1, 2.0);
        if (satisfies_addcond(p)) out.push_back(HalfMapContext::make(p));
    }
    return out;
}

}  // namespace

TEST_CASE("helper functions at their simple points") {
    const HalfMapContext ctx = HalfMapContext::make(base(1.0, 0.5));
    CHECK(psi(+1, kPi, ctx) == doctest::Approx(1.0 + std::exp(kPi)));
    CHECK(std::abs(psi(+1, ctx.t_hat_plus, ctx)) < 1e-12);
    CHECK(std::abs(phi(+1, ctx.t_hat_minus, ctx)) < 1e-12);
}

TEST_CASE("t_hat_plus for alpha = 1 matches a bisection of its defining equation") {
    const double t = bisect_root([](double s) { return std::cos(s) - std::sin(s) - std::exp(-s); }, kPi + 1e-9, 2 * kPi - 1e-9);
    const auto [tm, tp] = solve_t_hats(base(1.0, 0.5));
    CHECK(tp == doctest::Approx(t).epsilon(1e-12));
    CHECK(tp == doctest::Approx(3.9407).epsilon(1e-4));
    CHECK(tm > kPi);
    CHECK(tm <= 2 * kPi);
}

TEST_CASE("t_hat_plus approaches 2 pi as alpha goes to zero") {
    // Near 2 pi the root behaves like 2 pi - sqrt(4 pi alpha).
    for (double a : {1e-2, 1e-4, 1e-6}) {
        const double tp = solve_t_hats(base(a, 0.5)).second;
        const double t = bisect_root([a](double s) { return 1.0 - std::exp(a * s) * (std::cos(s) - a * std::sin(s)); },
                                     kPi + 1e-9, 2 * kPi - 1e-12);
        CHECK(tp == doctest::Approx(t).epsilon(1e-10));
        CHECK(tp < 2 * kPi);
        CHECK((2 * kPi - tp) / std::sqrt(4 * kPi * a) == doctest::Approx(1.0).epsilon(20 * std::sqrt(a)));
    }
    CHECK(solve_t_hats(base(1e-4, 0.5)).second > 6.0);
}

TEST_CASE("t_hat_minus approaches 2 pi / nu as gamma3 goes to zero") {
    for (double g : {1e-4, 1e-6}) {
        const double tm = solve_t_hats(base(1.0, g)).first;
        CHECK(tm < 2 * kPi);
        CHECK((2 * kPi - tm) / std::sqrt(4 * kPi * g) == doctest::Approx(1.0).epsilon(20 * std::sqrt(g)));
    }
}

TEST_CASE("phi changes sign once on (pi/nu, 2pi/nu]") {
    const HalfMapContext ctx = HalfMapContext::make(mirrored_focus(0.4));
    int changes = 0;
    double prev = phi(+1, kPi / ctx.nu + 1e-9, ctx);
    for (int i = 1; i <= 2000; ++i) {
        const double t = kPi / ctx.nu + kPi / ctx.nu * i / 2000.0;
        const double v = phi(+1, t, ctx);
        if ((v > 0) != (prev > 0)) ++changes;
        prev = v;
    }
    CHECK(changes == 1);
}

TEST_CASE("right map parametric endpoints and scaling") {
    const HalfMapContext ctx = HalfMapContext::make(base(1.0, 0.5));
    const MapPoint e = right_map_param(ctx.t_hat_plus, ctx);
    CHECK(std::abs(e.y) < 1e-12);
    const AxisHit h = first_return_to_axis(ctx.params.system().right, {0.0, 0.0}, Side::Right);
    CHECK(e.value == doctest::Approx(h.z.y).epsilon(1e-10));
    CHECK(P_R(0.0, ctx) == doctest::Approx(h.z.y).epsilon(1e-10));
    const MapPoint near_pi = right_map_param(kPi + 1e-6, ctx);
    CHECK(near_pi.y > 1e5);
    CHECK(near_pi.value < -1e5);
    CHECK_THROWS_AS(right_map_param(kPi, ctx), Error);
    CHECK_THROWS_AS(right_map_param(ctx.t_hat_plus + 0.1, ctx), Error);

    CanonicalParams p2 = ctx.params;
    p2.beta *= 2;
    const HalfMapContext ctx2 = HalfMapContext::make(p2);
    for (double t : {3.3, 3.6, 3.9}) {
        const MapPoint a = right_map_param(t, ctx), b = right_map_param(t, ctx2);
        CHECK(b.y == doctest::Approx(2 * a.y));
        CHECK(b.value == doctest::Approx(2 * a.value));
    }
}

TEST_CASE("left map parametric endpoints and flow consistency") {
    const HalfMapContext ctx = HalfMapContext::make(base(0.7, 0.4));
    const MapPoint e = left_map_param(ctx.t_hat_minus, ctx);
    CHECK(e.y == doctest::Approx(ctx.y_eta));
    CHECK(e.value == doctest::Approx(-ctx.params.eta));
    CHECK(P_L_inv(ctx.y_eta, ctx) == -ctx.params.eta);
    const MapPoint far = left_map_param(kPi / ctx.nu + 1e-6, ctx);
    CHECK(far.y > 1e4);
    CHECK(far.value < -1e4);
    const AffineField left = ctx.params.system().left;
    for (double t : {ctx.t_hat_minus - 0.01, 0.5 * (kPi / ctx.nu + ctx.t_hat_minus), kPi / ctx.nu + 0.05}) {
        const MapPoint m = left_map_param(t, ctx);
        const Vec2 z = linear_flow(left, {0.0, m.value}, t);
        CHECK(std::abs(z.x) < 1e-9 * std::max(1.0, std::abs(m.y)));
        CHECK(z.y == doctest::Approx(m.y).epsilon(1e-9));
    }
}

TEST_CASE("half-maps agree with the exact flow and are decreasing") {
    for (const auto& ctx : random_contexts(20, 41)) {
        const FilippovSystem sys = ctx.params.system();
        double prev_r = INFINITY, prev_l = INFINITY;
        for (int i = 0; i < 100; ++i) {
            const double y = ctx.y_star + std::pow(10.0, -2.0 + 4.0 * i / 99.0);
            const double pr = P_R(y, ctx), pl = P_L_inv(y, ctx);
            const auto hr = try_first_return(sys.right, {0.0, y}, Side::Right);
            REQUIRE(hr);
            CHECK(std::abs(hr->z.y - pr) < 1e-8 * std::max(1.0, std::abs(pr)));
            const auto hl = try_first_return(sys.left, {0.0, pl}, Side::Left);
            REQUIRE(hl);
            CHECK(std::abs(hl->z.y - y) < 1e-8 * std::max(1.0, y));
            CHECK(pr < prev_r);
            CHECK(pl < prev_l);
            CHECK(pr < 0.0);
            CHECK(pl < -ctx.params.eta);
            prev_r = pr;
            prev_l = pl;
        }
    }
}

TEST_CASE("derivative formulas against central differences") {
    for (const auto& ctx : random_contexts(10, 43)) {
        for (int i = 0; i < 5; ++i) {
            const double y = ctx.y_star + 0.5 + 2.0 * i;
            const HalfMapDerivatives d = derivatives(y, ctx);
            const double h = 1e-4 * (1.0 + std::abs(y));
            const double fr = (P_R(y + h, ctx) - P_R(y - h, ctx)) / (2 * h);
            const double fl = (P_L_inv(y + h, ctx) - P_L_inv(y - h, ctx)) / (2 * h);
            CHECK(fr == doctest::Approx(d.dPR).epsilon(1e-6));
            CHECK(fl == doctest::Approx(d.dPLinv).epsilon(1e-6));
            CHECK(d.dPR < 0.0);
            CHECK(d.dPLinv < 0.0);
            CHECK(d.d2PR < 0.0);
            CHECK(d.d2PLinv > 0.0);
        }
    }
}

TEST_CASE("slopes at infinity") {
    const HalfMapContext ctx = HalfMapContext::make(base(1.0, 0.5));
    const HalfMapDerivatives d = derivatives(1e5, ctx);
    CHECK(d.dPR == doctest::Approx(-std::exp(kPi)).epsilon(1e-2));
    CHECK(d.dPLinv == doctest::Approx(-std::exp(-0.5 * kPi / ctx.nu)).epsilon(1e-2));
    CHECK(P_R(1e5, ctx) / 1e5 == doctest::Approx(-std::exp(kPi)).epsilon(1e-2));
    CHECK(displacement_slope(1e6, ctx) == doctest::Approx(std::exp(kPi) - std::exp(-0.5 * kPi / ctx.nu)).epsilon(1e-2));
}

TEST_CASE("domains are enforced") {
    const HalfMapContext ctx = HalfMapContext::make(base(1.0, 0.5));
    CHECK_THROWS_AS(P_R(-1.0, ctx), Error);
    CHECK_THROWS_AS(P_L_inv(ctx.y_eta - 1.0, ctx), Error);
    CHECK_THROWS_AS(displacement(ctx.y_star - 1.0, ctx), Error);
}

TEST_CASE("conditions are checked") {
    CanonicalParams p = base(1.0, 0.5);
    p.alpha = -1.0;
    CHECK_FALSE(satisfies_addcond(p));
    try {
        HalfMapContext::make(p);
        FAIL("expected ConditionViolated");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::ConditionViolated);
    }
}

TEST_CASE("mirrored-focus family: one unstable crossing zero") {
    const HalfMapContext ctx = HalfMapContext::make(mirrored_focus(0.01));
    REQUIRE(ctx.shear.has_value());
    CHECK(ctx.params.gamma1 == ctx.params.gamma3);
    CHECK(displacement(ctx.y_star, ctx) < 0.0);
    CHECK(displacement(1e3, ctx) > 0.0);
    const auto zs = zeros_of_D(ctx);
    REQUIRE(zs.size() == 1);
    CHECK(zs[0].D_prime_sign > 0);
    CHECK(std::abs(displacement(zs[0].y, ctx)) < 1e-10);
    // Convexity over a grid.
    int bad = 0;
    for (int i = 1; i < 1000; ++i) {
        const double h = 0.05;
        const double y = ctx.y_star + 0.01 + h * i;
        if (displacement(y - h, ctx) + displacement(y + h, ctx) - 2 * displacement(y, ctx) <= 0.0) ++bad;
    }
    CHECK(bad == 0);
}

TEST_CASE("no zero when D stays positive") {
    // Sign-scan oracle: sample D densely and compare with the zero list.
    for (const auto& ctx : random_contexts(100, 47)) {
        int sign_changes = 0;
        double prev = displacement(ctx.y_star, ctx);
        for (int i = 1; i <= 400; ++i) {
            const double y = ctx.y_star + std::pow(10.0, -6.0 + 10.0 * i / 400.0);
            const double v = displacement(y, ctx);
            if ((v > 0) != (prev > 0)) ++sign_changes;
            prev = v;
        }
        const auto zs = zeros_of_D(ctx);
        CHECK(zs.size() <= 2);
        if (displacement(ctx.y_star, ctx) < 0.0) CHECK(zs.size() == 1);
        std::size_t interior = 0;
        for (const auto& z : zs) interior += z.at_endpoint ? 0 : 1;
        CHECK(interior == static_cast<std::size_t>(sign_changes));
    }
}
