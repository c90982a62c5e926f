#include <doctest.h>

#include <array>
#include <cmath>
#include <numbers>
#include <random>

#include <boost/numeric/odeint.hpp>

#include "flp/canonical.hpp"
#include "flp/flow.hpp"
#include "flp/halfmaps.hpp"
#include "flp/roots.hpp"

using namespace flp;
namespace odeint = boost::numeric::odeint;

namespace {

constexpr double kPi = std::numbers::pi;

using State = std::array<double, 2>;

Vec2 integrate(const AffineField& f, const Vec2& z0, double t) {
    State s{z0.x, z0.y};
    auto rhs = [&](const State& x, State& dx, double) {
        const Vec2 v = f(Vec2{x[0], x[1]});
        dx = {v.x, v.y};
    };
    odeint::integrate_adaptive(odeint::make_controlled<odeint::runge_kutta_dopri5<State>>(1e-14, 1e-14), rhs, s, 0.0, t, 1e-3);
    return {s[0], s[1]};
}

AffineField random_field(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    return {Mat2{U(rng), U(rng), U(rng), U(rng)}, Vec2{U(rng), U(rng)}};
}

FilippovSystem example1(double alpha, double rho) {
    CanonicalParams p;
    p.alpha = alpha;
    p.beta = 1.0;
    p.delta = 1;
    p.eta = 1.0;
    p.rho = rho;
    p.gamma1 = 2.0;
    p.gamma2 = -2.0;
    return p.system();
}

}  // namespace

TEST_CASE("linear flow at t = 0 is the identity") {
    std::mt19937_64 rng(1);
    for (int i = 0; i < 20; ++i) {
        const AffineField f = random_field(rng);
        const Vec2 z{0.3, -0.7};
        const Vec2 w = linear_flow(f, z, 0.0);
        CHECK(w.x == z.x);
        CHECK(w.y == z.y);
    }
}

TEST_CASE("linear flow matches an adaptive integrator") {
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        const AffineField f = random_field(rng);
        const Vec2 z0{U(rng), U(rng)};
        for (double t : {0.7, 2.5, 10.0}) {
            const Vec2 a = linear_flow(f, z0, t);
            const Vec2 b = integrate(f, z0, t);
            worst = std::max(worst, (a - b).norm() / std::max(1.0, b.norm()));
        }
    }
    CHECK(worst < 1e-9);
}

TEST_CASE("linear flow handles singular and repeated-eigenvalue matrices") {
    const std::array<AffineField, 4> fields = {
        AffineField{Mat2{0.0, 1.0, 0.0, 0.0}, Vec2{0.5, -1.0}},   // nilpotent
        AffineField{Mat2{1.0, 2.0, 0.5, 1.0}, Vec2{1.0, 0.3}},    // det 0
        AffineField{Mat2{-0.5, 1.0, 0.0, -0.5}, Vec2{0.2, 0.1}},  // Jordan block
        AffineField{Mat2{0.0, 0.0, 0.0, 0.0}, Vec2{1.0, 2.0}},    // zero matrix
    };
    for (const auto& f : fields) {
        for (double t : {0.1, 1.0, 3.0}) {
            const Vec2 a = linear_flow(f, {0.2, -0.4}, t);
            const Vec2 b = integrate(f, {0.2, -0.4}, t);
            CHECK((a - b).norm() < 1e-9 * std::max(1.0, b.norm()));
        }
    }
}

TEST_CASE("linear flow semigroup property") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> U(0.0, 2.0);
    for (int i = 0; i < 100; ++i) {
        const AffineField f = random_field(rng);
        const Vec2 z0{0.4, 0.9};
        const double t1 = U(rng), t2 = U(rng);
        const Vec2 a = linear_flow(f, z0, t1 + t2);
        const Vec2 b = linear_flow(f, linear_flow(f, z0, t1), t2);
        CHECK((a - b).norm() < 1e-10 * std::max(1.0, a.norm()));
    }
}

TEST_CASE("expm agrees with the flow of the homogeneous system") {
    const Mat2 A{0.3, -1.2, 0.8, -0.1};
    const Mat2 E = expm(A, 1.7);
    const Vec2 e1 = linear_flow({A, {0.0, 0.0}}, {1.0, 0.0}, 1.7);
    CHECK(E.a11 == doctest::Approx(e1.x));
    CHECK(E.a21 == doctest::Approx(e1.y));
}

TEST_CASE("first return around a center") {
    const AffineField f{Mat2{0.0, 1.0, -1.0, 0.0}, Vec2{0.0, 1.0}};
    // (0,0) points along +y; the circle about (1,0) enters x > 0 and returns to (0,0) after one turn.
    const AxisHit h = first_return_to_axis(f, {0.0, 0.0}, Side::Right);
    CHECK(h.t == doctest::Approx(2 * kPi).epsilon(1e-10));
    CHECK(std::abs(h.z.y) < 1e-9);
}

TEST_CASE("first return from T_R of the unit canonical right field") {
    CanonicalParams p;
    p.alpha = 1.0;
    p.beta = 1.0;
    const AffineField right = p.system().right;
    const double t_hat = bisect_root([](double t) { return 1.0 - std::exp(t) * (std::cos(t) - std::sin(t)); }, kPi + 1e-9, 2 * kPi);
    const AxisHit h = first_return_to_axis(right, {0.0, 0.0}, Side::Right);
    CHECK(h.t == doctest::Approx(t_hat).epsilon(1e-10));
    CHECK(h.z.y == doctest::Approx(std::exp(t_hat) * std::sin(t_hat)).epsilon(1e-10));
    CHECK(h.t == doctest::Approx(3.9407).epsilon(1e-4));
    CHECK(h.z.y == doctest::Approx(-36.88).epsilon(1e-3));
    CHECK(std::abs(h.z.x) < 1e-12);
}

TEST_CASE("no return when x grows monotonically") {
    const AffineField f{Mat2::identity(), Vec2{1.0, 0.0}};
    CHECK_THROWS_AS(first_return_to_axis(f, {0.0, 0.0}, Side::Right), Error);
    CHECK_FALSE(try_first_return(f, {0.0, 0.0}, Side::Right).has_value());
}

TEST_CASE("return times agree with the parametric half-maps") {
    CanonicalParams p;
    p.alpha = 0.4;
    p.beta = 1.3;
    p.delta = 1;
    p.eta = 0.7;
    p.gamma1 = p.gamma3 = 0.3;
    p.gamma2 = -1.5;
    p.rho = -0.6;
    const HalfMapContext ctx = HalfMapContext::make(p);
    const FilippovSystem sys = p.system();
    for (double y : {0.01, 0.5, 3.0, 40.0}) {
        const AxisHit h = first_return_to_axis(sys.right, {0.0, y}, Side::Right);
        CHECK(h.z.y == doctest::Approx(P_R(y, ctx)).epsilon(1e-9));
        CHECK(h.t == doctest::Approx(right_time(y, ctx)).epsilon(1e-9));
    }
}

TEST_CASE("returns from the tangency point: centers close, unstable foci move outward") {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> U(-2.0, 2.0);
    int foci = 0, centers = 0;
    while (foci < 100 || centers < 50) {
        AffineField f{Mat2{U(rng), U(rng), U(rng), U(rng)}, Vec2{U(rng), U(rng)}};
        const bool make_center = centers < 50;
        if (make_center) f.A.a22 = -f.A.a11;
        const double tr = f.A.trace(), det = f.A.det();
        if (!(tr * tr < 4 * det) || f.A.a12 <= 0.0) continue;
        if (!make_center && tr <= 0.0) continue;
        if (equilibrium_info(f, Side::Right).placement != Placement::Admissible) continue;
        const double yT = -f.b.x / f.A.a12;
        const auto fwd = try_first_return(f, {0.0, yT}, Side::Right);
        if (make_center) {
            // The closed orbit through the tangency point comes back to it after one period.
            REQUIRE(fwd.has_value());
            CHECK(fwd->z.y == doctest::Approx(yT).epsilon(1e-8));
            CHECK(fwd->t == doctest::Approx(2 * kPi / std::sqrt(det)).epsilon(1e-8));
            ++centers;
            continue;
        }
        if (!fwd) continue;
        ++foci;
        // a12 > 0 turns orbits clockwise: an unstable focus returns strictly below T.
        CHECK(fwd->z.y < yT);
    }
}

TEST_CASE("example-1 orbits on the sliding set") {
    const FilippovSystem sys = example1(0.5, -1.0);
    SUBCASE("start on the pseudo-equilibrium") {
        const Orbit o = filippov_orbit(sys, {0.0, -0.5});
        CHECK(o.segments.empty());
        CHECK(o.terminal.kind == TerminalKind::PseudoEquilibrium);
        CHECK(o.terminal.point.y == doctest::Approx(-0.5));
    }
    SUBCASE("slide up to T_R then leave to the right") {
        OrbitOptions opt;
        opt.budget = 2;
        const Orbit o = filippov_orbit(sys, {0.0, -0.2}, opt);
        REQUIRE(o.segments.size() == 2);
        CHECK(o.segments[0].kind == SegmentKind::Slide);
        CHECK(o.segments[0].start.y == doctest::Approx(-0.2));
        CHECK(o.segments[0].end.y == 0.0);
        CHECK(o.segments[1].kind == SegmentKind::Flow);
        CHECK(o.segments[1].side == Side::Right);
        CHECK(o.segments[1].start.y == 0.0);
    }
}

TEST_CASE("budget exhaustion off the axis") {
    const FilippovSystem sys = example1(0.5, -1.0);
    OrbitOptions opt;
    opt.budget = 1;
    const Orbit o = filippov_orbit(sys, {0.5, 0.0}, opt);
    REQUIRE(o.segments.size() == 1);
    CHECK(o.segments[0].kind == SegmentKind::Flow);
    CHECK(o.terminal.kind == TerminalKind::BudgetExhausted);
}

TEST_CASE("segments are contiguous and flows stay on their side") {
    const FilippovSystem sys = example1(0.05, -0.0357);
    for (double y0 : {-3.0, -0.7, 0.1, 0.5, 2.0}) {
        const Orbit o = filippov_orbit(sys, {0.0, y0});
        for (std::size_t i = 1; i < o.segments.size(); ++i) CHECK(o.segments[i].start.y == o.segments[i - 1].end.y);
        for (const auto& s : sample_orbit(sys, o, 32)) {
            if (s.kind == SegmentKind::Slide) CHECK(s.z.x == 0.0);
        }
        for (const auto& seg : o.segments) {
            if (seg.kind != SegmentKind::Flow || seg.infinite) continue;
            for (int k = 1; k < 32; ++k) {
                const Vec2 z = linear_flow(sys.field(seg.side), seg.start, seg.duration * k / 32.0);
                CHECK((seg.side == Side::Right ? z.x : -z.x) > -1e-9);
            }
        }
    }
}

TEST_CASE("forward orbits never slide on repulsive intervals") {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> U(-3.0, 3.0);
    for (int i = 0; i < 300; ++i) {
        FilippovSystem sys;
        sys.right = {Mat2{U(rng), U(rng), U(rng), U(rng)}, Vec2{U(rng), U(rng)}};
        sys.left = {Mat2{U(rng), U(rng), U(rng), U(rng)}, Vec2{U(rng), U(rng)}};
        try {
            const Orbit o = filippov_orbit(sys, {U(rng), U(rng)}, {50});
            for (const auto& s : o.segments) {
                if (s.kind != SegmentKind::Slide) continue;
                const double mid = 0.5 * (s.start.y + s.end.y);
                CHECK(classify_point(sys, mid) != Region::RepulsiveSliding);
            }
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::DegenerateTangency);
        }
    }
}

TEST_CASE("slide duration matches quadrature of the sliding field") {
    const FilippovSystem sys = example1(0.5, -1.0);
    // F = 2y + 1 on (-1, 0): time from -0.2 to -0.05 is ln((2*-0.05+1)/(2*-0.2+1))/2.
    const double t = slide_duration(sys, -0.2, -0.05);
    CHECK(t == doctest::Approx(0.5 * std::log(0.9 / 0.6)).epsilon(1e-12));
}
