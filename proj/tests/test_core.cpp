#include <doctest.h>

#include <cmath>
#include <random>

#include "flp/core.hpp"

using namespace flp;

namespace {

FilippovSystem example1(double alpha, double rho) {
    FilippovSystem s;
    s.right = {Mat2{2 * alpha, 1.0, -1.0 - alpha * alpha, 0.0}, Vec2{0.0, 1.0}};
    s.left = {Mat2{2.0, 1.0, -2.0, 0.0}, Vec2{1.0, rho}};
    return s;
}

FilippovSystem random_system(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> U(-3.0, 3.0);
    FilippovSystem s;
    s.right = {Mat2{U(rng), U(rng), U(rng), U(rng)}, Vec2{U(rng), U(rng)}};
    s.left = {Mat2{U(rng), U(rng), U(rng), U(rng)}, Vec2{U(rng), U(rng)}};
    return s;
}

}  // namespace

TEST_CASE("axis normalization keeps the vector field") {
    RawSystem raw;
    raw.plus = {Mat2{0.0, 1.0, -1.2, -0.1}, Vec2{0.0, 0.0}};
    raw.minus = {Mat2{0.0, 1.0, -0.8, -0.1}, Vec2{0.0, 0.0}};
    raw.c = {0.0, 1.0};
    const auto [sys, tf] = normalize_to_y_axis(raw);
    // A point above the raw switching line y = 0 lands on the right and the fields agree after the change.
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> U(-2.0, 2.0);
    for (int i = 0; i < 50; ++i) {
        const Vec2 z{U(rng), U(rng)};
        if (raw.H(z) == 0.0) continue;
        const Vec2 w = tf.to_axis_frame(z);
        CHECK((w.x > 0.0) == (raw.H(z) > 0.0));
        const AffineField& raw_f = raw.H(z) > 0.0 ? raw.plus : raw.minus;
        const Vec2 fz = raw_f(z);
        const Vec2 fw = (w.x > 0.0 ? sys.right : sys.left)(w);
        const Vec2 back = tf.B * fw;
        CHECK(back.x == doctest::Approx(fz.x).epsilon(1e-12));
        CHECK(back.y == doctest::Approx(fz.y).epsilon(1e-12));
        const Vec2 zz = tf.to_raw_frame(w);
        CHECK(zz.x == doctest::Approx(z.x));
        CHECK(zz.y == doctest::Approx(z.y));
    }
}

TEST_CASE("zero normal vector is rejected") {
    RawSystem raw;
    raw.c = {0.0, 0.0};
    try {
        normalize_to_y_axis(raw);
        FAIL("expected ZeroNormal");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::ZeroNormal);
    }
}

TEST_CASE("example-1 axis structure") {
    const FilippovSystem sys = example1(0.5, -1.0);
    // T_L = (0,-1), T_R = (0,0), attractive sliding in between.
    CHECK(classify_point(sys, -0.5) == Region::AttractiveSliding);
    CHECK(classify_point(sys, 0.5) == Region::Crossing);
    CHECK(classify_point(sys, -2.0) == Region::Crossing);
    CHECK(classify_point(sys, 0.0) == Region::TangencyRight);
    CHECK(classify_point(sys, -1.0) == Region::TangencyLeft);
    const auto pe = pseudo_equilibria(sys);
    REQUIRE(pe.size() == 1);
    CHECK(pe[0].y == doctest::Approx(1.0 / (-1.0 - 1.0)));
    // Sliding field (1 - rho) y + 1 on the sliding interval.
    for (double y : {-0.9, -0.6, -0.3, -0.1}) CHECK(sliding_field(sys, y) == doctest::Approx((1.0 + 1.0) * y + 1.0));
    const auto tr = tangency_point(sys, Side::Right);
    const auto tl = tangency_point(sys, Side::Left);
    REQUIRE(tr);
    REQUIRE(tl);
    CHECK(tr->visibility == Visibility::Visible);
    CHECK(tl->visibility == Visibility::Visible);
}

TEST_CASE("sliding field outside the sliding set throws") {
    const FilippovSystem sys = example1(0.5, -1.0);
    CHECK_THROWS_AS(sliding_field(sys, 2.0), Error);
}

TEST_CASE("decomposition labels agree with pointwise classification") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> U(-20.0, 20.0);
    for (int k = 0; k < 200; ++k) {
        const FilippovSystem sys = random_system(rng);
        const SigmaDecomposition d = sigma_decomposition(sys);
        for (int i = 0; i < 20; ++i) {
            const double y = U(rng);
            CHECK(d.label_at(y) == classify_point(sys, y));
        }
        for (std::size_t i = 1; i < d.intervals.size(); ++i) CHECK(d.intervals[i - 1].hi == d.intervals[i].lo);
    }
}

TEST_CASE("swapping the sides of a sliding interval flips attraction") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> U(-3.0, 3.0);
    int seen = 0;
    while (seen < 200) {
        const FilippovSystem sys = random_system(rng);
        const double y = U(rng);
        const Region r = classify_point(sys, y);
        if (r != Region::AttractiveSliding && r != Region::RepulsiveSliding) continue;
        ++seen;
        const Region rr = classify_point(sys.reversed(), y);
        CHECK(rr == (r == Region::AttractiveSliding ? Region::RepulsiveSliding : Region::AttractiveSliding));
        CHECK(sliding_field(sys.reversed(), y) == doctest::Approx(-sliding_field(sys, y)));
    }
}

TEST_CASE("equilibrium classification against trace and determinant") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> U(-3.0, 3.0);
    for (int i = 0; i < 300; ++i) {
        const AffineField f{Mat2{U(rng), U(rng), U(rng), U(rng)}, Vec2{U(rng), U(rng)}};
        const EquilibriumInfo e = equilibrium_info(f, Side::Right);
        const double tr = f.A.trace(), det = f.A.det(), disc = tr * tr - 4 * det;
        const Vec2 r = f(e.location);
        CHECK(std::abs(r.x) + std::abs(r.y) < 1e-9 * (1.0 + e.location.norm()));
        if (det < 0)
            CHECK(e.kind == EqKind::Saddle);
        else if (disc < 0)
            CHECK(e.kind == EqKind::Focus);
        else
            CHECK(e.kind == EqKind::Node);
        if (det > 0) CHECK((e.stability == Stability::Unstable) == (tr > 0));
        CHECK((e.placement == Placement::Admissible) == (e.location.x > 0));
    }
}

TEST_CASE("center classification") {
    const AffineField f{Mat2{0.0, 1.0, -1.0, 0.0}, Vec2{0.0, 1.0}};
    const EquilibriumInfo e = equilibrium_info(f, Side::Right);
    CHECK(e.kind == EqKind::Center);
    CHECK(e.location.x == doctest::Approx(1.0));
    CHECK(e.placement == Placement::Admissible);
}

TEST_CASE("tangency visibility follows the second derivative") {
    std::mt19937_64 rng(9);
    for (int i = 0; i < 200; ++i) {
        const FilippovSystem sys = random_system(rng);
        for (Side s : {Side::Left, Side::Right}) {
            const auto t = tangency_point(sys, s);
            if (!t) continue;
            const AffineField& f = sys.field(s);
            const double xdd = f.A.a12 * f.tangential(t->location.y);
            const bool visible = s == Side::Right ? xdd > 0 : xdd < 0;
            CHECK((t->visibility == Visibility::Visible) == visible);
        }
    }
}
