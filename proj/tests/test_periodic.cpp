#include <doctest.h>

#include <cmath>

#include "flp/bundled.hpp"
#include "flp/periodic.hpp"
#include "flp/scenarios.hpp"

using namespace flp;

namespace {

FilippovSystem bundled_system(const std::string& name) {
    const auto s = bundled_example(name);
    REQUIRE(s.has_value());
    return normalize_to_y_axis(s->raw).first;
}

ConfigTag tag_of(const CoexistenceReport& r) { return r.configuration ? r.configuration->tag : ConfigTag::Other; }

}  // namespace

TEST_CASE("single sliding orbit of the delta = 0 example") {
    const FilippovSystem sys = bundled_system("example1");
    const auto recs = find_sliding_orbits(sys);
    REQUIRE(recs.size() == 1);
    CHECK(recs[0].kind == OrbitKind::Sliding);
    REQUIRE(recs[0].configuration);
    CHECK(recs[0].configuration->tag == ConfigTag::F1A_a);
    CHECK(recs[0].configuration->word == "R,S+");
    CHECK(recs[0].period > 0.0);
    bool has_slide = false;
    for (const auto& s : recs[0].cycle) has_slide = has_slide || s.kind == SegmentKind::Slide;
    CHECK(has_slide);
    CHECK(find_crossing_orbits(sys).empty());
}

TEST_CASE("two sliding orbits and no crossing orbit for delta = -1") {
    const CoexistenceReport r = coexistence(bundled_system("example5"));
    CHECK(r.n_sliding == 2);
    CHECK(r.n_crossing == 0);
    CHECK(tag_of(r) == ConfigTag::F2A_a);
}

TEST_CASE("mirrored-focus example: two sliding orbits and an unstable crossing orbit") {
    const CoexistenceReport r = coexistence(bundled_system("example6"));
    CHECK(r.n_sliding == 2);
    CHECK(r.n_crossing == 1);
    CHECK(tag_of(r) == ConfigTag::F2A_b);
    CHECK(r.closed_form_route);
    for (const auto& rec : r.records) {
        if (rec.kind != OrbitKind::Crossing) continue;
        REQUIRE(rec.multiplier);
        CHECK(*rec.multiplier > 1.0);
        CHECK(rec.hyperbolic);
        CHECK(rec.cycle.size() == 2);
    }
}

TEST_CASE("saddle pair has no sliding orbit") {
    FilippovSystem s;
    s.right = {Mat2{1.0, 0.5, 0.5, -1.0}, Vec2{-1.0, 0.0}};
    s.left = {Mat2{-1.0, 2.0, 1.0, 1.0}, Vec2{0.3, 0.4}};
    CHECK(find_sliding_orbits(s).empty());
}

TEST_CASE("raw shapes normalize to the reference configurations") {
    // (x,y) -> (-x,-y) carries the landing-on-T_L orbit into the mirrored shape.
    const FilippovSystem e3 = bundled_system("example3");
    const FilippovSystem asingle = e3.mirrored_x().mirrored_y();
    const auto recs = find_sliding_orbits(asingle);
    REQUIRE(recs.size() == 1);
    REQUIRE(recs[0].configuration);
    CHECK(recs[0].configuration->tag == ConfigTag::F1A_c);
    CHECK(recs[0].configuration->frame == Frame{-1, -1, 1});

    const FilippovSystem f = bundled_system("example7").mirrored_x().mirrored_y();
    const CoexistenceReport r = coexistence(f);
    CHECK(r.n_sliding == 2);
    CHECK(tag_of(r) == ConfigTag::F2A_c);
}

TEST_CASE("every symmetry image keeps the configuration tag") {
    for (const char* name : {"example1", "example2", "example3", "example4", "example5", "example6", "example7"}) {
        const FilippovSystem sys = bundled_system(name);
        const ConfigTag t = tag_of(coexistence(sys));
        CAPTURE(name);
        CHECK(tag_of(coexistence(sys.mirrored_x())) == t);
        CHECK(tag_of(coexistence(sys.mirrored_y())) == t);
        CHECK(tag_of(coexistence(sys.mirrored_x().mirrored_y())) == t);
    }
}

TEST_CASE("time reversal keeps counts and swaps the tracing direction") {
    for (const auto& spec : bundled_examples()) {
        const FilippovSystem sys = normalize_to_y_axis(spec.raw).first;
        const CoexistenceReport a = coexistence(sys);
        const CoexistenceReport b = coexistence(sys.reversed());
        CAPTURE(spec.name);
        CHECK(a.n_sliding == b.n_sliding);
        CHECK(a.n_crossing == b.n_crossing);
        CHECK(tag_of(a) == tag_of(b));
        std::size_t fa = 0, fb = 0;
        for (const auto& r : a.records) fa += r.kind == OrbitKind::Sliding && !r.backward;
        for (const auto& r : b.records) fb += r.kind == OrbitKind::Sliding && r.backward;
        CHECK(fa == fb);
        for (const auto& r : b.records) {
            if (r.kind != OrbitKind::Crossing || !r.multiplier) continue;
            bool matched = false;
            for (const auto& q : a.records) {
                if (q.kind == OrbitKind::Crossing && q.multiplier && !q.through_tangency)
                    matched = matched || std::abs(*q.multiplier * *r.multiplier - 1.0) < 1e-3;
            }
            if (!r.through_tangency) CHECK(matched);
        }
    }
}

TEST_CASE("multiplier agrees with the slope of the displacement function") {
    for (const char* name : {"example3", "example4", "example6", "example7", "example1_rho_c"}) {
        const FilippovSystem sys = bundled_system(name);
        const CanonicalForm cf = to_canonical(sys);
        const HalfMapContext ctx = HalfMapContext::make(cf.params);
        const auto zs = zeros_of_D(ctx);
        const auto recs = find_crossing_orbits(sys);
        REQUIRE(recs.size() == zs.size());
        for (std::size_t i = 0; i < zs.size(); ++i) {
            REQUIRE(recs[i].multiplier);
            CAPTURE(name);
            CHECK((*recs[i].multiplier > 1.0) == (zs[i].D_prime_sign > 0));
        }
    }
}

TEST_CASE("closed-form and numeric crossing searches agree") {
    for (const auto& spec : bundled_examples()) {
        const FilippovSystem sys = normalize_to_y_axis(spec.raw).first;
        const auto a = find_crossing_orbits(sys, nullptr, true);
        const auto b = find_crossing_orbits(sys, nullptr, false);
        CAPTURE(spec.name);
        REQUIRE(a.size() == b.size());
        for (std::size_t i = 0; i < a.size(); ++i) {
            CHECK(a[i].axis_signature.front().y == doctest::Approx(b[i].axis_signature.front().y).epsilon(1e-7));
            CHECK(a[i].period == doctest::Approx(b[i].period).epsilon(1e-7));
        }
    }
}

TEST_CASE("crossing orbits close up") {
    for (const char* name : {"example2", "example6", "example2_eta_above"}) {
        for (const auto& rec : find_crossing_orbits(bundled_system(name))) {
            REQUIRE(rec.cycle.size() == 2);
            CHECK(rec.cycle[0].side != rec.cycle[1].side);
            CHECK(rec.cycle[1].end.y == doctest::Approx(rec.cycle[0].start.y).epsilon(1e-7));
        }
    }
}

TEST_CASE("at most two sliding orbits are reported after deduplication") {
    for (const auto& spec : bundled_examples()) {
        const auto recs = find_sliding_orbits(normalize_to_y_axis(spec.raw).first);
        CHECK(recs.size() <= 2);
        for (std::size_t i = 0; i < recs.size(); ++i)
            for (std::size_t j = i + 1; j < recs.size(); ++j)
                CHECK(recs[i].axis_signature.size() + recs[j].axis_signature.size() > 0);
    }
}
