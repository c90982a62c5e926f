#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "flp/core.hpp"

namespace flp {

/// Solution of ż = A z + b at time t from z0 (closed form; t may be negative).
Vec2 linear_flow(const AffineField& field, const Vec2& z0, double t);

/// e^{At} for a 2x2 matrix.
Mat2 expm(const Mat2& A, double t);

struct AxisHit {
    double t = 0.0;
    Vec2 z;                // z.x == 0
    bool grazing = false;  // touched the axis at a local extremum of x(t)
};

/// First t > 0 at which the orbit from z0 meets x = 0, the orbit staying in the open
/// half-plane `side` on (0, t). Returns nullopt when the orbit never comes back.
std::optional<AxisHit> try_first_return(const AffineField& field, const Vec2& z0, Side side);

/// As try_first_return, but throws NoReturn.
AxisHit first_return_to_axis(const AffineField& field, const Vec2& z0, Side side);

enum class SegmentKind { Flow, Slide };

struct OrbitSegment {
    SegmentKind kind = SegmentKind::Flow;
    Side side = Side::Right;  // Flow only
    Vec2 start;
    Vec2 end;
    double duration = 0.0;
    bool infinite = false;    // ends at an equilibrium or pseudo-equilibrium
    bool on_tangency = false; // end point snapped onto a tangency point
    bool grazing = false;     // Flow ended by touching the axis at an extremum

    [[nodiscard]] double y_start() const { return start.y; }
    [[nodiscard]] double y_end() const { return end.y; }
};

enum class TerminalKind { Closed, PseudoEquilibrium, Equilibrium, BudgetExhausted, Escape };

struct TerminalEvent {
    TerminalKind kind = TerminalKind::BudgetExhausted;
    double period = 0.0;  // Closed only
    Vec2 point;           // equilibrium / pseudo-equilibrium / last state
};

std::string_view to_string(SegmentKind k);
std::string_view to_string(TerminalKind k);

struct Orbit {
    std::vector<OrbitSegment> segments;
    TerminalEvent terminal;
    std::size_t cycle_begin = 0;  // first segment of the closed part when Closed
    bool backward = false;        // built on the time-reversed system

    /// Closed sub-orbit (segments from cycle_begin on); empty unless Closed.
    [[nodiscard]] std::vector<OrbitSegment> cycle() const;
    [[nodiscard]] bool closed() const { return terminal.kind == TerminalKind::Closed; }
};

struct OrbitOptions {
    std::size_t budget = 200;          // maximum number of segments
    bool backward = false;
    double closure_tol = 1e-8;         // |Δy| for crossing departures
    double tangency_snap = 1e-10;      // relative landing tolerance onto tangency points
};

Orbit filippov_orbit(const FilippovSystem& sys, const Vec2& z0, const OrbitOptions& opts = {});

/// Time spent sliding from y0 to y1 (no pseudo-equilibrium strictly between).
double slide_duration(const FilippovSystem& sys, double y0, double y1);

struct OrbitSample {
    double t;
    Vec2 z;
    SegmentKind kind;
};

/// Dense samples along an orbit; backward orbits report negative times.
std::vector<OrbitSample> sample_orbit(const FilippovSystem& sys, const Orbit& orbit, std::size_t per_segment = 64);

}  // namespace flp
