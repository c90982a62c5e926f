#include "flp/flow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "flp/roots.hpp"

namespace flp {

namespace {

constexpr double kPi = std::numbers::pi;

/// Coefficients with e^{At} = C I + S (A - h I), h = trace/2, q = h^2 - det.
std::pair<double, double> exp_coeffs(double h, double q, double t) {
    const double qt2 = q * t * t;
    if (std::abs(qt2) < 1e-2) {
        double c = 1.0, s = 1.0, tc = 1.0, ts = 1.0;
        for (int k = 1; k <= 7; ++k) {
            tc *= qt2 / ((2.0 * k - 1.0) * (2.0 * k));
            ts *= qt2 / ((2.0 * k) * (2.0 * k + 1.0));
            c += tc;
            s += ts;
        }
        const double e = std::exp(h * t);
        return {e * c, e * t * s};
    }
    if (q < 0.0) {
        const double w = std::sqrt(-q);
        const double e = std::exp(h * t);
        return {e * std::cos(w * t), e * std::sin(w * t) / w};
    }
    const double r = std::sqrt(q);
    const double e1 = std::exp((h + r) * t);
    const double e2 = std::exp((h - r) * t);
    return {0.5 * (e1 + e2), (e1 - e2) / (2.0 * r)};
}

bool flow_nondegenerate(const Mat2& A) {
    const double n = A.norm_max();
    return std::abs(A.det()) >= 1e-6 * (1.0 + n * n);
}

Vec2 augmented_flow(const AffineField& f, const Vec2& z0, double t) {
    Eigen::Matrix3d aug = Eigen::Matrix3d::Zero();
    aug << f.A.a11, f.A.a12, f.b.x, f.A.a21, f.A.a22, f.b.y, 0.0, 0.0, 0.0;
    const Eigen::Matrix3d E = (aug * t).exp();
    const Eigen::Vector3d z = E * Eigen::Vector3d(z0.x, z0.y, 1.0);
    return {z(0), z(1)};
}

double time_scale(const Mat2& A) {
    const double h = 0.5 * A.trace();
    const double q = h * h - A.det();
    const double rate = std::abs(h) + std::sqrt(std::abs(q));
    return rate > 0.0 ? 1.0 / rate : 1.0;
}

}  // namespace

std::string_view to_string(SegmentKind k) { return k == SegmentKind::Flow ? "flow" : "slide"; }

std::string_view to_string(TerminalKind k) {
    switch (k) {
        case TerminalKind::Closed: return "Closed";
        case TerminalKind::PseudoEquilibrium: return "PseudoEquilibrium";
        case TerminalKind::Equilibrium: return "Equilibrium";
        case TerminalKind::BudgetExhausted: return "BudgetExhausted";
        case TerminalKind::Escape: return "Escape";
    }
    return "Unknown";
}

Mat2 expm(const Mat2& A, double t) {
    const double h = 0.5 * A.trace();
    const double q = h * h - A.det();
    const auto [C, S] = exp_coeffs(h, q, t);
    const Mat2 M = A - Mat2::diag(h, h);
    return C * Mat2::identity() + S * M;
}

Vec2 linear_flow(const AffineField& field, const Vec2& z0, double t) {
    if (t == 0.0) return z0;
    if (!flow_nondegenerate(field.A)) return augmented_flow(field, z0, t);
    const Vec2 zs = -(field.A.inverse() * field.b);
    return zs + expm(field.A, t) * (z0 - zs);
}

std::optional<AxisHit> try_first_return(const AffineField& field, const Vec2& z0, Side side) {
    const double s = side == Side::Right ? 1.0 : -1.0;
    const Mat2& A = field.A;
    const double h = 0.5 * A.trace();
    const double q = h * h - A.det();
    const Mat2 M = A - Mat2::diag(h, h);
    const Vec2 v0 = field(z0);
    const Vec2 Mv0 = M * v0;
    const bool on_axis = z0.x == 0.0;
    const bool nondeg = flow_nondegenerate(A);

    if (v0.x == 0.0 && v0.y == 0.0) return std::nullopt;
    const double vscale = std::max(1.0, v0.norm());
    bool tangent_start = false;
    if (on_axis) {
        if (s * v0.x < -kVanishTol * vscale)
            throw Error(ErrorCode::DomainError, "orbit does not enter the requested half-plane");
        if (std::abs(v0.x) <= kVanishTol * vscale) {
            tangent_start = true;
            if (s * (A * v0).x <= 0.0)
                throw Error(ErrorCode::DomainError, "departure from an invisible or degenerate tangency");
        }
    } else if (s * z0.x < 0.0) {
        throw Error(ErrorCode::DomainError, "start point lies on the other side of the axis");
    }

    Vec2 zs{};
    if (nondeg) zs = -(A.inverse() * field.b);
    const double gscale = std::max({1.0, z0.norm(), nondeg ? zs.norm() : 0.0});
    const double graze_tol = 1e-11 * gscale;
    auto g = [&](double t) { return s * linear_flow(field, z0, t).x; };

    auto finish = [&](double t, bool grazing) {
        AxisHit hit;
        hit.t = t;
        hit.z = linear_flow(field, z0, t);
        hit.z.x = 0.0;
        hit.grazing = grazing;
        return hit;
    };

    const double tau = time_scale(A);
    const double min_crit = tangent_start ? 1e-6 * tau : 0.0;

    // Pieces between consecutive zeros of ẋ(t) are monotone in x.
    if (q < 0.0) {
        const double w = std::sqrt(-q);
        const double period = 2.0 * kPi / w;
        // ẋ(t) = e^{ht} R cos(w t - phi)
        const double phi = std::atan2(Mv0.x / w, v0.x);
        double theta = std::fmod(phi + 0.5 * kPi, kPi);
        if (theta < 0.0) theta += kPi;

        double t_start = 0.0;
        if (h > 0.0 && nondeg) {
            const Vec2 w0 = z0 - zs;
            const double R = std::hypot(w0.x, (M * w0).x / w);
            if (R == 0.0) return std::nullopt;
            // Before the oscillation amplitude reaches |x*| the orbit cannot reach the axis.
            if (s * zs.x > 0.0) t_start = std::max(0.0, std::log(s * zs.x / R) / h);
        }
        double horizon = t_start + 1.25 * period;
        if (h > 0.0 && !nondeg) horizon = t_start + std::min(600.0 / h, 1e9);

        std::vector<double> knots;
        if (t_start == 0.0) knots.push_back(0.0);
        const double k0 = std::max(0.0, std::floor((t_start * w - theta) / kPi));
        for (double k = k0;; k += 1.0) {
            const double tk = (theta + k * kPi) / w;
            if (tk > horizon) break;
            if (tk < t_start || tk <= min_crit) continue;
            knots.push_back(tk);
            if (knots.size() > 200000) break;
        }
        if (knots.empty() || knots.front() != t_start) knots.insert(knots.begin(), t_start);
        knots.push_back(horizon);

        double ga = (on_axis && knots.front() == 0.0) ? 0.0 : g(knots.front());
        for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
            const double a = knots[i];
            const double b = knots[i + 1];
            if (b <= a) continue;
            const double gb = g(b);
            const bool first_from_axis = on_axis && a == 0.0;
            if (!first_from_axis) {
                // x is extremal at b; a landing there is a double root that bisection resolves poorly.
                if (ga > 0.0 && gb <= 0.0 && gb >= -graze_tol) return finish(b, true);
                if (ga > 0.0 && gb <= 0.0) return finish(bisect_root(g, a, b), false);
                if (ga <= 0.0 && a > 0.0) return finish(a, false);
                if (gb > 0.0 && gb < ga && gb <= graze_tol && i + 2 < knots.size()) return finish(b, true);
            }
            ga = gb;
        }
        return std::nullopt;
    }

    // Real spectrum: ẋ has at most one positive zero.
    std::vector<double> knots{0.0};
    if (Mv0.x != 0.0) {
        double tc = -1.0;
        if (q > 0.0) {
            const double r = std::sqrt(q);
            const double kappa = -r * v0.x / Mv0.x;
            if (kappa > 0.0 && kappa < 1.0) tc = std::atanh(kappa) / r;
        } else {
            tc = -v0.x / Mv0.x;
        }
        if (tc > min_crit) knots.push_back(tc);
    }

    const double rate = std::max(std::abs(h) + std::sqrt(std::max(q, 0.0)), 1e-300);
    double ga = on_axis ? 0.0 : g(0.0);
    for (std::size_t i = 0; i < knots.size(); ++i) {
        const double a = knots[i];
        const bool first_from_axis = on_axis && i == 0;
        if (i + 1 < knots.size()) {
            const double b = knots[i + 1];
            const double gb = g(b);
            if (!first_from_axis) {
                if (ga > 0.0 && gb <= 0.0 && gb >= -graze_tol) return finish(b, true);
                if (ga > 0.0 && gb <= 0.0) return finish(bisect_root(g, a, b), false);
                if (gb > 0.0 && gb < ga && gb <= graze_tol) return finish(b, true);
            }
            ga = gb;
            continue;
        }
        if (first_from_axis) return std::nullopt;  // x keeps growing after a clean departure
        if (ga <= 0.0) return a > 0.0 ? std::optional<AxisHit>(finish(a, false)) : std::nullopt;
        double lo = a;
        double step = std::max(1e-3 * tau, 1e-12);
        for (;;) {
            const double b = a + step;
            const double gb = g(b);
            if (!std::isfinite(gb) && !(gb < 0.0)) return std::nullopt;
            if (gb <= 0.0) return finish(bisect_root(g, lo, b), false);
            if (b * rate > 600.0 || b > 1e9) return std::nullopt;
            lo = b;
            step *= 2.0;
        }
    }
    return std::nullopt;
}

AxisHit first_return_to_axis(const AffineField& field, const Vec2& z0, Side side) {
    auto hit = try_first_return(field, z0, side);
    if (!hit) throw Error(ErrorCode::NoReturn, "orbit never returns to the switching line");
    return *hit;
}

double slide_duration(const FilippovSystem& sys, double y0, double y1) {
    if (y0 == y1) return 0.0;
    const SlidingRational sr = sliding_rational(sys);
    auto dt = [&](double y) { return sr.Dn(y) / sr.N(y); };
    const double val = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(dt, y0, y1, 15, 1e-13);
    return std::abs(val);
}

std::vector<OrbitSegment> Orbit::cycle() const {
    if (!closed()) return {};
    return {segments.begin() + static_cast<std::ptrdiff_t>(cycle_begin), segments.end()};
}

namespace {

enum class Action { FlowRight, FlowLeft, Slide, StopEquilibrium, StopPseudo };

struct Departure {
    double y;
    Action action;
    std::size_t segment;
    bool from_tangency;
};

constexpr double kEscapeRadius = 1e100;

class OrbitBuilder {
public:
    OrbitBuilder(const FilippovSystem& sys, const OrbitOptions& opts)
        : sys_(sys), opts_(opts), dec_(sigma_decomposition(sys)), sr_(sliding_rational(sys)),
          tangencies_(tangency_points(sys)), pe_roots_(quadratic_roots(sr_.q2, sr_.q1, sr_.q0)) {}

    Orbit run(const Vec2& z0) {
        if (z0.x != 0.0) {
            const Side side = z0.x > 0.0 ? Side::Right : Side::Left;
            auto hit = try_first_return(sys_.field(side), z0, side);
            if (!hit) {
                no_return(side, z0, true);
                return std::move(orbit_);
            }
            push_flow(side, z0, *hit);
        } else {
            y_ = z0.y;
            snap();
        }
        while (!done_) {
            if (orbit_.segments.size() >= opts_.budget) {
                terminate(TerminalKind::BudgetExhausted, {0.0, y_});
                break;
            }
            // Unbounded crossing spirals would otherwise run into overflow.
            if (!(std::abs(y_) < kEscapeRadius)) {
                terminate(TerminalKind::Escape, {0.0, y_});
                break;
            }
            step();
        }
        return std::move(orbit_);
    }

private:
    const FilippovSystem& sys_;
    OrbitOptions opts_;
    SigmaDecomposition dec_;
    SlidingRational sr_;
    std::vector<TangencyInfo> tangencies_;
    std::vector<double> pe_roots_;
    Orbit orbit_;
    std::vector<Departure> departures_;
    std::optional<std::pair<std::size_t, std::size_t>> candidate_;  // (earlier, later) departure indices
    double y_ = 0.0;
    bool at_tangency_ = false;
    bool done_ = false;

    void terminate(TerminalKind kind, Vec2 point, double period = 0.0) {
        orbit_.terminal = {kind, period, point};
        done_ = true;
    }

    void snap() {
        at_tangency_ = false;
        for (const auto& t : tangencies_) {
            const double yt = t.location.y;
            if (std::abs(y_ - yt) <= opts_.tangency_snap * (1.0 + std::abs(yt))) {
                y_ = yt;
                at_tangency_ = true;
                return;
            }
        }
    }

    const TangencyInfo* tangency_at(Side side) const {
        for (const auto& t : tangencies_)
            if (t.side == side && t.location.y == y_) return &t;
        for (const auto& t : tangencies_)
            if (t.side == side) return &t;
        return nullptr;
    }

    Action decide() {
        switch (classify_point(sys_, y_)) {
            case Region::Crossing: return sys_.right.normal(y_) > 0.0 ? Action::FlowRight : Action::FlowLeft;
            case Region::AttractiveSliding:
            case Region::RepulsiveSliding: return Action::Slide;
            case Region::SingularSliding: return std::abs(sliding_field(sys_, y_)) <= fs_tol() ? Action::StopPseudo : Action::Slide;
            case Region::BoundaryEquilibriumLeft:
            case Region::BoundaryEquilibriumRight: return Action::StopEquilibrium;
            case Region::TangencyBoth: throw Error(ErrorCode::DegenerateTangency, "both fields tangent at the same point");
            case Region::TangencyRight: {
                const TangencyInfo* t = tangency_at(Side::Right);
                if (!t || t->visibility == Visibility::Degenerate)
                    throw Error(ErrorCode::DegenerateTangency, "degenerate right tangency");
                if (t->visibility == Visibility::Visible) return Action::FlowRight;
                return sys_.left.normal(y_) > 0.0 ? Action::Slide : Action::FlowLeft;
            }
            case Region::TangencyLeft: {
                const TangencyInfo* t = tangency_at(Side::Left);
                if (!t || t->visibility == Visibility::Degenerate)
                    throw Error(ErrorCode::DegenerateTangency, "degenerate left tangency");
                if (t->visibility == Visibility::Visible) return Action::FlowLeft;
                return sys_.right.normal(y_) < 0.0 ? Action::Slide : Action::FlowRight;
            }
        }
        return Action::StopEquilibrium;
    }

    double fs_tol() const {
        const double scale = std::max(std::abs(sys_.right.tangential(y_)), std::abs(sys_.left.tangential(y_)));
        return kVanishTol * std::max(1.0, scale);
    }

    void step() {
        const Action act = decide();
        switch (act) {
            case Action::StopEquilibrium: terminate(TerminalKind::Equilibrium, {0.0, y_}); return;
            case Action::StopPseudo: terminate(TerminalKind::PseudoEquilibrium, {0.0, y_}); return;
            case Action::Slide: slide(); return;
            case Action::FlowRight: depart(Side::Right); return;
            case Action::FlowLeft: depart(Side::Left); return;
        }
    }

    bool check_closure(Action act) {
        const std::size_t here = departures_.size();
        departures_.push_back({y_, act, orbit_.segments.size(), at_tangency_});
        if (at_tangency_) {
            for (std::size_t j = 0; j < here; ++j) {
                const auto& d = departures_[j];
                if (d.from_tangency && d.action == act && d.y == y_) {
                    close_from(d.segment);
                    return true;
                }
            }
            return false;
        }
        if (candidate_) {
            const auto [j, i] = *candidate_;
            if (here == i + (i - j)) {
                const auto& di = departures_[i];
                if (di.action == act && std::abs(di.y - y_) < opts_.closure_tol) {
                    close_from(di.segment);
                    return true;
                }
                candidate_.reset();
            }
        }
        if (!candidate_) {
            for (std::size_t j = here; j-- > 0;) {
                const auto& d = departures_[j];
                if (!d.from_tangency && d.action == act && std::abs(d.y - y_) < opts_.closure_tol) {
                    candidate_ = std::make_pair(j, here);
                    break;
                }
            }
        }
        return false;
    }

    void close_from(std::size_t seg) {
        double period = 0.0;
        for (std::size_t k = seg; k < orbit_.segments.size(); ++k) period += orbit_.segments[k].duration;
        orbit_.cycle_begin = seg;
        terminate(TerminalKind::Closed, orbit_.segments[seg].start, period);
    }

    void depart(Side side) {
        if (check_closure(side == Side::Right ? Action::FlowRight : Action::FlowLeft)) return;
        const Vec2 z{0.0, y_};
        auto hit = try_first_return(sys_.field(side), z, side);
        if (!hit) {
            no_return(side, z, false);
            return;
        }
        push_flow(side, z, *hit);
    }

    void push_flow(Side side, const Vec2& start, const AxisHit& hit) {
        y_ = hit.z.y;
        snap();
        OrbitSegment seg;
        seg.kind = SegmentKind::Flow;
        seg.side = side;
        seg.start = start;
        seg.end = {0.0, y_};
        seg.duration = hit.t;
        seg.on_tangency = at_tangency_;
        seg.grazing = hit.grazing;
        orbit_.segments.push_back(seg);
    }

    void no_return(Side side, const Vec2& start, bool off_axis) {
        const AffineField& f = sys_.field(side);
        if (f.nondegenerate()) {
            const EquilibriumInfo eq = equilibrium_info(f, side);
            if (eq.placement == Placement::Admissible) {
                if (eq.kind == EqKind::Center && off_axis) {
                    const double period = 2.0 * kPi / std::sqrt(f.A.det());
                    orbit_.segments.push_back({SegmentKind::Flow, side, start, start, period, false, false, false});
                    orbit_.cycle_begin = orbit_.segments.size() - 1;
                    terminate(TerminalKind::Closed, start, period);
                    return;
                }
                if (eq.stability == Stability::Stable) {
                    orbit_.segments.push_back({SegmentKind::Flow, side, start, eq.location, 0.0, true, false, false});
                    terminate(TerminalKind::Equilibrium, eq.location);
                    return;
                }
            }
        }
        terminate(TerminalKind::Escape, start);
    }

    void slide() {
        const double fs = sliding_field(sys_, y_);
        if (std::abs(fs) <= fs_tol()) {
            terminate(TerminalKind::PseudoEquilibrium, {0.0, y_});
            return;
        }
        const int dir = fs > 0.0 ? 1 : -1;
        const LabeledInterval* iv = nullptr;
        for (const auto& cand : dec_.intervals) {
            if (!is_sliding(cand.label)) continue;
            const bool inside = dir > 0 ? (cand.lo <= y_ && y_ < cand.hi) : (cand.lo < y_ && y_ <= cand.hi);
            if (inside) {
                iv = &cand;
                break;
            }
        }
        if (!iv) {
            // The sliding motion leaves the sliding set immediately: follow whichever field leaves the axis.
            if (sys_.right.normal(y_) > 0.0) return depart(Side::Right);
            if (sys_.left.normal(y_) < 0.0) return depart(Side::Left);
            throw Error(ErrorCode::DegenerateTangency, "sliding motion has no admissible continuation");
        }
        const double end = dir > 0 ? iv->hi : iv->lo;
        std::optional<double> pe;
        for (double r : pe_roots_) {
            const bool between = dir > 0 ? (r > y_ && r < end) : (r < y_ && r > end);
            if (between && (!pe || std::abs(r - y_) < std::abs(*pe - y_))) pe = r;
        }
        OrbitSegment seg;
        seg.kind = SegmentKind::Slide;
        seg.start = {0.0, y_};
        if (pe) {
            seg.end = {0.0, *pe};
            seg.infinite = true;
            orbit_.segments.push_back(seg);
            terminate(TerminalKind::PseudoEquilibrium, seg.end);
            return;
        }
        if (std::isinf(end)) {
            terminate(TerminalKind::Escape, seg.start);
            return;
        }
        seg.end = {0.0, end};
        seg.duration = slide_duration(sys_, y_, end);
        y_ = end;
        snap();
        seg.on_tangency = at_tangency_;
        orbit_.segments.push_back(seg);
    }
};

}  // namespace

Orbit filippov_orbit(const FilippovSystem& sys, const Vec2& z0, const OrbitOptions& opts) {
    const FilippovSystem work = opts.backward ? sys.reversed() : sys;
    OrbitBuilder builder(work, opts);
    Orbit orbit = builder.run(z0);
    orbit.backward = opts.backward;
    return orbit;
}

std::vector<OrbitSample> sample_orbit(const FilippovSystem& sys, const Orbit& orbit, std::size_t per_segment) {
    const FilippovSystem work = orbit.backward ? sys.reversed() : sys;
    const double sign = orbit.backward ? -1.0 : 1.0;
    const std::size_t n = std::max<std::size_t>(per_segment, 2);
    std::vector<OrbitSample> out;
    double t0 = 0.0;
    for (const auto& seg : orbit.segments) {
        if (seg.kind == SegmentKind::Flow) {
            const AffineField& f = work.field(seg.side);
            double span = seg.duration;
            if (seg.infinite) span = 20.0 / std::max(1e-3, std::abs(0.5 * f.A.trace()));
            for (std::size_t i = 0; i < n; ++i) {
                const double t = span * static_cast<double>(i) / static_cast<double>(n - 1);
                Vec2 z = linear_flow(f, seg.start, t);
                if (i == n - 1 && !seg.infinite) z = seg.end;
                out.push_back({sign * (t0 + t), z, SegmentKind::Flow});
            }
            t0 += seg.infinite ? span : seg.duration;
        } else {
            const double ya = seg.start.y;
            const double yb = seg.infinite ? seg.start.y + (1.0 - 1e-6) * (seg.end.y - seg.start.y) : seg.end.y;
            double t = t0;
            double yprev = ya;
            for (std::size_t i = 0; i < n; ++i) {
                const double y = ya + (yb - ya) * static_cast<double>(i) / static_cast<double>(n - 1);
                t += slide_duration(work, yprev, y);
                yprev = y;
                out.push_back({sign * t, {0.0, y}, SegmentKind::Slide});
            }
            t0 = t;
        }
    }
    return out;
}

}  // namespace flp
