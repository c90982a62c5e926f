#include "flp/periodic.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "flp/roots.hpp"

namespace flp {

namespace {

constexpr double kSignatureTol = 1e-7;

std::vector<AxisContact> forward_signature(const std::vector<OrbitSegment>& cycle, bool backward) {
    std::vector<AxisContact> out;
    if (!backward) {
        for (const auto& s : cycle) out.push_back({s.kind, s.start.y});
    } else {
        for (auto it = cycle.rbegin(); it != cycle.rend(); ++it) out.push_back({it->kind, it->end.y});
    }
    return out;
}

bool same_signature(const std::vector<AxisContact>& a, const std::vector<AxisContact>& b) {
    if (a.size() != b.size() || a.empty()) return false;
    const std::size_t n = a.size();
    for (std::size_t r = 0; r < n; ++r) {
        bool ok = true;
        for (std::size_t i = 0; i < n && ok; ++i) {
            const auto& p = a[i];
            const auto& q = b[(i + r) % n];
            ok = p.kind == q.kind && std::abs(p.y - q.y) <= kSignatureTol * (1.0 + std::abs(p.y));
        }
        if (ok) return true;
    }
    return false;
}

bool has_slide(const std::vector<OrbitSegment>& cyc) {
    return std::any_of(cyc.begin(), cyc.end(), [](const OrbitSegment& s) { return s.kind == SegmentKind::Slide; });
}

/// Tokens of a cycle read from segment `start` on, in the frame given by the mirrors.
std::vector<std::string> tokens_from(const std::vector<OrbitSegment>& cyc, std::size_t start, bool mx, bool my) {
    const std::size_t n = cyc.size();
    std::vector<std::string> out;
    for (std::size_t k = 0; k < n; ++k) {
        const OrbitSegment& s = cyc[(start + k) % n];
        const OrbitSegment& next = cyc[(start + k + 1) % n];
        if (s.kind == SegmentKind::Flow) {
            const bool right = (s.side == Side::Right) != mx;
            out.emplace_back(right ? "R" : "L");
            if (next.kind == SegmentKind::Flow) out.emplace_back(s.on_tangency ? "T" : "C");
        } else {
            const bool up = (s.end.y > s.start.y) != my;
            out.emplace_back(up ? "S+" : "S-");
        }
    }
    return out;
}

std::string join(const std::vector<std::string>& toks) {
    std::string w;
    for (std::size_t i = 0; i < toks.size(); ++i) {
        if (i) w += ',';
        w += toks[i];
    }
    return w;
}

std::optional<ConfigTag> single_tag(const std::string& word) {
    if (word == "R,S+") return ConfigTag::F1A_a;
    if (word == "R,C,L,S+") return ConfigTag::F1A_b;
    if (word == "R,T,L,S+") return ConfigTag::F1A_c;
    if (word == "R,S-,L,S+") return ConfigTag::F1A_d;
    return std::nullopt;
}

std::optional<double> safe_return(const AffineField& f, const Vec2& z, Side side, double* t = nullptr) {
    try {
        auto hit = try_first_return(f, z, side);
        if (!hit) return std::nullopt;
        if (t) *t = hit->t;
        return hit->z.y;
    } catch (const Error&) {
        return std::nullopt;
    }
}

bool leaves_left(const FilippovSystem& sys, double y) {
    const Region r = classify_point(sys, y);
    if (r == Region::Crossing) return sys.left.normal(y) < 0.0;
    if (r != Region::TangencyLeft) return false;
    const auto t = tangency_point(sys, Side::Left);
    return t && t->visibility == Visibility::Visible;
}

double snapped_to_tangency(const FilippovSystem& sys, double y, bool& hit) {
    const double tol = OrbitOptions{}.tangency_snap;
    for (const auto& t : tangency_points(sys)) {
        if (std::abs(y - t.location.y) <= tol * (1.0 + std::abs(t.location.y))) {
            hit = true;
            return t.location.y;
        }
    }
    return y;
}

/// Loop from (0, y0) into the half-plane it departs to, then the loop back; y0 must lie on a crossing orbit.
PeriodicOrbitRecord crossing_record(const FilippovSystem& sys, double y0) {
    PeriodicOrbitRecord rec;
    rec.kind = OrbitKind::Crossing;
    bool start_tan = false;
    const double ys = snapped_to_tangency(sys, y0, start_tan);
    // On a tangency point one normal vanishes and the other gives the direction.
    const double ur = sys.right.normal(ys);
    const double ul = sys.left.normal(ys);
    const Side first = (std::abs(ur) >= std::abs(ul) ? ur : ul) > 0.0 ? Side::Right : Side::Left;
    const Side second = first == Side::Right ? Side::Left : Side::Right;
    const AxisHit h1 = first_return_to_axis(sys.field(first), {0.0, ys}, first);
    bool mid_tan = false;
    const double ym = snapped_to_tangency(sys, h1.z.y, mid_tan);
    const AxisHit h2 = first_return_to_axis(sys.field(second), {0.0, ym}, second);

    OrbitSegment a;
    a.side = first;
    a.start = {0.0, ys};
    a.end = {0.0, ym};
    a.duration = h1.t;
    a.on_tangency = mid_tan;
    a.grazing = h1.grazing;
    OrbitSegment b;
    b.side = second;
    b.start = a.end;
    b.end = {0.0, ys};
    b.duration = h2.t;
    b.on_tangency = start_tan;
    b.grazing = h2.grazing;
    rec.cycle = {a, b};
    rec.period = a.duration + b.duration;
    rec.axis_signature = forward_signature(rec.cycle, false);
    rec.through_tangency = start_tan || mid_tan;
    return rec;
}

/// Derivative of the full return map at y0 by central or one-sided differences.
std::optional<double> return_multiplier(const FilippovSystem& sys, double y0) {
    const double h = 1e-6 * (1.0 + std::abs(y0));
    const auto c = crossing_return(sys, y0);
    const auto p = crossing_return(sys, y0 + h);
    const auto m = crossing_return(sys, y0 - h);
    if (p && m) return (*p - *m) / (2.0 * h);
    if (!c) return std::nullopt;
    if (p) return (*p - *c) / h;
    if (m) return (*c - *m) / h;
    return std::nullopt;
}

void finish_crossing(const FilippovSystem& sys, PeriodicOrbitRecord& rec, double y_right_going) {
    rec.multiplier = return_multiplier(sys, y_right_going);
    rec.hyperbolic = rec.multiplier && std::abs(*rec.multiplier - 1.0) > 1e-9;
}

std::vector<double> sample_interval(double lo, double hi) {
    std::vector<double> offsets;
    for (int k = -12 * 8; k <= 8 * 8; ++k) offsets.push_back(std::pow(10.0, k / 8.0));
    std::vector<double> pts;
    const bool flo = std::isfinite(lo);
    const bool fhi = std::isfinite(hi);
    if (flo && fhi) {
        const double half = 0.5 * (hi - lo);
        for (double d : offsets) {
            const double dd = d * std::max(1.0, half) * 1e-8;
            if (dd >= half) continue;
            pts.push_back(lo + dd);
            pts.push_back(hi - dd);
        }
        pts.push_back(lo + half);
    } else if (flo) {
        for (double d : offsets) pts.push_back(lo + d * std::max(1.0, std::abs(lo)));
    } else if (fhi) {
        for (double d : offsets) pts.push_back(hi - d * std::max(1.0, std::abs(hi)));
    } else {
        for (double d : offsets) {
            pts.push_back(d);
            pts.push_back(-d);
        }
        pts.push_back(0.0);
    }
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    return pts;
}

/// Starts whose right loop, or whose following left loop, ends on a tangency point. The return is
/// defined on the pieces between them, and zeros crowd their ends; sample densely on both sides.
std::vector<double> domain_breaks(const FilippovSystem& sys) {
    std::vector<double> out;
    const AffineField back_right = sys.right.reversed();
    const AffineField back_left = sys.left.reversed();
    for (const auto& t : tangency_points(sys)) {
        if (const auto y = safe_return(back_right, t.location, Side::Right)) out.push_back(*y);
        if (const auto y1 = safe_return(back_left, t.location, Side::Left))
            if (const auto y = safe_return(back_right, {0.0, *y1}, Side::Right)) out.push_back(*y);
    }
    return out;
}

/// Zeros of y -> P(y) - y for right-going starts, by sampling and bracketing.
std::vector<double> numeric_crossing_zeros(const FilippovSystem& sys) {
    const SigmaDecomposition dec = sigma_decomposition(sys);
    auto g = [&](double y) -> std::optional<double> {
        const auto r = crossing_return(sys, y);
        if (!r) return std::nullopt;
        return *r - y;
    };
    std::vector<double> zeros;
    auto add = [&](double y) {
        for (double z : zeros)
            if (std::abs(z - y) <= kSignatureTol * (1.0 + std::abs(y))) return;
        zeros.push_back(y);
    };

    for (const auto& iv : dec.intervals) {
        if (iv.label != Region::Crossing) continue;
        const double probe = std::isfinite(iv.lo) && std::isfinite(iv.hi) ? 0.5 * (iv.lo + iv.hi)
                             : std::isfinite(iv.lo)                     ? iv.lo + 1.0
                             : std::isfinite(iv.hi)                     ? iv.hi - 1.0
                                                                        : 0.0;
        if (sys.right.normal(probe) <= 0.0) continue;

        std::vector<double> cuts{iv.lo, iv.hi};
        for (double y : domain_breaks(sys))
            if (y > iv.lo && y < iv.hi) cuts.push_back(y);
        std::sort(cuts.begin(), cuts.end());
        cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
        std::vector<double> pts;
        for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
            const auto piece = sample_interval(cuts[c], cuts[c + 1]);
            pts.insert(pts.end(), piece.begin(), piece.end());
            if (c > 0) pts.push_back(cuts[c]);
        }
        std::sort(pts.begin(), pts.end());
        for (double e : cuts) {
            if (!std::isfinite(e)) continue;
            const auto ge = g(e);
            if (ge && std::abs(*ge) <= 1e-9 * (1.0 + std::abs(e))) add(e);
        }
        std::optional<double> prev;
        double yprev = 0.0;
        for (double y : pts) {
            const auto gy = g(y);
            if (gy && *gy == 0.0) add(y);
            if (gy && prev && (*gy > 0.0) != (*prev > 0.0) && *gy != 0.0 && *prev != 0.0) {
                double a = yprev, b = y, ga = *prev;
                bool ok = true;
                for (int it = 0; it < 200 && b - a > 4e-16 * std::max(std::abs(a), std::abs(b)); ++it) {
                    const double mid = 0.5 * (a + b);
                    if (mid == a || mid == b) break;
                    const auto gm = g(mid);
                    if (!gm) {
                        ok = false;
                        break;
                    }
                    if ((*gm > 0.0) == (ga > 0.0)) {
                        a = mid;
                        ga = *gm;
                    } else {
                        b = mid;
                    }
                }
                if (ok) add(0.5 * (a + b));
            }
            if (gy) {
                prev = gy;
                yprev = y;
            } else {
                prev.reset();
            }
        }
    }
    std::sort(zeros.begin(), zeros.end());
    return zeros;
}

}  // namespace

std::string_view to_string(OrbitKind k) {
    switch (k) {
        case OrbitKind::Standard: return "standard";
        case OrbitKind::Crossing: return "crossing";
        case OrbitKind::Sliding: return "sliding";
    }
    return "unknown";
}

std::string_view to_string(ConfigTag t) {
    switch (t) {
        case ConfigTag::F1A_a: return "F1A_a";
        case ConfigTag::F1A_b: return "F1A_b";
        case ConfigTag::F1A_c: return "F1A_c";
        case ConfigTag::F1A_d: return "F1A_d";
        case ConfigTag::F2A_a: return "F2A_a";
        case ConfigTag::F2A_b: return "F2A_b";
        case ConfigTag::F2A_c: return "F2A_c";
        case ConfigTag::Other: return "Other";
    }
    return "Other";
}

std::string to_string(const Frame& f) {
    std::string s = "(";
    s += f.sx > 0 ? "x" : "-x";
    s += f.sy > 0 ? ",y" : ",-y";
    s += f.st > 0 ? ",t)" : ",-t)";
    return s;
}

std::optional<double> crossing_return(const FilippovSystem& sys, double y) {
    const auto y1 = safe_return(sys.right, {0.0, y}, Side::Right);
    if (!y1 || !leaves_left(sys, *y1)) return std::nullopt;
    return safe_return(sys.left, {0.0, *y1}, Side::Left);
}

std::vector<PeriodicOrbitRecord> find_sliding_orbits(const FilippovSystem& sys, const SearchOptions& opts) {
    std::vector<PeriodicOrbitRecord> out;
    const auto tangencies = tangency_points(sys);
    for (bool backward : {false, true}) {
        for (const auto& t : tangencies) {
            if (t.visibility != Visibility::Visible) continue;
            OrbitOptions o;
            o.budget = opts.budget;
            o.backward = backward;
            Orbit orb;
            try {
                orb = filippov_orbit(sys, t.location, o);
            } catch (const Error& e) {
                if (e.code() == ErrorCode::DegenerateTangency) throw;
                continue;
            }
            if (!orb.closed()) continue;
            auto cyc = orb.cycle();
            if (!has_slide(cyc)) continue;
            PeriodicOrbitRecord rec;
            rec.kind = OrbitKind::Sliding;
            rec.backward = backward;
            rec.period = orb.terminal.period;
            rec.axis_signature = forward_signature(cyc, backward);
            for (const auto& s : cyc) rec.through_tangency = rec.through_tangency || (s.kind == SegmentKind::Flow && s.on_tangency);
            rec.cycle = std::move(cyc);
            const bool dup = std::any_of(out.begin(), out.end(), [&](const PeriodicOrbitRecord& r) {
                return same_signature(r.axis_signature, rec.axis_signature);
            });
            if (!dup) out.push_back(std::move(rec));
        }
    }
    for (auto& r : out) r.configuration = classify_single(r);
    return out;
}

ConfigurationLabel classify_single(const PeriodicOrbitRecord& rec) {
    const auto& cyc = rec.cycle;
    const std::size_t n = cyc.size();
    ConfigurationLabel first;
    bool have_first = false;
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t j = (i + 1) % n;
        if (cyc[i].kind != SegmentKind::Slide || cyc[j].kind != SegmentKind::Flow) continue;
        const OrbitSegment& loop = cyc[j];
        const bool mx = loop.side == Side::Left;
        const bool my = loop.end.y > loop.start.y;
        ConfigurationLabel lab;
        lab.frame = {mx ? -1 : 1, my ? -1 : 1, rec.backward ? -1 : 1};
        lab.word = join(tokens_from(cyc, j, mx, my));
        if (auto tag = single_tag(lab.word)) {
            lab.tag = *tag;
            return lab;
        }
        if (!have_first) {
            first = lab;
            have_first = true;
        }
    }
    if (!have_first) first.word = join(tokens_from(cyc, 0, false, false));
    first.tag = ConfigTag::Other;
    return first;
}

ConfigurationLabel classify_configuration(const std::vector<PeriodicOrbitRecord>& sliding, const FilippovSystem&) {
    ConfigurationLabel out;
    if (sliding.size() == 1) return sliding[0].configuration ? *sliding[0].configuration : classify_single(sliding[0]);
    if (sliding.size() != 2) return out;
    const ConfigurationLabel a = sliding[0].configuration ? *sliding[0].configuration : classify_single(sliding[0]);
    const ConfigurationLabel b = sliding[1].configuration ? *sliding[1].configuration : classify_single(sliding[1]);
    out.frame = a.frame;
    out.word = a.word + " | " + b.word;
    const bool same_dir = sliding[0].backward == sliding[1].backward;
    auto is = [](const ConfigurationLabel& l, ConfigTag t) { return l.tag == t; };
    if (!same_dir && is(a, ConfigTag::F1A_a) && is(b, ConfigTag::F1A_a))
        out.tag = ConfigTag::F2A_a;
    else if (same_dir && is(a, ConfigTag::F1A_a) && is(b, ConfigTag::F1A_a))
        out.tag = ConfigTag::F2A_b;
    else if (same_dir && ((is(a, ConfigTag::F1A_a) && is(b, ConfigTag::F1A_b)) || (is(a, ConfigTag::F1A_b) && is(b, ConfigTag::F1A_a))))
        out.tag = ConfigTag::F2A_c;
    return out;
}

std::vector<PeriodicOrbitRecord> find_crossing_orbits(const FilippovSystem& sys, bool* used_closed_form, bool allow_closed_form) {
    if (used_closed_form) *used_closed_form = false;
    std::vector<PeriodicOrbitRecord> out;

    std::optional<CanonicalForm> cf;
    std::optional<HalfMapContext> ctx;
    if (allow_closed_form) {
        try {
            cf = to_canonical(sys);
            ctx = HalfMapContext::make(cf->params);
        } catch (const Error&) {
            ctx.reset();
        }
    }

    if (ctx) {
        if (used_closed_form) *used_closed_form = true;
        for (const auto& zero : zeros_of_D(*ctx)) {
            // The shear is the identity on the axis, so the canonical point pulls back directly.
            const Vec2 z = cf->record.pull(Vec2{0.0, zero.y});
            const FilippovSystem oriented = sys.right.normal(z.y) > 0.0 ? sys : sys.mirrored_x();
            PeriodicOrbitRecord rec = crossing_record(sys, z.y);
            rec.through_tangency = rec.through_tangency || zero.at_endpoint;
            finish_crossing(oriented, rec, z.y);
            out.push_back(std::move(rec));
        }
        return out;
    }

    for (double y : numeric_crossing_zeros(sys)) {
        PeriodicOrbitRecord rec = crossing_record(sys, y);
        finish_crossing(sys, rec, y);
        out.push_back(std::move(rec));
    }
    return out;
}

CoexistenceReport coexistence(const FilippovSystem& sys, const SearchOptions& opts) {
    CoexistenceReport rep;
    auto sliding = find_sliding_orbits(sys, opts);
    auto crossing = find_crossing_orbits(sys, &rep.closed_form_route);
    rep.n_sliding = static_cast<int>(sliding.size());
    rep.n_crossing = static_cast<int>(crossing.size());
    for (Side s : {Side::Left, Side::Right}) {
        const AffineField& f = sys.field(s);
        if (!f.nondegenerate()) continue;
        const EquilibriumInfo e = equilibrium_info(f, s);
        rep.standard_orbits = rep.standard_orbits || (e.kind == EqKind::Center && e.placement == Placement::Admissible);
    }
    if (rep.n_sliding > 2)
        throw Error(ErrorCode::TheoremViolation, "found " + std::to_string(rep.n_sliding) + " sliding periodic orbits");
    if (rep.n_sliding >= 1) rep.configuration = classify_configuration(sliding, sys);

    if (rep.configuration) {
        const ConfigTag t = rep.configuration->tag;
        if (t == ConfigTag::F2A_a && rep.n_crossing != 0)
            throw Error(ErrorCode::TheoremViolation, "F2A_a configuration with crossing periodic orbits");
        const bool needs_one = t == ConfigTag::F2A_b || t == ConfigTag::F2A_c || t == ConfigTag::F1A_c || t == ConfigTag::F1A_d;
        if (needs_one) {
            if (rep.n_crossing != 1)
                throw Error(ErrorCode::TheoremViolation, std::string(to_string(t)) + " configuration with " +
                                                             std::to_string(rep.n_crossing) + " crossing periodic orbits");
            // In a time-reversed frame the orbit must be stable instead.
            const auto& m = crossing.front().multiplier;
            const bool reversed = rep.configuration->frame.st < 0;
            if (m && !(reversed ? *m < 1.0 : *m > 1.0))
                throw Error(ErrorCode::TheoremViolation, "the crossing periodic orbit is not unstable");
        }
    }
    for (auto& r : sliding) rep.records.push_back(std::move(r));
    for (auto& r : crossing) rep.records.push_back(std::move(r));
    return rep;
}

}  // namespace flp
