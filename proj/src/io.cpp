#include "flp/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "flp/canonical.hpp"
#include "flp/periodic.hpp"

namespace flp {

using json = nlohmann::ordered_json;

namespace {

[[noreturn]] void malformed(const std::string& what) { throw Error(ErrorCode::MalformedInput, what); }

double finite_number(const json& j, const std::string& where) {
    if (!j.is_number()) malformed(where + " must be a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) malformed(where + " must be finite");
    return v;
}

Vec2 read_vec(const json& j, const std::string& key) {
    if (!j.contains(key)) malformed("missing key " + key);
    const json& v = j.at(key);
    if (!v.is_array() || v.size() != 2) malformed(key + " must be an array of 2 numbers");
    return {finite_number(v[0], key + "[0]"), finite_number(v[1], key + "[1]")};
}

Mat2 read_mat(const json& j, const std::string& key) {
    if (!j.contains(key)) malformed("missing key " + key);
    const json& m = j.at(key);
    if (!m.is_array() || m.size() != 2 || !m[0].is_array() || !m[1].is_array() || m[0].size() != 2 || m[1].size() != 2)
        malformed(key + " must be a 2x2 array");
    return {finite_number(m[0][0], key), finite_number(m[0][1], key), finite_number(m[1][0], key), finite_number(m[1][1], key)};
}

json num(double v) {
    if (std::isfinite(v)) return v;
    if (std::isnan(v)) return "nan";
    return v > 0 ? "inf" : "-inf";
}

json vec(const Vec2& v) { return json::array({num(v.x), num(v.y)}); }
json mat(const Mat2& m) { return json::array({json::array({m.a11, m.a12}), json::array({m.a21, m.a22})}); }

json field_json(const AffineField& f) { return json{{"A", mat(f.A)}, {"b", vec(f.b)}}; }

json equilibrium_json(const AffineField& f, Side s) {
    if (!f.nondegenerate()) return json{{"side", to_string(s)}, {"kind", "none"}};
    const EquilibriumInfo e = equilibrium_info(f, s);
    return json{{"side", to_string(s)},
                {"location", vec(e.location)},
                {"kind", to_string(e.kind)},
                {"stability", to_string(e.stability)},
                {"placement", to_string(e.placement)}};
}

json canonical_json(const FilippovSystem& sys) {
    json out;
    const Premises pr = check_premises(sys);
    out["premises"] = json{{"cross_products_distinct", pr.cross_products_distinct},
                           {"admissible_focus_side", to_string(pr.admissible_focus_side)}};
    try {
        const CanonicalForm cf = to_canonical(sys);
        const CanonicalParams& p = cf.params;
        out["params"] = json{{"alpha", p.alpha}, {"beta", p.beta},     {"delta", p.delta},   {"eta", p.eta},
                             {"rho", p.rho},     {"gamma1", p.gamma1}, {"gamma2", p.gamma2}, {"gamma3", p.gamma3}};
        out["mirror_x"] = cf.record.mirror_x;
        out["mirror_y"] = cf.record.mirror_y;
        out["steps"] = cf.record.steps;
        try {
            out["switching_pattern"] = std::string(1, classify_csl(p));
        } catch (const Error&) {
            out["switching_pattern"] = nullptr;
        }
        std::string why;
        out["half_map_conditions"] = satisfies_addcond(p, &why);
        if (!why.empty()) out["half_map_conditions_failure"] = why;
    } catch (const Error& e) {
        out["error"] = e.what();
    }
    return out;
}

json record_json(const PeriodicOrbitRecord& r) {
    json j;
    j["kind"] = to_string(r.kind);
    j["traced_backward"] = r.backward;
    j["period"] = num(r.period);
    j["multiplier"] = r.multiplier ? num(*r.multiplier) : json(nullptr);
    j["hyperbolic"] = r.hyperbolic;
    j["through_tangency"] = r.through_tangency;
    if (r.configuration)
        j["configuration"] = json{{"tag", to_string(r.configuration->tag)},
                                  {"frame", to_string(r.configuration->frame)},
                                  {"word", r.configuration->word}};
    json sig = json::array();
    for (const auto& c : r.axis_signature) sig.push_back(json{{"kind", to_string(c.kind)}, {"y", num(c.y)}});
    j["axis_signature"] = sig;
    return j;
}

void append_classification(json& r, const FilippovSystem& sys, const AxisTransform& tf) {
    r["axis_frame"] = json{{"B", mat(tf.B)}, {"nu", vec(tf.nu)}, {"right", field_json(sys.right)}, {"left", field_json(sys.left)}};

    const SigmaDecomposition dec = sigma_decomposition(sys);
    json ivs = json::array();
    for (const auto& iv : dec.intervals) ivs.push_back(json{{"lo", num(iv.lo)}, {"hi", num(iv.hi)}, {"label", to_string(iv.label)}});
    json pts = json::array();
    for (const auto& p : dec.points) pts.push_back(json{{"y", num(p.y)}, {"label", to_string(p.label)}});
    r["sigma"] = json{{"intervals", ivs}, {"points", pts}};

    r["equilibria"] = json::array({equilibrium_json(sys.right, Side::Right), equilibrium_json(sys.left, Side::Left)});
    json tg = json::array();
    for (const auto& t : tangency_points(sys))
        tg.push_back(json{{"side", to_string(t.side)}, {"location", vec(t.location)}, {"visibility", to_string(t.visibility)}});
    r["tangencies"] = tg;
    json pe = json::array();
    for (const auto& p : pseudo_equilibria(sys)) pe.push_back(vec(p));
    r["pseudo_equilibria"] = pe;
}

}  // namespace

std::string classification_report(const SystemSpec& spec) {
    json r;
    r["spec"] = json::parse(serialize_spec(spec));
    const auto [sys, tf] = normalize_to_y_axis(spec.raw);
    append_classification(r, sys, tf);
    return r.dump(2) + "\n";
}

std::string canonical_report(const SystemSpec& spec) {
    json r;
    r["spec"] = json::parse(serialize_spec(spec));
    r["canonical"] = canonical_json(normalize_to_y_axis(spec.raw).first);
    return r.dump(2) + "\n";
}

SystemSpec parse_spec(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        malformed(std::string("invalid JSON: ") + e.what());
    }
    if (!j.is_object()) malformed("top level must be an object");
    static const char* known[] = {"name", "provenance", "A_plus", "b_plus", "A_minus", "b_minus", "c", "d"};
    for (const auto& [k, v] : j.items()) {
        if (std::find(std::begin(known), std::end(known), k) == std::end(known)) malformed("unknown key " + k);
    }
    SystemSpec s;
    if (j.contains("name")) {
        if (!j["name"].is_string()) malformed("name must be a string");
        s.name = j["name"].get<std::string>();
    }
    if (j.contains("provenance")) {
        if (!j["provenance"].is_string()) malformed("provenance must be a string");
        s.provenance = j["provenance"].get<std::string>();
    }
    s.raw.plus = {read_mat(j, "A_plus"), read_vec(j, "b_plus")};
    s.raw.minus = {read_mat(j, "A_minus"), read_vec(j, "b_minus")};
    if (j.contains("c")) {
        s.raw.c = read_vec(j, "c");
        s.has_c = true;
    }
    if (j.contains("d")) {
        s.raw.d = finite_number(j["d"], "d");
        s.has_d = true;
    }
    return s;
}

SystemSpec load_spec(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) malformed("cannot read " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_spec(ss.str());
}

std::string serialize_spec(const SystemSpec& s) {
    json j;
    if (!s.name.empty()) j["name"] = s.name;
    if (!s.provenance.empty()) j["provenance"] = s.provenance;
    j["A_plus"] = mat(s.raw.plus.A);
    j["b_plus"] = vec(s.raw.plus.b);
    j["A_minus"] = mat(s.raw.minus.A);
    j["b_minus"] = vec(s.raw.minus.b);
    if (s.has_c) j["c"] = vec(s.raw.c);
    if (s.has_d) j["d"] = s.raw.d;
    return j.dump(2) + "\n";
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string analysis_report(const SystemSpec& spec, std::uint64_t seed) {
    json r;
    r["tool_version"] = kToolVersion;
    r["seed"] = seed;
    r["spec"] = json::parse(serialize_spec(spec));

    const auto [sys, tf] = normalize_to_y_axis(spec.raw);
    append_classification(r, sys, tf);
    r["canonical"] = canonical_json(sys);

    try {
        const CoexistenceReport rep = coexistence(sys);
        json per;
        per["n_crossing"] = rep.n_crossing;
        per["n_sliding"] = rep.n_sliding;
        per["configuration"] = rep.configuration ? json{{"tag", to_string(rep.configuration->tag)},
                                                        {"frame", to_string(rep.configuration->frame)},
                                                        {"word", rep.configuration->word}}
                                                 : json(nullptr);
        per["standard_orbits"] = rep.standard_orbits;
        per["crossing_route"] = rep.closed_form_route ? "displacement" : "numeric";
        json recs = json::array();
        for (const auto& rec : rep.records) recs.push_back(record_json(rec));
        per["records"] = recs;
        r["periodic"] = per;
    } catch (const Error& e) {
        r["periodic"] = json{{"error", e.what()}};
    }
    return r.dump(2) + "\n";
}

std::string orbit_csv(const std::vector<OrbitSample>& samples) {
    std::string out = "t,x,y,segment_kind\r\n";
    for (const auto& s : samples) {
        out += format_double(s.t) + ',' + format_double(s.z.x) + ',' + format_double(s.z.y) + ',' +
               std::string(to_string(s.kind)) + "\r\n";
    }
    return out;
}

std::string dfunc_csv(const HalfMapContext& ctx, double y_min, double y_max, std::size_t samples) {
    std::string out = "y,P_R,P_Linv,D\r\n";
    for (std::size_t i = 0; i < samples; ++i) {
        const double y = samples == 1 ? y_min : y_min + (y_max - y_min) * static_cast<double>(i) / static_cast<double>(samples - 1);
        std::string pr, pl, d;
        try {
            const double v = P_R(y, ctx);
            pr = format_double(v);
            try {
                const double w = P_L_inv(y, ctx);
                pl = format_double(w);
                d = format_double(w - v);
            } catch (const Error&) {
            }
        } catch (const Error&) {
            try {
                pl = format_double(P_L_inv(y, ctx));
            } catch (const Error&) {
            }
        }
        out += format_double(y) + ',' + pr + ',' + pl + ',' + d + "\r\n";
    }
    return out;
}

}  // namespace flp
