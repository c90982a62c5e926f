#include <fstream>
#include <iostream>
#include <regex>
#include <sstream>

#include <CLI11.hpp>

#include "flp/acceptance.hpp"
#include "flp/bundled.hpp"
#include "flp/periodic.hpp"

namespace {

using namespace flp;

int exit_code(const Error& e) {
    return e.code() == ErrorCode::MalformedInput || e.code() == ErrorCode::ZeroNormal ? 2 : 1;
}

/// Addresses one number of a spec: A_plus[i][j], b_minus[i], c[i] or d.
double& spec_entry(SystemSpec& s, const std::string& path) {
    static const std::regex re(R"((A_plus|A_minus|b_plus|b_minus|c)(?:\[([01])\])(?:\[([01])\])?|d)");
    std::smatch m;
    if (!std::regex_match(path, m, re)) throw Error(ErrorCode::MalformedInput, "unknown parameter " + path);
    if (path == "d") {
        s.has_d = true;
        return s.raw.d;
    }
    const std::string key = m[1];
    const int i = std::stoi(m[2]);
    if (key[0] == 'A') {
        if (!m[3].matched) throw Error(ErrorCode::MalformedInput, key + " needs two indices");
        const int j = std::stoi(m[3]);
        Mat2& A = key == "A_plus" ? s.raw.plus.A : s.raw.minus.A;
        return i == 0 ? (j == 0 ? A.a11 : A.a12) : (j == 0 ? A.a21 : A.a22);
    }
    if (m[3].matched) throw Error(ErrorCode::MalformedInput, key + " takes one index");
    Vec2& v = key == "b_plus" ? s.raw.plus.b : key == "b_minus" ? s.raw.minus.b : s.raw.c;
    if (key == "c") s.has_c = true;
    return i == 0 ? v.x : v.y;
}

struct Range {
    double a, b;
    std::size_t n;
};

Range parse_range(const std::string& text) {
    std::stringstream ss(text);
    std::string a, b, n;
    if (!std::getline(ss, a, ':') || !std::getline(ss, b, ':') || !std::getline(ss, n) || a.empty() || b.empty() || n.empty())
        throw Error(ErrorCode::MalformedInput, "range must be a:b:n");
    try {
        Range r{std::stod(a), std::stod(b), static_cast<std::size_t>(std::stoul(n))};
        if (r.n == 0 || !std::isfinite(r.a) || !std::isfinite(r.b)) throw Error(ErrorCode::MalformedInput, "empty or non-finite range");
        return r;
    } catch (const std::logic_error&) {
        throw Error(ErrorCode::MalformedInput, "range must be a:b:n");
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Analysis of planar piecewise-linear Filippov systems"};
    app.require_subcommand(1);

    std::string spec_path;
    auto* classify = app.add_subcommand("classify", "axis decomposition, equilibria and tangency points");
    classify->add_option("spec", spec_path, "system spec (JSON)")->required();

    auto* canonical = app.add_subcommand("canonical", "normal-form parameters and premises");
    canonical->add_option("spec", spec_path, "system spec (JSON)")->required();

    double x0 = 0.0, y0 = 0.0;
    bool backward = false;
    std::size_t budget = 200, per_segment = 64;
    auto* orbit = app.add_subcommand("orbit", "orbit samples as CSV (t,x,y,segment_kind)");
    orbit->add_option("spec", spec_path, "system spec (JSON)")->required();
    orbit->add_option("--x0", x0, "initial x")->required();
    orbit->add_option("--y0", y0, "initial y")->required();
    orbit->add_flag("--backward", backward, "integrate backwards in time");
    orbit->add_option("--budget", budget, "maximum number of segments")->capture_default_str();
    orbit->add_option("--per-segment", per_segment, "samples per segment")->capture_default_str();

    double y_min = 0.0, y_max = 1.0;
    std::size_t samples = 100;
    auto* dfunc = app.add_subcommand("dfunc", "half-maps and displacement function as CSV (y,P_R,P_Linv,D)");
    dfunc->add_option("spec", spec_path, "system spec (JSON)")->required();
    dfunc->add_option("--y-min", y_min, "first y")->required();
    dfunc->add_option("--y-max", y_max, "last y")->required();
    dfunc->add_option("--samples", samples, "number of rows")->capture_default_str();

    std::uint64_t seed = 0;
    auto* periodic = app.add_subcommand("periodic", "full analysis report with periodic orbits");
    periodic->add_option("spec", spec_path, "system spec (JSON)")->required();
    periodic->add_option("--seed", seed, "seed recorded in the report (default FLP_SEED or built-in)");

    std::vector<int> criteria;
    std::size_t sweep_n = 10000;
    auto* verify = app.add_subcommand("verify-paper", "run the acceptance suite and print a pass/fail table");
    verify->add_option("--criterion", criteria, "run only these criteria (1..10)");
    verify->add_option("--sweep-systems", sweep_n, "systems in the random sweep")->capture_default_str();

    std::string param, range;
    auto* sweep = app.add_subcommand("sweep", "coexistence counts over one spec entry, as CSV");
    sweep->add_option("spec", spec_path, "spec template (JSON)")->required();
    sweep->add_option("--param", param, "entry to vary: A_plus[i][j], b_minus[i], c[i], d, ...")->required();
    sweep->add_option("--range", range, "a:b:n")->required();

    std::string write_dir;
    auto* bundled = app.add_subcommand("bundled", "list the shipped example systems or write them as JSON");
    bundled->add_option("--write", write_dir, "directory to write <name>.json files into");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (*classify) {
            std::cout << classification_report(load_spec(spec_path));
        } else if (*canonical) {
            std::cout << canonical_report(load_spec(spec_path));
        } else if (*orbit) {
            const SystemSpec spec = load_spec(spec_path);
            const auto [sys, tf] = normalize_to_y_axis(spec.raw);
            OrbitOptions o;
            o.budget = budget;
            o.backward = backward;
            const Orbit orb = filippov_orbit(sys, tf.to_axis_frame({x0, y0}), o);
            auto pts = sample_orbit(sys, orb, per_segment);
            for (auto& p : pts) p.z = tf.to_raw_frame(p.z);
            std::cout << orbit_csv(pts);
            std::cerr << "terminal: " << to_string(orb.terminal.kind) << '\n';
        } else if (*dfunc) {
            const SystemSpec spec = load_spec(spec_path);
            const CanonicalForm cf = to_canonical(normalize_to_y_axis(spec.raw).first);
            const HalfMapContext ctx = HalfMapContext::make(cf.params);
            std::cout << dfunc_csv(ctx, y_min, y_max, samples);
        } else if (*periodic) {
            if (periodic->count("--seed") == 0) seed = seed_from_env();
            std::cout << analysis_report(load_spec(spec_path), seed);
        } else if (*verify) {
            AcceptanceOptions opts = default_acceptance_options();
            opts.sweep_systems = sweep_n;
            bool all = true;
            auto emit = [&](const CriterionResult& r) {
                std::cout << format_result_line(r) << std::endl;
                all = all && r.pass;
            };
            if (criteria.empty()) {
                run_acceptance(opts, emit);
            } else {
                for (int id : criteria) emit(run_criterion(id, opts));
            }
            return all ? 0 : 1;
        } else if (*sweep) {
            const SystemSpec base = load_spec(spec_path);
            const Range r = parse_range(range);
            std::cout << "value,n_crossing,n_sliding,configuration,error\r\n";
            for (std::size_t i = 0; i < r.n; ++i) {
                const double v = r.n == 1 ? r.a : r.a + (r.b - r.a) * static_cast<double>(i) / static_cast<double>(r.n - 1);
                SystemSpec s = base;
                spec_entry(s, param) = v;
                std::cout << format_double(v) << ',';
                try {
                    const CoexistenceReport rep = coexistence(normalize_to_y_axis(s.raw).first);
                    std::cout << rep.n_crossing << ',' << rep.n_sliding << ','
                              << (rep.configuration ? to_string(rep.configuration->tag) : std::string_view{}) << ",\r\n";
                } catch (const Error& e) {
                    std::cout << ",,,\"" << to_string(e.code()) << "\"\r\n";
                }
            }
        } else if (*bundled) {
            for (const auto& s : bundled_examples()) {
                if (write_dir.empty()) {
                    std::cout << s.name << "  " << s.provenance << '\n';
                    continue;
                }
                const auto path = std::filesystem::path(write_dir) / (s.name + ".json");
                std::ofstream out(path, std::ios::binary);
                out << serialize_spec(s);
                if (!out) throw Error(ErrorCode::MalformedInput, "cannot write " + path.string());
            }
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_code(e);
    }
    return 0;
}
