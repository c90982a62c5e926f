#include "flp/scenarios.hpp"

#include <cmath>
#include <numbers>

#include "flp/roots.hpp"

namespace flp {

namespace {

constexpr double kPi = std::numbers::pi;

bool has_tag(const CoexistenceReport& r, ConfigTag t) { return r.configuration && r.configuration->tag == t; }

std::optional<CoexistenceReport> try_report(const CanonicalParams& p) {
    try {
        return coexistence(p.system());
    } catch (const Error&) {
        return std::nullopt;
    }
}

template <class Check>
ScenarioWindow search_window(double critical, const CanonicalParams& at_params, Check&& build_and_check) {
    auto at = try_report(at_params);
    for (int k = 1; k <= 6; ++k) {
        const double eps = std::pow(10.0, -k);
        auto lr = build_and_check(critical, eps);
        if (!lr) continue;
        ScenarioWindow w;
        w.critical = critical;
        w.epsilon = eps;
        w.below = std::move(lr->first);
        w.above = std::move(lr->second);
        if (at) w.at = *at;
        return w;
    }
    throw Error(ErrorCode::WindowNotFound, "no window in 1e-1 .. 1e-6 reproduces the predicted counts");
}

}  // namespace

double t_star() {
    return bisect_root([](double t) { return std::cos(t) - std::sin(t) - std::exp(-t); }, kPi + 1e-9, 2.0 * kPi - 1e-9);
}

double beta0() {
    const double t = t_star();
    return -1.0 / (std::exp(t) * std::sin(t));
}

CanonicalParams example1_params(double alpha, double rho) {
    CanonicalParams p;
    p.alpha = alpha;
    p.beta = 1.0;
    p.delta = 1;
    p.eta = 1.0;
    p.rho = rho;
    p.gamma1 = 2.0;
    p.gamma2 = -2.0;
    p.gamma3 = 0.0;
    return p;
}

CanonicalParams example2_params(double gamma1, double eta) {
    CanonicalParams p;
    p.alpha = 1.0;
    p.beta = 1.0;
    p.delta = 1;
    p.eta = eta;
    p.gamma1 = gamma1;
    p.gamma2 = -1.0 - gamma1 * gamma1 / 4.0;
    p.gamma3 = 0.0;
    p.rho = (4.0 + gamma1 * gamma1) * (std::exp(2.0 * kPi) - 1.0) / 8.0;
    return p;
}

double solve_rho_c(double alpha) {
    const FilippovSystem sys = example1_params(alpha, -1.0).system();
    // y2: the right loop through it lands on T_L = (0,-1); follow the right field backwards from T_L.
    const auto hit = try_first_return(sys.right.reversed(), Vec2{0.0, -1.0}, Side::Right);
    if (!hit) throw Error(ErrorCode::NoReturn, "right field does not reach T_L backwards");
    const double y2 = hit->z.y;
    // y3(rho) = -1 + rho e^{t} sin t, with t the left half-loop time of the sheared block (gamma = 1, nu = 1).
    const double t = t_star();
    return (y2 + 1.0) / (std::exp(t) * std::sin(t));
}

double solve_eta_c(double gamma1) {
    // Right loop from T_R = (0,0) lands at y1 independently of eta.
    const FilippovSystem base = example2_params(gamma1, 1.0).system();
    const auto h1 = try_first_return(base.right, Vec2{0.0, 0.0}, Side::Right);
    if (!h1) throw Error(ErrorCode::NoReturn, "no right return from T_R");
    const double y1 = h1->z.y;
    auto g = [&](double eta) -> std::optional<double> {
        const FilippovSystem sys = example2_params(gamma1, eta).system();
        if (!(sys.left.normal(y1) < 0.0)) return std::nullopt;
        const auto h2 = try_first_return(sys.left, Vec2{0.0, y1}, Side::Left);
        if (!h2) return std::nullopt;
        return h2->z.y;
    };
    const double top = -y1;
    double prev_eta = 0.0;
    std::optional<double> prev;
    for (int i = 1; i < 2000; ++i) {
        const double eta = top * i / 2000.0;
        const auto v = g(eta);
        if (v && prev && (*v > 0.0) != (*prev > 0.0)) {
            return bisect_root([&](double e) { return g(e).value_or(NAN); }, prev_eta, eta);
        }
        if (v) {
            prev = v;
            prev_eta = eta;
        }
    }
    throw Error(ErrorCode::WindowNotFound, "no sign change of the return through T_R");
}

CoexistenceReport scenario_example1(double alpha, double rho) { return coexistence(example1_params(alpha, rho).system()); }

CoexistenceReport scenario_example2(double gamma1, double eta) { return coexistence(example2_params(gamma1, eta).system()); }

ScenarioWindow find_example1_window(double alpha) {
    const double rc = solve_rho_c(alpha);
    return search_window(rc, example1_params(alpha, rc), [&](double c, double eps) -> std::optional<std::pair<CoexistenceReport, CoexistenceReport>> {
        auto lo = try_report(example1_params(alpha, c - eps));
        auto hi = try_report(example1_params(alpha, c + eps));
        if (!lo || !hi) return std::nullopt;
        if (lo->n_crossing != 2 || lo->n_sliding != 1 || !has_tag(*lo, ConfigTag::F1A_a)) return std::nullopt;
        if (hi->n_crossing != 1 || hi->n_sliding != 2) return std::nullopt;
        return std::make_pair(std::move(*lo), std::move(*hi));
    });
}

ScenarioWindow find_example2_window(double gamma1) {
    const double ec = solve_eta_c(gamma1);
    return search_window(ec, example2_params(gamma1, ec), [&](double c, double eps) -> std::optional<std::pair<CoexistenceReport, CoexistenceReport>> {
        auto lo = try_report(example2_params(gamma1, c - eps));
        auto hi = try_report(example2_params(gamma1, c + eps));
        if (!lo || !hi) return std::nullopt;
        if (lo->n_crossing != 3 || lo->n_sliding != 0) return std::nullopt;
        if (hi->n_crossing != 2 || hi->n_sliding != 1 || !has_tag(*hi, ConfigTag::F1A_b)) return std::nullopt;
        return std::make_pair(std::move(*lo), std::move(*hi));
    });
}

}  // namespace flp
