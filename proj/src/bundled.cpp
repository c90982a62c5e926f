#include "flp/bundled.hpp"

#include "flp/scenarios.hpp"

namespace flp {

SystemSpec spec_from_params(const CanonicalParams& p, const std::string& name, const std::string& provenance) {
    const FilippovSystem sys = p.system();
    SystemSpec s;
    s.name = name;
    s.provenance = provenance;
    s.raw.plus = sys.right;
    s.raw.minus = sys.left;
    return s;
}

std::vector<SystemSpec> bundled_examples() {
    std::vector<SystemSpec> out;
    const double b0 = beta0();

    CanonicalParams p;
    p.alpha = 0.1;
    p.beta = p.gamma1 = p.gamma2 = p.gamma3 = p.eta = p.rho = 1.0;
    p.delta = 0;
    out.push_back(spec_from_params(p, "example1", "normal form, small alpha, delta = 0: one sliding orbit (slide up, right loop), no crossing orbit"));

    p = {};
    p.alpha = 1.0;
    p.delta = 1;
    p.eta = 1.0;
    p.gamma2 = -1.0;
    p.gamma1 = p.gamma3 = p.rho = 0.0;
    p.beta = 1.5 * b0;
    out.push_back(spec_from_params(p, "example2", "normal form, beta between beta0 and 2 beta0: one sliding orbit crossing below T_L"));

    p = {};
    p.alpha = 1.0;
    p.delta = 1;
    p.eta = 1.0;
    p.gamma1 = 2.0;
    p.gamma2 = -2.0;
    p.gamma3 = 0.0;
    p.beta = b0;
    p.rho = -b0 + 0.01;
    out.push_back(spec_from_params(p, "example3", "normal form, beta = beta0: right loop from T_R lands exactly on T_L"));

    p.beta = 0.9 * b0;
    out.push_back(spec_from_params(p, "example4", "normal form, beta slightly below beta0: one sliding orbit with two slides"));

    p = {};
    p.alpha = p.beta = p.eta = p.rho = 1.0;
    p.delta = -1;
    p.gamma1 = -2.0;
    p.gamma2 = 2.0;
    p.gamma3 = 0.0;
    out.push_back(spec_from_params(p, "example5", "normal form, delta = -1: two sliding orbits of opposite time direction, no crossing orbit"));

    p = {};
    p.alpha = 0.01;
    p.beta = 1.0;
    p.delta = 1;
    p.eta = 1.0;
    p.rho = -1.0;
    p.gamma1 = 2.0 * p.alpha;
    p.gamma2 = -1.0 - p.alpha * p.alpha;
    p.gamma3 = 0.0;
    out.push_back(spec_from_params(p, "example6", "normal form, small alpha, left focus mirrors the right one: two sliding orbits and one unstable crossing orbit"));

    const double alpha7 = 0.05;
    const double rc = solve_rho_c(alpha7);
    out.push_back(spec_from_params(example1_params(alpha7, rc + 1e-3), "example7",
                                   "example-1 family just above rho_c: two sliding orbits and one crossing orbit"));
    out.push_back(spec_from_params(example1_params(alpha7, rc), "example1_rho_c",
                                   "example-1 family at rho_c(0.05): two crossing orbits, one through T_L, and one sliding orbit"));

    const double g1 = -2.05;
    out.push_back(spec_from_params(example2_params(g1, solve_eta_c(g1) + 1e-3), "example2_eta_above",
                                   "example-2 family, gamma1 = -2.05, eta just above eta_c: two crossing orbits and one sliding orbit"));

    SystemSpec buck;
    buck.name = "buck_converter";
    buck.provenance = "buck converter voltage control, a = b = 1, x_ref = 0.5";
    buck.raw.plus = {Mat2{-1.0, 1.0, -1.0, -1.0}, Vec2{0.0, 0.0}};
    buck.raw.minus = {Mat2{-1.0, 1.0, -1.0, -1.0}, Vec2{0.0, 1.0}};
    buck.raw.c = {1.0, 0.0};
    buck.raw.d = -0.5;
    buck.has_c = buck.has_d = true;
    out.push_back(buck);

    SystemSpec fr;
    fr.name = "dry_friction";
    fr.provenance = "oscillator with dry friction mu x sgn(x'), viscous damping 0.1, stiffness 1, mu = 0.2; switching on y = 0";
    const double alpha = 0.1, beta = 1.0, mu = 0.2;
    fr.raw.plus = {Mat2{0.0, 1.0, -beta - mu, -alpha}, Vec2{0.0, 0.0}};
    fr.raw.minus = {Mat2{0.0, 1.0, -beta + mu, -alpha}, Vec2{0.0, 0.0}};
    fr.raw.c = {0.0, 1.0};
    fr.raw.d = 0.0;
    fr.has_c = fr.has_d = true;
    out.push_back(fr);
    return out;
}

std::optional<SystemSpec> bundled_example(const std::string& name) {
    for (auto& s : bundled_examples())
        if (s.name == name) return s;
    return std::nullopt;
}

}  // namespace flp
