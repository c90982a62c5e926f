#pragma once

#include <optional>
#include <string>
#include <vector>

#include "flp/canonical.hpp"

namespace flp {

/// Checks the hypotheses under which the parametric half-maps hold; `why` names the first failure.
bool satisfies_addcond(const CanonicalParams& p, std::string* why = nullptr);

/// Canonical parameters with gamma1 == gamma3 and everything the half-maps need.
struct HalfMapContext {
    CanonicalParams params;
    double nu = 0.0;
    double t_hat_minus = 0.0;  // in (pi/nu, 2pi/nu]
    double t_hat_plus = 0.0;   // in (pi, 2pi]
    double y_eta = 0.0;
    double y_star = 0.0;
    std::optional<TransformRecord> shear;  // set when the input had gamma1 != gamma3

    /// Shears first when delta == 1 and gamma1 != gamma3; throws ConditionViolated.
    static HalfMapContext make(const CanonicalParams& p);
};

double phi(int sign, double t, const HalfMapContext& ctx);
double psi(int sign, double t, const HalfMapContext& ctx);

/// (t_hat_minus, t_hat_plus); throws ConditionViolated.
std::pair<double, double> solve_t_hats(const CanonicalParams& p);

struct MapPoint {
    double y;
    double value;
};

/// (y, P_R(y)) at t_plus in (pi, t_hat_plus].
MapPoint right_map_param(double t_plus, const HalfMapContext& ctx);
/// (y, P_L^{-1}(y)) at t_minus in (pi/nu, t_hat_minus].
MapPoint left_map_param(double t_minus, const HalfMapContext& ctx);

double P_R(double y, const HalfMapContext& ctx);
double P_L_inv(double y, const HalfMapContext& ctx);

/// Flight times of the two half-loops through (0, y).
double right_time(double y, const HalfMapContext& ctx);
double left_time(double y, const HalfMapContext& ctx);

struct HalfMapDerivatives {
    double dPR;
    double dPLinv;
    double d2PR;
    double d2PLinv;
};

HalfMapDerivatives derivatives(double y, const HalfMapContext& ctx);

double displacement(double y, const HalfMapContext& ctx);
double displacement_slope(double y, const HalfMapContext& ctx);

struct DisplacementZero {
    double y;
    int D_prime_sign;
    double D_prime;
    bool at_endpoint;  // zero sits on y_star (orbit through a tangency point)
};

std::vector<DisplacementZero> zeros_of_D(const HalfMapContext& ctx);

}  // namespace flp
