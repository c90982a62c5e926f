#pragma once

#include "flp/periodic.hpp"

namespace flp {

/// Root of cos t - sin t - e^{-t} on (pi, 2pi).
double t_star();
/// -1 / (e^{t*} sin t*).
double beta0();

/// Right unstable focus with offset (0,1); left block [[2,1],[-2,0]], offset (1, rho).
CanonicalParams example1_params(double alpha, double rho);
/// Right block [[2,1],[-2,0]] with offset (0,1); left focus with gamma1 < -2 and offset (eta, rho(gamma1)).
CanonicalParams example2_params(double gamma1, double eta);

/// rho at which the left return from T_L meets the point whose right loop lands on T_L.
double solve_rho_c(double alpha);
/// eta at which the left loop after the right loop from T_R comes back exactly to T_R.
double solve_eta_c(double gamma1);

CoexistenceReport scenario_example1(double alpha, double rho);
CoexistenceReport scenario_example2(double gamma1, double eta);

struct ScenarioWindow {
    double critical = 0.0;
    double epsilon = 0.0;
    CoexistenceReport below;
    CoexistenceReport at;
    CoexistenceReport above;
};

/// First epsilon in 1e-1, 1e-2, ..., 1e-6 with the predicted counts on both sides; throws WindowNotFound.
ScenarioWindow find_example1_window(double alpha);
ScenarioWindow find_example2_window(double gamma1);

}  // namespace flp
