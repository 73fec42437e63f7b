// Two identical Stuart-Landau oscillators with delayed diffusive coupling:
// model adapter (real coordinates, C = R^2), analytic Floquet frame, and the
// closed-form expansion data used as an oracle for the generic solver.

#pragma once

#include "phasered/homological.hpp"
#include "phasered/model.hpp"

namespace phasered::sl {

struct SLParams {
  double alpha = 1.0;
  double beta = 1.0;
  double gamma = -1.0;
  double delta = 0.0;
  double eps = 0.1;   // coupling strength
  double rho = 0.0;   // coupling rotation, rad
  double tau = 0.0;   // delay, time

  void validate() const;  // gamma != 0, -alpha/gamma > 0, Omega != 0
};

struct OrbitData {
  double R = 0.0;      // orbit radius, R^2 = -alpha/gamma
  double Omega = 0.0;  // angular frequency, beta - alpha*delta/gamma
};

OrbitData orbit(const SLParams& p);

// Network model in real coordinates (Re z1, Im z1, Re z2, Im z2).
ModelSpec make_model(const SLParams& p);

// Analytic frame: T = d_phi e0, N(phi) u = (gamma + i delta) e^{i phi_j} u_j,
// L = diag(-2 alpha); projections and pseudo-inverses via make_frame.
FloquetFrame frame(const SLParams& p, int trunc = 8);

// Closed-form expansion data. f2/e1/E1 require delta == 0.
FourierSeries f1_closed(const SLParams& p);
FourierSeries f2_closed(const SLParams& p);
FourierSeries e1_closed(const SLParams& p);
PhaseHistoryField E1_closed(const SLParams& p);

// Right-hand side of the phase-difference equation psi' = v(psi) at the
// given truncation order (1 or 2; order 2 requires delta == 0).
double psi_rhs(const SLParams& p, int order, double psi);

struct PsiTrajectory {
  std::vector<double> times;
  std::vector<double> psi;
};

// Fixed-step RK4 flow of the reduced phase difference.
PsiTrajectory integrate_reduced(const SLParams& p, int order, double psi0,
                                double t_end, double step);

enum class Stability { Stable, Unstable, Marginal };

struct PsiEquilibrium {
  double psi = 0.0;
  Stability stability = Stability::Marginal;
  double derivative = 0.0;
};

// Equilibria of psi' = v(psi) on [0, 2pi) by dense sign-change scan plus
// bisection; stability from a centered difference of v.
std::vector<PsiEquilibrium> reduced_equilibria(const SLParams& p, int order,
                                               int scan_points = 4096,
                                               double bisect_tol = 1e-12);

// Convenience wrapper: generic reduction of the SL model with its analytic
// frame.
Expansion reduce(const SLParams& p, int max_order = 2, int trunc = 8,
                 std::vector<NearResonance>* warnings = nullptr);

}  // namespace phasered::sl
