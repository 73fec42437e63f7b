// Order-by-order solver for the conjugacy equations of a delay-coupled
// oscillator network: right-hand side assembly, tangential / normal /
// transport solves, and residual checks of the assembled expansion.

#pragma once


#include "phasered/model.hpp"

namespace phasered {

struct ReduceOptions {
  int max_order = 2;
  int trunc = 8;           // normal-form order K
  double tol_res = kDefaultTolRes;
  int collocation_points = 0;  // 0: 2*trunc+1 per dimension
};

// Base case: e0 and E0 assembled from the uncoupled orbits, f0 == omega.
struct OrderZero {
  FourierSeries e0;
  PhaseHistoryField E0;
  FourierSeries f0;
};
OrderZero build_order0(const ModelSpec& model, int trunc);

// eta_1(phi) = G(E0(phi, .)): the coupling functional applied to the
// zeroth-order history, sampled at the discrete delays and collocated.
FourierSeries eta1(const ModelSpec& model, const PhaseHistoryField& E0,
                   int trunc, int n_points = 0);

// eta_2 = 1/2 F''(e0)[e1,e1] - d_phi e1 . f1 + G'(E0) E1.
FourierSeries eta2(const ModelSpec& model, const FourierSeries& e0,
                   const FourierSeries& e1, const FourierSeries& f1,
                   const PhaseHistoryField& E0, const PhaseHistoryField& E1,
                   int trunc, int n_points = 0);

// H2(phi, s) = - d_phi E1(phi, s) . f1(phi). (H1 vanishes identically.)
PhaseHistoryField h2_field(const PhaseHistoryField& E1,
                           const FourierSeries& f1);

struct NearResonance {
  MultiIndex k;
  double divisor = 0.0;
};

struct TangentialSolution {
  FourierSeries g;
  FourierSeries f;
  std::vector<NearResonance> warnings;
};

// Solves  d_omega g + f = zeta  with  zeta = Tp pi eta  mode by mode:
// resonant modes feed f, nonresonant modes within |k|_1 <= K feed
// g_k = zeta_k / (i<k,omega>), modes beyond K stay in f (normal form up to
// order K). Divisors within a decade of the resonance tolerance are
// reported as warnings.
TangentialSolution solve_tangential(const FourierSeries& eta,
                                    const FloquetFrame& frame,
                                    const std::vector<double>& omega, int K,
                                    double tol_res = kDefaultTolRes);

// Solves  d_omega h - L h = N^+ (I - pi) eta  as
// h_k = (i<k,omega> I - L)^{-1} K_k. Throws SolverError when a shifted
// matrix is numerically singular.
FourierSeries solve_normal(const FourierSeries& eta, const FloquetFrame& frame,
                           const std::vector<double>& omega,
                           const Eigen::MatrixXd& L);

// e_l = T g_l + N h_l.
FourierSeries assemble_e(const FourierSeries& g, const FourierSeries& h,
                         const FloquetFrame& frame);

// Transport solve:
//   E_l(phi,s) = e_l(phi + s omega)
//                + d_phi E0(phi,s) . int_0^s f_l(phi + omega(s-zeta)) dzeta
//                - int_0^s H_l(phi + omega(s-zeta), zeta) dzeta,
// all three terms evaluated in closed form on the term algebra.
PhaseHistoryField lift_history(const FourierSeries& e_l,
                               const FourierSeries& f_l,
                               const PhaseHistoryField& H_l,
                               const PhaseHistoryField& E0,
                               const std::vector<double>& omega,
                               double tol_res = kDefaultTolRes);

// Full pipeline for orders 0..max_order (max_order <= 2; higher orders are
// rejected since only the explicit first- and second-order right-hand sides
// are implemented). Collects near-resonance warnings from the tangential
// solves when a sink is provided.
Expansion reduce(const ModelSpec& model, const FloquetFrame& frame,
                 const ReduceOptions& opts = {},
                 std::vector<NearResonance>* warnings = nullptr);

struct ConjugacyResidual {
  double r_fin = 0.0;
  double r_tr = 0.0;
};

// Sup-norm residuals of the two conjugacy equations for the eps-summed
// expansion, measured over a phi lattice (r_fin) and a (phi, s) lattice
// (r_tr).
ConjugacyResidual conjugacy_residual(const Expansion& expansion,
                                     const ModelSpec& model, double eps,
                                     int lattice_n = 24, int s_points = 9);

// Residual of the order-l finite homological equation
// d_omega e_l - F'(e0) e_l + T f_l - eta_l on a lattice; a direct check of
// the tangential/normal assembly.
double homological_residual(const ModelSpec& model, const FourierSeries& e0,
                            const FourierSeries& e_l, const FourierSeries& f_l,
                            const FourierSeries& eta_l, int lattice_n = 24);

// Finite-difference residual of the transport equation
// d_omega E_l - d_s E_l + d_phi E0 . f_l - H_l on a (phi, s) lattice.
double transport_fd_residual(const PhaseHistoryField& E_l,
                             const PhaseHistoryField& E0,
                             const FourierSeries& f_l,
                             const PhaseHistoryField& H_l,
                             const std::vector<double>& omega,
                             int lattice_n = 16, int s_points = 7,
                             double fd_step = 1e-4);

}  // namespace phasered
