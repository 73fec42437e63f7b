// Network model description and the coordinate frame along the unperturbed
// torus. States are real vectors; complex oscillator states enter through
// the identification C = R^2 on the caller's side.

#pragma once

#include <functional>
#include <string>
#include <vector>

#include "phasered/history.hpp"

namespace phasered {

// Raised when a linear solve or iteration cannot produce a valid result;
// the CLI maps it to exit code 2.
struct SolverError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Oscillator {
  int dim = 0;       // state dimension n_j
  double omega = 0;  // orbit frequency, rad/time
  // Periodic orbit as a function of its phase angle: theta -> Gamma(theta),
  // a one-angle real series so that omega * dGamma/dtheta = F(Gamma).
  FourierSeries orbit{1, 1, 1, 1};
  std::function<VecR(const VecR&)> f;
  std::function<VecR(const VecR&, const VecR&)> df;                 // F'(x) v
  std::function<VecR(const VecR&, const VecR&, const VecR&)> d2f;   // F''(x)[v,w]
};

struct Coupling {
  int target = 0;  // oscillator receiving the input
  int source = 0;  // oscillator supplying the delayed state
  double delay = 0.0;
  std::function<VecR(const VecR&, const VecR&)> g;  // G(x_target, x_source_delayed)
  std::function<VecR(const VecR&, const VecR&, const VecR&)> dg_target;
  std::function<VecR(const VecR&, const VecR&, const VecR&)> dg_delayed;
};

struct ModelSpec {
  std::vector<Oscillator> oscillators;
  std::vector<Coupling> couplings;

  int torus_dim() const { return static_cast<int>(oscillators.size()); }
  int state_dim() const;
  int block_offset(int j) const;
  double max_delay() const;
  std::vector<double> omega() const;

  VecR f_full(const VecR& x) const;
  VecR df_full(const VecR& x, const VecR& v) const;
  VecR d2f_full(const VecR& x, const VecR& v, const VecR& w) const;

  // Largest residual of omega_j Gamma_j'(theta) - F_j(Gamma_j(theta)) over a
  // theta lattice.
  double orbit_residual(int lattice_n = 64) const;
};

// Tangent/normal frame along the unperturbed torus with constant hyperbolic
// matrix L. T and N map constant vectors into state space; pi projects onto
// im T along im N; the pseudo-inverses are the row blocks of [T|N]^{-1}, so
// that Tp T = I, Tp N = 0, Np N = I, Np T = 0 by construction.
struct FloquetFrame {
  int torus_dim = 0;
  int state_dim = 0;
  FourierSeries T{2, 1, 1, 1};       // n x m
  FourierSeries N{2, 1, 1, 1};       // n x (n-m)
  Eigen::MatrixXd L;                 // (n-m) x (n-m)
  FourierSeries pi{2, 1, 1, 1};      // n x n
  FourierSeries T_pinv{2, 1, 1, 1};  // m x n
  FourierSeries N_pinv{2, 1, 1, 1};  // (n-m) x n
};

struct FrameDiagnostics {
  double max_condition = 0.0;        // of [T|N] over the lattice
  double pinv_identity_defect = 0.0; // worst of the four identities
  double min_abs_real_eig = 0.0;     // of L
};

// Builds pi and the pseudo-inverses from T, N, L by pointwise block
// inversion on a collocation lattice. Throws SolverError when [T|N] is
// ill-conditioned (beyond cond_limit) or L has an eigenvalue too close to
// the imaginary axis.
FloquetFrame make_frame(const FourierSeries& T, const FourierSeries& N,
                        const Eigen::MatrixXd& L, int K,
                        double cond_limit = 1e8,
                        double hyperbolicity_tol = 1e-6,
                        FrameDiagnostics* diag = nullptr);

// Residual of the frame PDE  d_omega N + N L - F'(e0) N  on a lattice.
double frame_pde_residual(const FloquetFrame& frame, const ModelSpec& model,
                          const FourierSeries& e0, int lattice_n = 33);

// Worst defect of the four pseudo-inverse identities, evaluated as series
// products on the stored frame.
double pinv_identity_defect(const FloquetFrame& frame);

// Per-order data of the expansion in the coupling strength.
struct Expansion {
  std::vector<double> omega;
  std::vector<FourierSeries> f;
  std::vector<FourierSeries> e;
  std::vector<PhaseHistoryField> E;
  int orders() const { return static_cast<int>(f.size()) - 1; }
};

}  // namespace phasered
