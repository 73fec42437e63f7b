// Direct integration of the delay-coupled Stuart-Landau pair by the method
// of steps: fixed-step RK4 with delayed values read from cubic Hermite dense
// output of completed segments. The step must divide the delay so stage
// lookups always land in finished history.

#pragma once

#include <complex>
#include <vector>

#include "phasered/stuart_landau.hpp"

namespace phasered::dde {

using sl::SLParams;

// On-torus initial history z_j(t) = (R + dr_j) e^{i(Omega t + phi_j)} on
// [-tau, 0].
struct HistorySpec {
  double phi1 = 0.0;
  double phi2 = 0.0;
  double dr1 = 0.0;
  double dr2 = 0.0;
};

struct State {
  Complex z1;
  Complex z2;
};

class DdeTrajectory {
 public:
  DdeTrajectory(SLParams p, HistorySpec hist, double step, int stride);

  double t_end() const { return times_.empty() ? 0.0 : times_.back(); }
  const std::vector<double>& times() const { return times_; }
  const std::vector<State>& states() const { return states_; }
  const std::vector<State>& derivs() const { return derivs_; }
  double step() const { return step_; }

  // Dense evaluation: exact history closed form for t <= 0, Hermite
  // interpolation between recorded nodes otherwise.
  State value_at(double t) const;

  void append(double t, const State& y, const State& dy);

 private:
  SLParams params_;
  HistorySpec hist_;
  double step_;
  int stride_;
  std::vector<double> times_;
  std::vector<State> states_;
  std::vector<State> derivs_;
};

// Step that divides tau and is close to min(tau, 2 pi / Omega) / 200.
double default_step(const SLParams& p);
// Largest step <= h_target with tau / h integral (h_target itself if tau == 0).
double aligned_step(const SLParams& p, double h_target);

struct IntegrateOptions {
  double step = 0.0;      // 0: default_step(p)
  int record_stride = 1;  // record every k-th node (final node always kept)
  double divergence_lo = 0.5;  // |z| bounds in units of R
  double divergence_hi = 2.0;
};

// Throws std::invalid_argument when tau/h is not a positive integer and
// SolverError when the divergence detector trips.
DdeTrajectory integrate_dde(const SLParams& p, const HistorySpec& hist,
                            double t_end, const IntegrateOptions& opts = {});

// arg(z1) - arg(z2) wrapped to [0, 2 pi); rejects near-zero amplitudes.
double phase_difference(const DdeTrajectory& traj, double t);

enum class AttractorKind { Sync, Antiphase, Other };

struct AttractorClass {
  AttractorKind kind = AttractorKind::Other;
  double psi_final = 0.0;
};

// Runs from the on-torus history with offset psi0 and classifies the final
// wrapped phase difference against the +-threshold bands around 0 and pi.
AttractorClass classify_attractor(const SLParams& p, double psi0, double t_end,
                                  double threshold = 0.1,
                                  const IntegrateOptions& opts = {});

struct DriftEstimate {
  double slope = 0.0;    // least-squares d(psi)/dt over the window
  double psi_mid = 0.0;  // unwrapped phase difference at the window center
};

// Least-squares slope of the unwrapped phase difference over [t0, t1].
DriftEstimate measured_drift(const SLParams& p, double psi0, double t0,
                             double t1, const IntegrateOptions& opts = {});

}  // namespace phasered::dde
