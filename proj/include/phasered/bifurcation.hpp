// Synchronization stability of the delay-coupled Stuart-Landau pair (delta
// = 0): eps^2-truncated eigenvalues of the in-phase and anti-phase states,
// numerical zero curves in rho, their Taylor expansions, bistability bands,
// and the (rho, tau) parameter-plane sweep.

#pragma once

#include <iosfwd>
#include <string>

#include "phasered/dde.hpp"

namespace phasered::bif {

using sl::SLParams;

struct EigenvaluePair {
  double lambda_sync = 0.0;
  double lambda_splay = 0.0;
};

// Linearizations of the second-order phase-difference dynamics at psi = 0
// and psi = pi, truncated at eps^2. Requires delta == 0.
EigenvaluePair eigenvalues(const SLParams& p);

enum class CurveKind { Sync, Splay };

// Branch anchor: the eigenvalues vanish near rho = branch + omega tau with
// branch in {pi/2, 3pi/2}.
enum class Branch { HalfPi, ThreeHalfPi };

double branch_angle(Branch b);

// Bisection root of the chosen truncated eigenvalue in rho, seeded by a
// dense scan of (branch - 1, branch + omega tau + 1); returns the sign
// change nearest branch + omega tau. Throws SolverError without a bracket.
double rho_zero_numeric(CurveKind kind, Branch branch, double eps, double tau,
                        const SLParams& p, double tol = 1e-12);

// Taylor expansions of the four zero curves about (eps, tau) = (0, 0).
double rho_taylor(CurveKind kind, Branch branch, double eps, double tau,
                  const SLParams& p);

struct BistabilityBand {
  bool empty = true;
  double rho_lo = 0.0;  // splay curve (anti-phase gains stability)
  double rho_hi = 0.0;  // sync curve (in-phase loses stability)
};

// Band of rho values where both states are linearly stable: between the
// numeric splay and sync roots, validated at interior samples.
BistabilityBand bistability_band(Branch branch, double eps, double tau,
                                 const SLParams& p, int interior_samples = 16);

enum class SweepMode { Dde, Reduced };

struct SweepCell {
  double rho = 0.0;
  double tau = 0.0;
  dde::AttractorKind probe1 = dde::AttractorKind::Other;
  dde::AttractorKind probe2 = dde::AttractorKind::Other;
  double psi_final_1 = 0.0;
  double psi_final_2 = 0.0;
  double rho_sync_curve = 0.0;   // branch pi/2 roots at this tau
  double rho_splay_curve = 0.0;  // (NaN when root finding fails)
  std::string error;
};

struct SweepGrid {
  double rho_min = 0.0;
  double rho_max = 2.0 * M_PI;
  int rho_count = 48;
  double tau_min = 0.0;
  double tau_max = 8.0;
  int tau_count = 33;
};

struct SweepOptions {
  SweepMode mode = SweepMode::Dde;
  double probe1 = 0.3;
  double probe2 = M_PI - 0.3;
  bool random_probes = false;  // seeded uniform psi0 per cell instead
  std::uint64_t seed = 0;
  double t_end = 1000.0;
  double threshold = 0.1;
  int threads = 0;  // 0: hardware concurrency
};

struct SweepTable {
  SweepGrid grid;
  std::vector<SweepCell> cells;  // row-major, tau outer, rho inner
};

// Classifies both probes in every cell of the grid; per-cell failures are
// recorded in the cell and the sweep continues.
SweepTable sweep(const SweepGrid& grid, const SLParams& p,
                 const SweepOptions& opts = {});

const char* attractor_name(dde::AttractorKind k);

// CSV with columns rho, tau, probe1_class, probe2_class, psi_final_1,
// psi_final_2, rho_sync_curve, rho_splay_curve.
void write_sweep_csv(std::ostream& os, const SweepTable& table);

// Self-contained SVG heatmap: blue in-phase cells, red anti-phase, split
// cells where the probes disagree, overlaid zero curves of both branches.
void write_sweep_svg(std::ostream& os, const SweepTable& table,
                     const SLParams& p, double eps);

}  // namespace phasered::bif
