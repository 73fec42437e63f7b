#include "phasered/bifurcation.hpp"

#include <atomic>
#include <cmath>
#include <limits>
#include <ostream>
#include <random>
#include <thread>

namespace phasered::bif {

namespace {

void require_delta_zero(const SLParams& p) {
  if (p.delta != 0.0)
    throw std::invalid_argument("bifurcation analysis requires delta == 0");
}

double lambda_of(CurveKind kind, const SLParams& p, double rho) {
  SLParams q = p;
  q.rho = rho;
  EigenvaluePair ev = eigenvalues(q);
  return kind == CurveKind::Sync ? ev.lambda_sync : ev.lambda_splay;
}

}  // namespace

EigenvaluePair eigenvalues(const SLParams& p) {
  require_delta_zero(p);
  const auto orb = sl::orbit(p);
  const double shift = p.rho - orb.Omega * p.tau;
  const double s2 = std::pow(std::sin(shift), 2) / p.alpha;
  const double cross = p.tau * std::sin(p.rho) * std::sin(shift);
  EigenvaluePair ev;
  ev.lambda_sync = -2.0 * p.eps * std::cos(shift) -
                   2.0 * p.eps * p.eps * (p.tau + s2 - cross);
  ev.lambda_splay = 2.0 * p.eps * std::cos(shift) -
                    2.0 * p.eps * p.eps * (p.tau + s2 + cross);
  return ev;
}

double branch_angle(Branch b) {
  return b == Branch::HalfPi ? 0.5 * M_PI : 1.5 * M_PI;
}

double rho_zero_numeric(CurveKind kind, Branch branch, double eps, double tau,
                        const SLParams& p, double tol) {
  require_delta_zero(p);
  SLParams q = p;
  q.eps = eps;
  q.tau = tau;
  const auto orb = sl::orbit(q);
  const double anchor = branch_angle(branch) + orb.Omega * tau;
  const double lo = branch_angle(branch) - 1.0;
  const double hi = branch_angle(branch) + orb.Omega * tau + 1.0;

  // Dense scan for sign changes; pick the bracket nearest the anchor.
  const int n_scan = 4096;
  double best_lo = 0.0, best_hi = 0.0, best_dist = -1.0;
  double x0 = lo, v0 = lambda_of(kind, q, x0);
  for (int i = 1; i <= n_scan; ++i) {
    const double x1 = lo + (hi - lo) * double(i) / n_scan;
    const double v1 = lambda_of(kind, q, x1);
    if (v0 == 0.0 || (v0 < 0.0) != (v1 < 0.0)) {
      const double mid = 0.5 * (x0 + x1);
      const double dist = std::abs(mid - anchor);
      if (best_dist < 0.0 || dist < best_dist) {
        best_dist = dist;
        best_lo = x0;
        best_hi = x1;
      }
    }
    x0 = x1;
    v0 = v1;
  }
  if (best_dist < 0.0)
    throw SolverError("rho_zero_numeric: no bracketing sign change");

  double flo = lambda_of(kind, q, best_lo);
  while (best_hi - best_lo > tol) {
    const double mid = 0.5 * (best_lo + best_hi);
    const double fm = lambda_of(kind, q, mid);
    if (fm == 0.0) return mid;
    if ((flo < 0.0) != (fm < 0.0))
      best_hi = mid;
    else {
      best_lo = mid;
      flo = fm;
    }
  }
  return 0.5 * (best_lo + best_hi);
}

double rho_taylor(CurveKind kind, Branch branch, double eps, double tau,
                  const SLParams& p) {
  require_delta_zero(p);
  const auto orb = sl::orbit(p);
  const double w = orb.Omega;
  const double base = branch_angle(branch) + w * tau;
  const double cubic = 0.5 * eps * w * w * tau * tau * tau;
  const double inv_a = eps / p.alpha;
  if (branch == Branch::HalfPi) {
    if (kind == CurveKind::Sync) return base + inv_a + cubic;
    return base - inv_a - 2.0 * eps * tau + cubic;
  }
  if (kind == CurveKind::Sync) return base - inv_a - cubic;
  return base + inv_a + 2.0 * eps * tau - cubic;
}

BistabilityBand bistability_band(Branch branch, double eps, double tau,
                                 const SLParams& p, int interior_samples) {
  BistabilityBand band;
  if (eps <= 0.0) return band;
  double lo, hi;
  try {
    lo = rho_zero_numeric(CurveKind::Splay, branch, eps, tau, p);
    hi = rho_zero_numeric(CurveKind::Sync, branch, eps, tau, p);
  } catch (const SolverError&) {
    return band;
  }
  if (!(lo < hi)) return band;
  SLParams q = p;
  q.eps = eps;
  q.tau = tau;
  for (int i = 1; i <= interior_samples; ++i) {
    const double rho = lo + (hi - lo) * double(i) / (interior_samples + 1);
    q.rho = rho;
    EigenvaluePair ev = eigenvalues(q);
    if (!(ev.lambda_sync < 0.0 && ev.lambda_splay < 0.0)) return band;
  }
  band.empty = false;
  band.rho_lo = lo;
  band.rho_hi = hi;
  return band;
}

namespace {

dde::AttractorKind classify_reduced(const SLParams& p, double psi0,
                                    double t_end, double threshold,
                                    double* psi_final) {
  auto traj = sl::integrate_reduced(p, 2, psi0, t_end, 0.05);
  double psi = std::fmod(traj.psi.back(), 2.0 * M_PI);
  if (psi < 0.0) psi += 2.0 * M_PI;
  *psi_final = psi;
  const double dist0 = std::min(psi, 2.0 * M_PI - psi);
  if (dist0 < threshold) return dde::AttractorKind::Sync;
  if (std::abs(psi - M_PI) < threshold) return dde::AttractorKind::Antiphase;
  return dde::AttractorKind::Other;
}

// Deterministic per-cell probe draw independent of execution order.
std::pair<double, double> cell_probes(const SweepOptions& opts, int i_tau,
                                      int i_rho) {
  if (!opts.random_probes) return {opts.probe1, opts.probe2};
  std::seed_seq seq{opts.seed, std::uint64_t(i_tau), std::uint64_t(i_rho)};
  std::mt19937_64 rng(seq);
  std::uniform_real_distribution<double> unif(0.0, 2.0 * M_PI);
  return {unif(rng), unif(rng)};
}

}  // namespace

SweepTable sweep(const SweepGrid& grid, const SLParams& p,
                 const SweepOptions& opts) {
  require_delta_zero(p);
  SweepTable table;
  table.grid = grid;
  table.cells.resize(std::size_t(grid.tau_count) * grid.rho_count);

  // Zero curves once per tau row.
  std::vector<double> sync_curve(grid.tau_count), splay_curve(grid.tau_count);
  for (int it = 0; it < grid.tau_count; ++it) {
    const double tau =
        grid.tau_count > 1
            ? grid.tau_min + (grid.tau_max - grid.tau_min) * it /
                                 double(grid.tau_count - 1)
            : grid.tau_min;
    try {
      sync_curve[it] =
          rho_zero_numeric(CurveKind::Sync, Branch::HalfPi, p.eps, tau, p);
    } catch (const SolverError&) {
      sync_curve[it] = std::numeric_limits<double>::quiet_NaN();
    }
    try {
      splay_curve[it] =
          rho_zero_numeric(CurveKind::Splay, Branch::HalfPi, p.eps, tau, p);
    } catch (const SolverError&) {
      splay_curve[it] = std::numeric_limits<double>::quiet_NaN();
    }
  }

  std::atomic<std::size_t> next{0};
  const std::size_t total = table.cells.size();
  auto worker = [&]() {
    for (;;) {
      const std::size_t idx = next.fetch_add(1);
      if (idx >= total) return;
      const int it = int(idx) / grid.rho_count;
      const int ir = int(idx) % grid.rho_count;
      SweepCell& cell = table.cells[idx];
      cell.tau = grid.tau_count > 1
                     ? grid.tau_min + (grid.tau_max - grid.tau_min) * it /
                                          double(grid.tau_count - 1)
                     : grid.tau_min;
      cell.rho = grid.rho_count > 1
                     ? grid.rho_min + (grid.rho_max - grid.rho_min) * ir /
                                          double(grid.rho_count - 1)
                     : grid.rho_min;
      cell.rho_sync_curve = sync_curve[it];
      cell.rho_splay_curve = splay_curve[it];
      SLParams q = p;
      q.rho = cell.rho;
      q.tau = cell.tau;
      auto [psi_a, psi_b] = cell_probes(opts, it, ir);
      try {
        if (opts.mode == SweepMode::Dde) {
          auto c1 = dde::classify_attractor(q, psi_a, opts.t_end,
                                            opts.threshold);
          auto c2 = dde::classify_attractor(q, psi_b, opts.t_end,
                                            opts.threshold);
          cell.probe1 = c1.kind;
          cell.psi_final_1 = c1.psi_final;
          cell.probe2 = c2.kind;
          cell.psi_final_2 = c2.psi_final;
        } else {
          cell.probe1 = classify_reduced(q, psi_a, opts.t_end, opts.threshold,
                                         &cell.psi_final_1);
          cell.probe2 = classify_reduced(q, psi_b, opts.t_end, opts.threshold,
                                         &cell.psi_final_2);
        }
      } catch (const std::exception& err) {
        cell.error = err.what();
      }
    }
  };

  int n_threads = opts.threads > 0
                      ? opts.threads
                      : int(std::thread::hardware_concurrency());
  if (n_threads < 1) n_threads = 1;
  std::vector<std::thread> pool;
  for (int i = 1; i < n_threads; ++i) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  return table;
}

const char* attractor_name(dde::AttractorKind k) {
  switch (k) {
    case dde::AttractorKind::Sync:
      return "sync";
    case dde::AttractorKind::Antiphase:
      return "antiphase";
    default:
      return "other";
  }
}

namespace {

void write_num(std::ostream& os, double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  os << buf;
}

}  // namespace

void write_sweep_csv(std::ostream& os, const SweepTable& table) {
  os << "rho,tau,probe1_class,probe2_class,psi_final_1,psi_final_2,"
        "rho_sync_curve,rho_splay_curve\n";
  for (const auto& c : table.cells) {
    write_num(os, c.rho);
    os << ',';
    write_num(os, c.tau);
    os << ',' << (c.error.empty() ? attractor_name(c.probe1) : "error") << ','
       << (c.error.empty() ? attractor_name(c.probe2) : "error") << ',';
    write_num(os, c.psi_final_1);
    os << ',';
    write_num(os, c.psi_final_2);
    os << ',';
    write_num(os, c.rho_sync_curve);
    os << ',';
    write_num(os, c.rho_splay_curve);
    os << '\n';
  }
}

namespace {

const char* cell_color(dde::AttractorKind k) {
  switch (k) {
    case dde::AttractorKind::Sync:
      return "#4575b4";
    case dde::AttractorKind::Antiphase:
      return "#d73027";
    default:
      return "#e0e0e0";
  }
}

}  // namespace

void write_sweep_svg(std::ostream& os, const SweepTable& table,
                     const SLParams& p, double eps) {
  const auto& g = table.grid;
  const double width = 720.0, height = 480.0, margin = 50.0;
  const double plot_w = width - 2 * margin, plot_h = height - 2 * margin;
  auto x_of = [&](double rho) {
    return margin + (rho - g.rho_min) / (g.rho_max - g.rho_min) * plot_w;
  };
  auto y_of = [&](double tau) {
    return height - margin -
           (tau - g.tau_min) / (g.tau_max - g.tau_min + 1e-300) * plot_h;
  };
  const double cw = plot_w / std::max(1, g.rho_count - 1);
  const double ch = plot_h / std::max(1, g.tau_count - 1);

  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
     << "\" height=\"" << height << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  for (const auto& c : table.cells) {
    const double x = x_of(c.rho) - cw / 2, y = y_of(c.tau) - ch / 2;
    if (!c.error.empty()) {
      os << "<rect x=\"" << x << "\" y=\"" << y << "\" width=\"" << cw
         << "\" height=\"" << ch << "\" fill=\"#999999\"/>\n";
      continue;
    }
    if (c.probe1 == c.probe2) {
      os << "<rect x=\"" << x << "\" y=\"" << y << "\" width=\"" << cw
         << "\" height=\"" << ch << "\" fill=\"" << cell_color(c.probe1)
         << "\"/>\n";
    } else {
      // split cell: speckled rendering of bistability
      os << "<rect x=\"" << x << "\" y=\"" << y << "\" width=\"" << cw / 2
         << "\" height=\"" << ch << "\" fill=\"" << cell_color(c.probe1)
         << "\"/>\n";
      os << "<rect x=\"" << x + cw / 2 << "\" y=\"" << y << "\" width=\""
         << cw / 2 << "\" height=\"" << ch << "\" fill=\""
         << cell_color(c.probe2) << "\"/>\n";
    }
  }

  // zero curves of both branches, drawn mod 2 pi with breaks at wraps
  auto draw_curve = [&](CurveKind kind, Branch branch, const char* color) {
    os << "<polyline fill=\"none\" stroke=\"" << color
       << "\" stroke-width=\"2\" points=\"";
    bool open = false;
    double prev_x = 0.0;
    for (int it = 0; it < g.tau_count; ++it) {
      const double tau = g.tau_count > 1 ? g.tau_min + (g.tau_max - g.tau_min) *
                                                           it /
                                                           double(g.tau_count - 1)
                                         : g.tau_min;
      double rho;
      try {
        rho = rho_zero_numeric(kind, branch, eps, tau, p);
      } catch (const SolverError&) {
        continue;
      }
      double wrapped = std::fmod(rho - g.rho_min, 2.0 * M_PI);
      if (wrapped < 0.0) wrapped += 2.0 * M_PI;
      wrapped += g.rho_min;
      if (wrapped > g.rho_max) continue;
      const double x = x_of(wrapped);
      if (open && std::abs(x - prev_x) > plot_w / 2) {
        os << "\"/>\n<polyline fill=\"none\" stroke=\"" << color
           << "\" stroke-width=\"2\" points=\"";
      }
      os << x << ',' << y_of(tau) << ' ';
      prev_x = x;
      open = true;
    }
    os << "\"/>\n";
  };
  draw_curve(CurveKind::Sync, Branch::HalfPi, "#08306b");
  draw_curve(CurveKind::Splay, Branch::HalfPi, "#67000d");
  draw_curve(CurveKind::Sync, Branch::ThreeHalfPi, "#08306b");
  draw_curve(CurveKind::Splay, Branch::ThreeHalfPi, "#67000d");

  os << "<text x=\"" << width / 2 << "\" y=\"" << height - 12
     << "\" text-anchor=\"middle\" font-size=\"14\">rho</text>\n";
  os << "<text x=\"14\" y=\"" << height / 2
     << "\" text-anchor=\"middle\" font-size=\"14\" transform=\"rotate(-90 14 "
     << height / 2 << ")\">tau</text>\n";
  os << "</svg>\n";
}

}  // namespace phasered::bif
