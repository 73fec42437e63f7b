#include "phasered/homological.hpp"

#include <Eigen/LU>
#include <Eigen/SVD>
#include <cmath>

namespace phasered {

namespace {

double max_abs_omega(const std::vector<double>& omega) {
  double m = 0.0;
  for (double w : omega) m = std::max(m, std::abs(w));
  return std::max(m, 1e-300);
}

}  // namespace

OrderZero build_order0(const ModelSpec& model, int trunc) {
  const int m = model.torus_dim();
  const int n = model.state_dim();
  const double tau = model.max_delay();

  FourierSeries e0(m, n, 1, trunc, true);
  PhaseHistoryField E0(m, n, tau, true);
  for (int j = 0; j < m; ++j) {
    const auto& osc = model.oscillators[j];
    const int off = model.block_offset(j);
    for (const auto& [k1, c] : osc.orbit.modes()) {
      MultiIndex k(m, 0);
      k[j] = k1[0];
      VecC full = VecC::Zero(n);
      full.segment(off, osc.dim) = c;
      e0.add_to_coeff(k, full);
      // Gamma_j(phi_j + omega_j s): the mode picks up exp(i k omega_j s).
      E0.add_term({k, 0, k1[0] * osc.omega, full});
    }
  }
  const auto w = model.omega();
  FourierSeries f0 = FourierSeries::constant(
      m, Eigen::Map<const VecR>(w.data(), m), trunc);
  return {e0, E0.canonicalized(), f0};
}

FourierSeries eta1(const ModelSpec& model, const PhaseHistoryField& E0,
                   int trunc, int n_points) {
  const int m = model.torus_dim();
  const int n = model.state_dim();
  auto fn = [&](const std::vector<double>& phi) {
    VecR state0 = E0.eval(phi, 0.0).real();
    VecR out = VecR::Zero(n);
    for (const auto& cpl : model.couplings) {
      const int off_t = model.block_offset(cpl.target);
      const int off_s = model.block_offset(cpl.source);
      const int dim_t = model.oscillators[cpl.target].dim;
      const int dim_s = model.oscillators[cpl.source].dim;
      VecR delayed = E0.eval(phi, -cpl.delay).real().segment(off_s, dim_s);
      out.segment(off_t, dim_t) +=
          cpl.g(state0.segment(off_t, dim_t), delayed);
    }
    return VecC(out.cast<Complex>());
  };
  return collocate(fn, m, n, trunc, n_points);
}

FourierSeries eta2(const ModelSpec& model, const FourierSeries& e0,
                   const FourierSeries& e1, const FourierSeries& f1,
                   const PhaseHistoryField& E0, const PhaseHistoryField& E1,
                   int trunc, int n_points) {
  const int m = model.torus_dim();
  const int n = model.state_dim();

  // Quadratic and coupling terms by collocation.
  auto fn = [&](const std::vector<double>& phi) {
    VecR x0 = e0.eval(phi).real();
    VecR x1 = e1.eval(phi).real();
    VecR out = 0.5 * model.d2f_full(x0, x1, x1);
    for (const auto& cpl : model.couplings) {
      const int off_t = model.block_offset(cpl.target);
      const int off_s = model.block_offset(cpl.source);
      const int dim_t = model.oscillators[cpl.target].dim;
      const int dim_s = model.oscillators[cpl.source].dim;
      VecR x0_t = x0.segment(off_t, dim_t);
      VecR x0_sd = E0.eval(phi, -cpl.delay).real().segment(off_s, dim_s);
      VecR v_t = x1.segment(off_t, dim_t);
      VecR v_sd = E1.eval(phi, -cpl.delay).real().segment(off_s, dim_s);
      out.segment(off_t, dim_t) += cpl.dg_target(x0_t, x0_sd, v_t);
      out.segment(off_t, dim_t) += cpl.dg_delayed(x0_t, x0_sd, v_sd);
    }
    return VecC(out.cast<Complex>());
  };
  FourierSeries sampled = collocate(fn, m, n, trunc, n_points);

  // Advection term exactly on the coefficients.
  FourierSeries advect = dphi_dot(e1, f1);
  return subtract(sampled, advect);
}

PhaseHistoryField h2_field(const PhaseHistoryField& E1,
                           const FourierSeries& f1) {
  return scale(dphi_dot(E1, f1), Complex(-1.0, 0.0));
}

TangentialSolution solve_tangential(const FourierSeries& eta,
                                    const FloquetFrame& frame,
                                    const std::vector<double>& omega, int K,
                                    double tol_res) {
  FourierSeries projected = multiply(frame.pi, eta, ProductRule::Matrix);
  FourierSeries zeta = multiply(frame.T_pinv, projected, ProductRule::Matrix);
  // drop roundoff dust inherited from the collocated frame entries
  zeta = zeta.pruned(1e-14 * std::max(zeta.max_abs(), 1e-300));

  const int m = zeta.rows();
  const double tol_abs = tol_res * max_abs_omega(omega);
  TangentialSolution sol{
      FourierSeries(zeta.torus_dim(), m, 1, zeta.trunc(), zeta.real_valued()),
      FourierSeries(zeta.torus_dim(), m, 1, zeta.trunc(), zeta.real_valued()),
      {}};
  for (const auto& [k, c] : zeta.modes()) {
    const bool resonant = is_resonant(k, omega, tol_res);
    const double divisor = dot(k, omega);
    if (resonant || l1_norm(k) > K) {
      sol.f.add_to_coeff(k, c);
      continue;
    }
    if (std::abs(divisor) <= 10.0 * tol_abs)
      sol.warnings.push_back({k, divisor});
    sol.g.add_to_coeff(k, c / Complex(0.0, divisor));
  }
  return sol;
}

FourierSeries solve_normal(const FourierSeries& eta, const FloquetFrame& frame,
                           const std::vector<double>& omega,
                           const Eigen::MatrixXd& L) {
  const int n = frame.state_dim;
  FourierSeries id_minus_pi = frame.pi;
  {
    FourierSeries identity(frame.pi.torus_dim(), n, n, frame.pi.trunc(), true);
    VecC eye = VecC::Zero(n * n);
    for (int i = 0; i < n; ++i) eye[i * n + i] = Complex(1.0, 0.0);
    identity.set_coeff(MultiIndex(frame.pi.torus_dim(), 0), eye);
    id_minus_pi = subtract(identity, frame.pi);
  }
  FourierSeries normal_part = multiply(id_minus_pi, eta, ProductRule::Matrix);
  FourierSeries rhs = multiply(frame.N_pinv, normal_part, ProductRule::Matrix);
  rhs = rhs.pruned(1e-14 * std::max(rhs.max_abs(), 1e-300));

  const int nm = rhs.rows();
  FourierSeries h(rhs.torus_dim(), nm, 1, rhs.trunc(), rhs.real_valued());
  Eigen::MatrixXcd Lc = L.cast<Complex>();
  for (const auto& [k, c] : rhs.modes()) {
    Eigen::MatrixXcd A =
        Complex(0.0, dot(k, omega)) * Eigen::MatrixXcd::Identity(nm, nm) - Lc;
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(A, Eigen::ComputeThinU |
                                                  Eigen::ComputeThinV);
    double cond = svd.singularValues()(0) /
                  svd.singularValues()(svd.singularValues().size() - 1);
    if (cond > 1e10)
      throw SolverError("solve_normal: shifted matrix nearly singular");
    h.set_coeff(k, svd.solve(VecC(c)));
  }
  return h;
}

FourierSeries assemble_e(const FourierSeries& g, const FourierSeries& h,
                         const FloquetFrame& frame) {
  FourierSeries tangential = multiply(frame.T, g, ProductRule::Matrix);
  FourierSeries normal = multiply(frame.N, h, ProductRule::Matrix);
  return add(tangential, normal);
}

PhaseHistoryField lift_history(const FourierSeries& e_l,
                               const FourierSeries& f_l,
                               const PhaseHistoryField& H_l,
                               const PhaseHistoryField& E0,
                               const std::vector<double>& omega,
                               double tol_res) {
  const double tau = E0.tau();

  // e_l(phi + s omega): mode k gains the frequency <k,omega> in s.
  PhaseHistoryField shifted(e_l.torus_dim(), e_l.dim_out(), tau,
                            e_l.real_valued());
  for (const auto& [k, c] : e_l.modes())
    shifted.add_term({k, 0, dot(k, omega), c});

  PhaseHistoryField f_integral =
      advected_integral(promote(f_l, tau), omega, tol_res);
  PhaseHistoryField advected = dphi_dot(E0, f_integral);

  PhaseHistoryField h_integral = advected_integral(H_l, omega, tol_res);

  return add(shifted, add(advected, scale(h_integral, Complex(-1.0, 0.0))))
      .canonicalized();
}

Expansion reduce(const ModelSpec& model, const FloquetFrame& frame,
                 const ReduceOptions& opts,
                 std::vector<NearResonance>* warnings) {
  if (opts.max_order < 0 || opts.max_order > 2)
    throw SolverError(
        "reduce: unsupported order (only orders 0..2 are implemented)");
  const auto omega = model.omega();
  const double tau = model.max_delay();

  OrderZero base = build_order0(model, opts.trunc);
  Expansion exp;
  exp.omega = omega;
  exp.f = {base.f0};
  exp.e = {base.e0};
  exp.E = {base.E0};

  for (int ell = 1; ell <= opts.max_order; ++ell) {
    FourierSeries eta_l =
        (ell == 1)
            ? eta1(model, exp.E[0], opts.trunc, opts.collocation_points)
            : eta2(model, exp.e[0], exp.e[1], exp.f[1], exp.E[0], exp.E[1],
                   opts.trunc, opts.collocation_points);
    PhaseHistoryField H_l =
        (ell == 1) ? PhaseHistoryField::zero(model.torus_dim(),
                                             model.state_dim(), tau)
                   : h2_field(exp.E[1], exp.f[1]);

    TangentialSolution tang =
        solve_tangential(eta_l, frame, omega, opts.trunc, opts.tol_res);
    if (warnings)
      warnings->insert(warnings->end(), tang.warnings.begin(),
                       tang.warnings.end());
    FourierSeries h = solve_normal(eta_l, frame, omega, frame.L);
    FourierSeries e_l = assemble_e(tang.g, h, frame);
    PhaseHistoryField E_l =
        lift_history(e_l, tang.f, H_l, exp.E[0], omega, opts.tol_res);
    // the transport lift raises the s-power at most once per order
    if (E_l.max_s_power() > ell)
      throw SolverError("reduce: lifted history exceeds the order-" +
                        std::to_string(ell) + " secular power bound");

    exp.f.push_back(tang.f);
    exp.e.push_back(e_l);
    exp.E.push_back(E_l);
  }
  return exp;
}

namespace {

// eps-sums of the expansion members.
FourierSeries eps_sum(const std::vector<FourierSeries>& parts, double eps) {
  FourierSeries acc = parts[0];
  double w = 1.0;
  for (std::size_t l = 1; l < parts.size(); ++l) {
    w *= eps;
    acc = add(acc, scale(parts[l], Complex(w, 0.0)));
  }
  return acc;
}

PhaseHistoryField eps_sum(const std::vector<PhaseHistoryField>& parts,
                          double eps) {
  PhaseHistoryField acc = parts[0];
  double w = 1.0;
  for (std::size_t l = 1; l < parts.size(); ++l) {
    w *= eps;
    acc = add(acc, scale(parts[l], Complex(w, 0.0)));
  }
  return acc;
}

}  // namespace

ConjugacyResidual conjugacy_residual(const Expansion& expansion,
                                     const ModelSpec& model, double eps,
                                     int lattice_n, int s_points) {
  const int m = model.torus_dim();
  const double tau = model.max_delay();
  FourierSeries e_eps = eps_sum(expansion.e, eps);
  FourierSeries f_eps = eps_sum(expansion.f, eps);
  PhaseHistoryField E_eps = eps_sum(expansion.E, eps);

  FourierSeries lhs_fin = dphi_dot(e_eps, f_eps);

  ConjugacyResidual res;
  for (const auto& phi : torus_lattice(m, lattice_n)) {
    VecR lhs = lhs_fin.eval(phi).real();
    VecR x = e_eps.eval(phi).real();
    VecR rhs = model.f_full(x);
    for (const auto& cpl : model.couplings) {
      const int off_t = model.block_offset(cpl.target);
      const int off_s = model.block_offset(cpl.source);
      const int dim_t = model.oscillators[cpl.target].dim;
      const int dim_s = model.oscillators[cpl.source].dim;
      VecR delayed = E_eps.eval(phi, -cpl.delay).real().segment(off_s, dim_s);
      rhs.segment(off_t, dim_t) +=
          eps * cpl.g(x.segment(off_t, dim_t), delayed);
    }
    res.r_fin = std::max(res.r_fin, (lhs - rhs).cwiseAbs().maxCoeff());
  }

  PhaseHistoryField lhs_tr = dphi_dot(E_eps, f_eps);
  PhaseHistoryField ds = E_eps.d_ds();
  for (const auto& phi : torus_lattice(m, lattice_n)) {
    for (int i = 0; i < s_points; ++i) {
      double s = s_points > 1 ? -tau * double(i) / (s_points - 1) : 0.0;
      VecR diff = (lhs_tr.eval(phi, s) - ds.eval(phi, s)).real();
      res.r_tr = std::max(res.r_tr, diff.cwiseAbs().maxCoeff());
    }
  }
  return res;
}

double homological_residual(const ModelSpec& model, const FourierSeries& e0,
                            const FourierSeries& e_l, const FourierSeries& f_l,
                            const FourierSeries& eta_l, int lattice_n) {
  const auto omega = model.omega();
  FourierSeries de = directional_derivative_omega(e_l, omega);
  FourierSeries Tf = dphi_dot(e0, f_l);
  double worst = 0.0;
  for (const auto& phi : torus_lattice(model.torus_dim(), lattice_n)) {
    VecR x0 = e0.eval(phi).real();
    VecR lhs = de.eval(phi).real() -
               model.df_full(x0, e_l.eval(phi).real()) + Tf.eval(phi).real();
    VecR rhs = eta_l.eval(phi).real();
    worst = std::max(worst, (lhs - rhs).cwiseAbs().maxCoeff());
  }
  return worst;
}

double transport_fd_residual(const PhaseHistoryField& E_l,
                             const PhaseHistoryField& E0,
                             const FourierSeries& f_l,
                             const PhaseHistoryField& H_l,
                             const std::vector<double>& omega,
                             int lattice_n, int s_points, double fd_step) {
  const int m = E_l.torus_dim();
  const double tau = E_l.tau();
  PhaseHistoryField dE0_f = dphi_dot(E0, f_l);
  double worst = 0.0;
  const double h = fd_step;
  for (const auto& phi : torus_lattice(m, lattice_n)) {
    for (int i = 0; i < s_points; ++i) {
      // keep the s stencil inside [-tau, 0]
      double s = -tau * (0.5 + double(i)) / (s_points + 1);
      std::vector<double> phi_p(phi), phi_m(phi);
      for (int j = 0; j < m; ++j) {
        phi_p[j] += h * omega[j];
        phi_m[j] -= h * omega[j];
      }
      VecR d_omega =
          (E_l.eval(phi_p, s) - E_l.eval(phi_m, s)).real() / (2.0 * h);
      VecR d_s = (E_l.eval(phi, s + h) - E_l.eval(phi, s - h)).real() /
                 (2.0 * h);
      VecR residual = d_omega - d_s + dE0_f.eval(phi, s).real() -
                      H_l.eval(phi, s).real();
      worst = std::max(worst, residual.cwiseAbs().maxCoeff());
    }
  }
  return worst;
}

}  // namespace phasered
