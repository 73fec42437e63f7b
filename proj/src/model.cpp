#include "phasered/model.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <cmath>

namespace phasered {

int ModelSpec::state_dim() const {
  int n = 0;
  for (const auto& osc : oscillators) n += osc.dim;
  return n;
}

int ModelSpec::block_offset(int j) const {
  int off = 0;
  for (int i = 0; i < j; ++i) off += oscillators[i].dim;
  return off;
}

double ModelSpec::max_delay() const {
  double tau = 0.0;
  for (const auto& c : couplings) tau = std::max(tau, c.delay);
  return tau;
}

std::vector<double> ModelSpec::omega() const {
  std::vector<double> w;
  w.reserve(oscillators.size());
  for (const auto& osc : oscillators) w.push_back(osc.omega);
  return w;
}

VecR ModelSpec::f_full(const VecR& x) const {
  VecR out(state_dim());
  int off = 0;
  for (const auto& osc : oscillators) {
    out.segment(off, osc.dim) = osc.f(x.segment(off, osc.dim));
    off += osc.dim;
  }
  return out;
}

VecR ModelSpec::df_full(const VecR& x, const VecR& v) const {
  VecR out(state_dim());
  int off = 0;
  for (const auto& osc : oscillators) {
    out.segment(off, osc.dim) =
        osc.df(x.segment(off, osc.dim), v.segment(off, osc.dim));
    off += osc.dim;
  }
  return out;
}

VecR ModelSpec::d2f_full(const VecR& x, const VecR& v, const VecR& w) const {
  VecR out(state_dim());
  int off = 0;
  for (const auto& osc : oscillators) {
    out.segment(off, osc.dim) =
        osc.d2f(x.segment(off, osc.dim), v.segment(off, osc.dim),
                w.segment(off, osc.dim));
    off += osc.dim;
  }
  return out;
}

double ModelSpec::orbit_residual(int lattice_n) const {
  double worst = 0.0;
  for (const auto& osc : oscillators) {
    FourierSeries dG = directional_derivative_omega(osc.orbit, {1.0});
    for (int i = 0; i < lattice_n; ++i) {
      std::vector<double> theta{2.0 * M_PI * i / lattice_n};
      VecR lhs = osc.omega * dG.eval(theta).real();
      VecR rhs = osc.f(osc.orbit.eval(theta).real());
      worst = std::max(worst, (lhs - rhs).cwiseAbs().maxCoeff());
    }
  }
  return worst;
}

namespace {

using RowMajorR =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

RowMajorR eval_matrix(const FourierSeries& s, const std::vector<double>& phi) {
  VecC flat = s.eval(phi);
  RowMajorR out(s.rows(), s.cols());
  for (int i = 0; i < s.rows(); ++i)
    for (int j = 0; j < s.cols(); ++j)
      out(i, j) = flat[i * s.cols() + j].real();
  return out;
}

VecC flatten(const Eigen::MatrixXd& mm) {
  VecC out(mm.rows() * mm.cols());
  for (int i = 0; i < mm.rows(); ++i)
    for (int j = 0; j < mm.cols(); ++j)
      out[i * mm.cols() + j] = Complex(mm(i, j), 0.0);
  return out;
}

}  // namespace

FloquetFrame make_frame(const FourierSeries& T, const FourierSeries& N,
                        const Eigen::MatrixXd& L, int K, double cond_limit,
                        double hyperbolicity_tol, FrameDiagnostics* diag) {
  const int n = T.rows();
  const int m = T.cols();
  if (N.rows() != n || N.cols() != n - m)
    throw std::invalid_argument("make_frame: N shape must be n x (n-m)");
  if (L.rows() != n - m || L.cols() != n - m)
    throw std::invalid_argument("make_frame: L shape must be (n-m) x (n-m)");

  Eigen::EigenSolver<Eigen::MatrixXd> es(L);
  double min_re = es.eigenvalues().real().cwiseAbs().minCoeff();
  if (min_re < hyperbolicity_tol)
    throw SolverError("make_frame: L is not hyperbolic");

  const int torus_dim = T.torus_dim();
  const int n_pts = 2 * K + 1;
  auto lattice = torus_lattice(torus_dim, n_pts);

  std::vector<VecC> pi_vals, tp_vals, np_vals;
  pi_vals.reserve(lattice.size());
  tp_vals.reserve(lattice.size());
  np_vals.reserve(lattice.size());
  double worst_cond = 0.0;
  for (const auto& phi : lattice) {
    Eigen::MatrixXd M(n, n);
    M.leftCols(m) = eval_matrix(T, phi);
    M.rightCols(n - m) = eval_matrix(N, phi);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(M, Eigen::ComputeThinU |
                                                 Eigen::ComputeThinV);
    double cond = svd.singularValues()(0) /
                  svd.singularValues()(svd.singularValues().size() - 1);
    worst_cond = std::max(worst_cond, cond);
    if (cond > cond_limit)
      throw SolverError("make_frame: [T|N] ill-conditioned; frames not transverse");
    Eigen::MatrixXd Minv = M.inverse();
    Eigen::MatrixXd sel = Eigen::MatrixXd::Zero(n, n);
    sel.topLeftCorner(m, m).setIdentity();
    pi_vals.push_back(flatten(M * sel * Minv));
    tp_vals.push_back(flatten(Minv.topRows(m)));
    np_vals.push_back(flatten(Minv.bottomRows(n - m)));
  }

  auto to_series = [&](const std::vector<VecC>& vals, int rows, int cols) {
    GridSamples g{torus_dim, rows * cols, n_pts, vals};
    FourierSeries flat = collocation_transform(g, K);
    FourierSeries shaped(torus_dim, rows, cols, K, true);
    for (const auto& [k, c] : flat.modes()) shaped.set_coeff(k, c);
    return shaped;
  };

  FloquetFrame frame;
  frame.torus_dim = torus_dim;
  frame.state_dim = n;
  frame.T = T;
  frame.N = N;
  frame.L = L;
  frame.pi = to_series(pi_vals, n, n);
  frame.T_pinv = to_series(tp_vals, m, n);
  frame.N_pinv = to_series(np_vals, n - m, n);

  if (diag) {
    diag->max_condition = worst_cond;
    diag->min_abs_real_eig = min_re;
    diag->pinv_identity_defect = pinv_identity_defect(frame);
  }
  return frame;
}

double frame_pde_residual(const FloquetFrame& frame, const ModelSpec& model,
                          const FourierSeries& e0, int lattice_n) {
  const auto omega = model.omega();
  FourierSeries dN = directional_derivative_omega(frame.N, omega);
  const int n = frame.state_dim;
  const int nm = n - frame.torus_dim;
  double worst = 0.0;
  for (const auto& phi : torus_lattice(frame.torus_dim, lattice_n)) {
    Eigen::MatrixXd dNv = eval_matrix(dN, phi);
    Eigen::MatrixXd Nv = eval_matrix(frame.N, phi);
    VecR x = e0.eval(phi).real();
    Eigen::MatrixXd FpN(n, nm);
    for (int c = 0; c < nm; ++c) FpN.col(c) = model.df_full(x, Nv.col(c));
    double r = (dNv + Nv * frame.L - FpN).cwiseAbs().maxCoeff();
    worst = std::max(worst, r);
  }
  return worst;
}

double pinv_identity_defect(const FloquetFrame& frame) {
  const int m = frame.torus_dim;
  const int nm = frame.state_dim - m;
  auto defect = [](const FourierSeries& prod, const Eigen::MatrixXd& target) {
    double d = 0.0;
    FourierSeries diff = prod;
    MultiIndex k0(prod.torus_dim(), 0);
    VecC c0 = prod.coeff(k0);
    VecC tflat(target.rows() * target.cols());
    for (int i = 0; i < target.rows(); ++i)
      for (int j = 0; j < target.cols(); ++j)
        tflat[i * target.cols() + j] = Complex(target(i, j), 0.0);
    diff.set_coeff(k0, c0 - tflat);
    for (const auto& [k, c] : diff.modes())
      d = std::max(d, c.cwiseAbs().maxCoeff());
    return d;
  };
  double worst = 0.0;
  worst = std::max(worst, defect(multiply(frame.T_pinv, frame.T,
                                          ProductRule::Matrix),
                                 Eigen::MatrixXd::Identity(m, m)));
  worst = std::max(worst, defect(multiply(frame.T_pinv, frame.N,
                                          ProductRule::Matrix),
                                 Eigen::MatrixXd::Zero(m, nm)));
  worst = std::max(worst, defect(multiply(frame.N_pinv, frame.N,
                                          ProductRule::Matrix),
                                 Eigen::MatrixXd::Identity(nm, nm)));
  worst = std::max(worst, defect(multiply(frame.N_pinv, frame.T,
                                          ProductRule::Matrix),
                                 Eigen::MatrixXd::Zero(nm, m)));
  return worst;
}

}  // namespace phasered
