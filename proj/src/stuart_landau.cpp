#include "phasered/stuart_landau.hpp"

#include <cmath>

namespace phasered::sl {

namespace {

Complex to_c(const VecR& v) { return Complex(v[0], v[1]); }

VecR to_r(Complex z) {
  VecR v(2);
  v << z.real(), z.imag();
  return v;
}

// Deposits the real function Re(A e^{i<k,phi>}) into a single entry:
// cos(<k,phi>+c) arrives as A = e^{ic}, sin(<k,phi>+c) as A = -i e^{ic}.
void deposit_real(FourierSeries& target, int row, int col,
                  const MultiIndex& k, Complex A) {
  const int cols = target.cols();
  const int d = target.dim_out();
  auto put = [&](const MultiIndex& kk, Complex value) {
    VecC c = VecC::Zero(d);
    c[row * cols + col] = value;
    target.add_to_coeff(kk, c);
  };
  put(k, 0.5 * A);
  put(negated(k), 0.5 * std::conj(A));
}

// Deposits the complex scalar function A e^{i<k,phi>} into the (Re, Im)
// entry pair of a real-valued series; rows index a matrix stored row-major.
void deposit(FourierSeries& target, int row_re, int row_im, int col,
             const MultiIndex& k, Complex A) {
  const int cols = target.cols();
  const int d = target.dim_out();
  auto put = [&](const MultiIndex& kk, int row, Complex value) {
    VecC c = VecC::Zero(d);
    c[row * cols + col] = value;
    target.add_to_coeff(kk, c);
  };
  const MultiIndex nk = negated(k);
  put(k, row_re, 0.5 * A);
  put(nk, row_re, 0.5 * std::conj(A));
  put(k, row_im, A / Complex(0.0, 2.0));
  put(nk, row_im, -std::conj(A) / Complex(0.0, 2.0));
}

// Same for a history term A e^{i<k,phi>} s^p e^{iqs}.
void deposit_history(PhaseHistoryField& target, int row_re, int row_im,
                     const MultiIndex& k, int p, double q, Complex A) {
  const int d = target.dim_out();
  auto put = [&](const MultiIndex& kk, int row, double qq, Complex value) {
    VecC c = VecC::Zero(d);
    c[row] = value;
    target.add_term({kk, p, qq, c});
  };
  const MultiIndex nk = negated(k);
  put(k, row_re, q, 0.5 * A);
  put(nk, row_re, -q, 0.5 * std::conj(A));
  put(k, row_im, q, A / Complex(0.0, 2.0));
  put(nk, row_im, -q, -std::conj(A) / Complex(0.0, 2.0));
}

void require_delta_zero(const SLParams& p, const char* what) {
  if (p.delta != 0.0)
    throw std::invalid_argument(std::string(what) +
                                " requires delta == 0");
}

}  // namespace

void SLParams::validate() const {
  if (gamma == 0.0) throw std::invalid_argument("SLParams: gamma must be nonzero");
  if (-alpha / gamma <= 0.0)
    throw std::invalid_argument("SLParams: -alpha/gamma must be positive");
  if (beta - alpha * delta / gamma == 0.0)
    throw std::invalid_argument("SLParams: Omega must be nonzero");
  if (eps < 0.0) throw std::invalid_argument("SLParams: eps must be >= 0");
  if (tau < 0.0) throw std::invalid_argument("SLParams: tau must be >= 0");
}

OrbitData orbit(const SLParams& p) {
  p.validate();
  return {std::sqrt(-p.alpha / p.gamma), p.beta - p.alpha * p.delta / p.gamma};
}

ModelSpec make_model(const SLParams& p) {
  const OrbitData orb = orbit(p);
  const Complex lin(p.alpha, p.beta);
  const Complex cub(p.gamma, p.delta);
  const Complex rot = std::polar(1.0, p.rho);

  Oscillator osc;
  osc.dim = 2;
  osc.omega = orb.Omega;
  osc.orbit = FourierSeries(1, 2, 1, 1, true);
  {
    VecC plus(2), minus(2);
    plus << Complex(orb.R / 2, 0.0), Complex(0.0, -orb.R / 2);
    minus << Complex(orb.R / 2, 0.0), Complex(0.0, orb.R / 2);
    osc.orbit.set_coeff({1}, plus);
    osc.orbit.set_coeff({-1}, minus);
  }
  osc.f = [lin, cub](const VecR& x) {
    Complex z = to_c(x);
    return to_r(lin * z + cub * std::norm(z) * z);
  };
  osc.df = [lin, cub](const VecR& x, const VecR& v) {
    Complex z = to_c(x), w = to_c(v);
    return to_r(lin * w + cub * (2.0 * std::norm(z) * w + z * z * std::conj(w)));
  };
  osc.d2f = [cub](const VecR& x, const VecR& v, const VecR& w) {
    Complex z = to_c(x), a = to_c(v), b = to_c(w);
    return to_r(cub * (2.0 * std::conj(z) * a * b +
                       2.0 * z * (a * std::conj(b) + std::conj(a) * b)));
  };

  ModelSpec model;
  model.oscillators = {osc, osc};
  for (int target = 0; target < 2; ++target) {
    Coupling cpl;
    cpl.target = target;
    cpl.source = 1 - target;
    cpl.delay = p.tau;
    cpl.g = [rot](const VecR& xt, const VecR& xs) {
      return to_r(rot * (to_c(xs) - to_c(xt)));
    };
    cpl.dg_target = [rot](const VecR&, const VecR&, const VecR& v) {
      return to_r(-rot * to_c(v));
    };
    cpl.dg_delayed = [rot](const VecR&, const VecR&, const VecR& w) {
      return to_r(rot * to_c(w));
    };
    model.couplings.push_back(std::move(cpl));
  }
  return model;
}

FloquetFrame frame(const SLParams& p, int trunc) {
  const OrbitData orb = orbit(p);
  FourierSeries T(2, 4, 2, trunc, true);
  FourierSeries N(2, 4, 2, trunc, true);
  const Complex normal_dir(p.gamma, p.delta);
  for (int j = 0; j < 2; ++j) {
    MultiIndex k(2, 0);
    k[j] = 1;
    // column j acts on block j only
    deposit(T, 2 * j, 2 * j + 1, j, k, Complex(0.0, orb.R));
    deposit(N, 2 * j, 2 * j + 1, j, k, normal_dir);
  }
  Eigen::MatrixXd L = -2.0 * p.alpha * Eigen::MatrixXd::Identity(2, 2);
  return make_frame(T, N, L, trunc);
}

FourierSeries f1_closed(const SLParams& p) {
  const OrbitData orb = orbit(p);
  const double shift = p.rho - orb.Omega * p.tau;
  FourierSeries f(2, 2, 1, 8, true);
  for (int comp = 0; comp < 2; ++comp) {
    MultiIndex k(2, 0);
    k[comp] = -1;
    k[1 - comp] = 1;
    // -(delta/gamma) [cos(D) - cos(rho)] + [sin(D) - sin(rho)],
    // D = phi_other - phi_self - Omega tau + rho
    const double dg = p.delta / p.gamma;
    deposit_real(f, comp, 0, k, -dg * std::polar(1.0, shift));
    deposit_real(f, comp, 0, k, Complex(0.0, -1.0) * std::polar(1.0, shift));
    VecC c0 = VecC::Zero(2);
    c0[comp] = Complex(dg * std::cos(p.rho) - std::sin(p.rho), 0.0);
    f.add_to_coeff(MultiIndex(2, 0), c0);
  }
  return f.pruned(0.0);
}

FourierSeries f2_closed(const SLParams& p) {
  require_delta_zero(p, "f2_closed");
  const OrbitData orb = orbit(p);
  const double shift2 = 2.0 * (p.rho - orb.Omega * p.tau);
  const double a4 = 1.0 / (4.0 * p.alpha);
  const double c_const = (a4 - p.tau / 2.0) * std::sin(shift2);
  const double c_cos1 = p.tau * std::sin(p.rho);
  const double c_sin2 = (a4 + p.tau / 2.0) * std::cos(shift2) - a4;
  const double c_cos2 = -(a4 + p.tau / 2.0) * std::sin(shift2);

  FourierSeries f(2, 2, 1, 8, true);
  const double shift = p.rho - orb.Omega * p.tau;
  for (int comp = 0; comp < 2; ++comp) {
    MultiIndex k1(2, 0), k2(2, 0);
    k1[comp] = -1;
    k1[1 - comp] = 1;
    k2[comp] = -2;
    k2[1 - comp] = 2;
    VecC c0 = VecC::Zero(2);
    c0[comp] = Complex(c_const, 0.0);
    f.add_to_coeff(MultiIndex(2, 0), c0);
    deposit_real(f, comp, 0, k1, c_cos1 * std::polar(1.0, shift));
    deposit_real(f, comp, 0, k2,
                 c_sin2 * Complex(0.0, -1.0) * std::polar(1.0, shift2));
    deposit_real(f, comp, 0, k2, c_cos2 * std::polar(1.0, shift2));
  }
  return f.pruned(0.0);
}

FourierSeries e1_closed(const SLParams& p) {
  require_delta_zero(p, "e1_closed");
  const OrbitData orb = orbit(p);
  const double shift = p.rho - orb.Omega * p.tau;
  const double amp = orb.R / (2.0 * p.alpha);
  FourierSeries e(2, 4, 1, 8, true);
  for (int comp = 0; comp < 2; ++comp) {
    const int row_re = 2 * comp, row_im = 2 * comp + 1;
    // e^{i phi_self} cos(D): modes (0,1)/(2,-1) style
    MultiIndex k_plus(2, 0), k_minus(2, 0), k_self(2, 0);
    k_plus[1 - comp] = 1;                       // phi_self + D
    k_minus[comp] = 2;
    k_minus[1 - comp] = -1;                     // phi_self - D
    k_self[comp] = 1;
    deposit(e, row_re, row_im, 0, k_plus, 0.5 * amp * std::polar(1.0, shift));
    deposit(e, row_re, row_im, 0, k_minus, 0.5 * amp * std::polar(1.0, -shift));
    deposit(e, row_re, row_im, 0, k_self, -amp * std::cos(p.rho));
  }
  return e.pruned(0.0);
}

PhaseHistoryField E1_closed(const SLParams& p) {
  require_delta_zero(p, "E1_closed");
  const OrbitData orb = orbit(p);
  const double shift = p.rho - orb.Omega * p.tau;
  const double amp = orb.R / (2.0 * p.alpha);
  PhaseHistoryField E(2, 4, p.tau, true);
  for (int comp = 0; comp < 2; ++comp) {
    const int row_re = 2 * comp, row_im = 2 * comp + 1;
    MultiIndex k_plus(2, 0), k_minus(2, 0), k_self(2, 0);
    k_plus[1 - comp] = 1;
    k_minus[comp] = 2;
    k_minus[1 - comp] = -1;
    k_self[comp] = 1;
    // radial part: R/(2 alpha) e^{i(phi_self + Omega s)} [cos(D) - cos(rho)]
    deposit_history(E, row_re, row_im, k_plus, 0, orb.Omega,
                    0.5 * amp * std::polar(1.0, shift));
    deposit_history(E, row_re, row_im, k_minus, 0, orb.Omega,
                    0.5 * amp * std::polar(1.0, -shift));
    deposit_history(E, row_re, row_im, k_self, 0, orb.Omega,
                    -amp * std::cos(p.rho));
    // secular part: R i s e^{i(phi_self + Omega s)} [sin(D) - sin(rho)]
    deposit_history(E, row_re, row_im, k_plus, 1, orb.Omega,
                    orb.R * Complex(0.0, 1.0) * std::polar(1.0, shift) /
                        Complex(0.0, 2.0));
    deposit_history(E, row_re, row_im, k_minus, 1, orb.Omega,
                    -orb.R * Complex(0.0, 1.0) * std::polar(1.0, -shift) /
                        Complex(0.0, 2.0));
    deposit_history(E, row_re, row_im, k_self, 1, orb.Omega,
                    -orb.R * Complex(0.0, 1.0) * std::sin(p.rho));
  }
  return E.canonicalized();
}

double psi_rhs(const SLParams& p, int order, double psi) {
  if (order != 1 && order != 2)
    throw std::invalid_argument("psi_rhs: order must be 1 or 2");
  const OrbitData orb = orbit(p);
  const double shift = p.rho - orb.Omega * p.tau;
  const double first =
      -2.0 * p.eps *
      (std::cos(shift) + (p.delta / p.gamma) * std::sin(shift)) *
      std::sin(psi);
  if (order == 1) return first;
  require_delta_zero(p, "psi_rhs order 2");
  const double second =
      p.eps * p.eps *
      (2.0 * p.tau * std::sin(p.rho) * std::sin(shift) * std::sin(psi) -
       (p.tau + std::pow(std::sin(shift), 2) / p.alpha) * std::sin(2.0 * psi));
  return first + second;
}

PsiTrajectory integrate_reduced(const SLParams& p, int order, double psi0,
                                double t_end, double step) {
  if (step <= 0.0) throw std::invalid_argument("integrate_reduced: step <= 0");
  PsiTrajectory traj;
  double t = 0.0, psi = psi0;
  traj.times.push_back(t);
  traj.psi.push_back(psi);
  auto rhs = [&](double x) { return psi_rhs(p, order, x); };
  while (t < t_end - 1e-12) {
    double h = std::min(step, t_end - t);
    double k1 = rhs(psi);
    double k2 = rhs(psi + 0.5 * h * k1);
    double k3 = rhs(psi + 0.5 * h * k2);
    double k4 = rhs(psi + h * k3);
    psi += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    t += h;
    traj.times.push_back(t);
    traj.psi.push_back(psi);
  }
  return traj;
}

std::vector<PsiEquilibrium> reduced_equilibria(const SLParams& p, int order,
                                               int scan_points,
                                               double bisect_tol) {
  auto rhs = [&](double x) { return psi_rhs(p, order, x); };
  std::vector<PsiEquilibrium> out;
  const double two_pi = 2.0 * M_PI;
  auto add_root = [&](double root) {
    root = std::fmod(root + two_pi, two_pi);
    for (const auto& e : out)
      if (std::abs(e.psi - root) < 1e-8 ||
          std::abs(std::abs(e.psi - root) - two_pi) < 1e-8)
        return;
    PsiEquilibrium eq;
    eq.psi = root;
    const double h = 1e-6;
    eq.derivative = (rhs(root + h) - rhs(root - h)) / (2.0 * h);
    if (eq.derivative < -1e-12)
      eq.stability = Stability::Stable;
    else if (eq.derivative > 1e-12)
      eq.stability = Stability::Unstable;
    else
      eq.stability = Stability::Marginal;
    out.push_back(eq);
  };

  double prev_x = 0.0, prev_v = rhs(0.0);
  if (prev_v == 0.0) add_root(0.0);
  for (int i = 1; i <= scan_points; ++i) {
    double x = two_pi * double(i) / scan_points;
    double v = rhs(x);
    if (v == 0.0) {
      add_root(x);
    } else if (prev_v != 0.0 && ((prev_v < 0.0) != (v < 0.0))) {
      double lo = prev_x, hi = x, flo = prev_v;
      while (hi - lo > bisect_tol) {
        double mid = 0.5 * (lo + hi);
        double fm = rhs(mid);
        if (fm == 0.0) {
          lo = hi = mid;
          break;
        }
        if ((flo < 0.0) != (fm < 0.0))
          hi = mid;
        else {
          lo = mid;
          flo = fm;
        }
      }
      add_root(0.5 * (lo + hi));
    }
    prev_x = x;
    prev_v = v;
  }
  std::sort(out.begin(), out.end(),
            [](const PsiEquilibrium& a, const PsiEquilibrium& b) {
              return a.psi < b.psi;
            });
  return out;
}

Expansion reduce(const SLParams& p, int max_order, int trunc,
                 std::vector<NearResonance>* warnings) {
  ModelSpec model = make_model(p);
  FloquetFrame fr = frame(p, trunc);
  ReduceOptions opts;
  opts.max_order = max_order;
  opts.trunc = trunc;
  return phasered::reduce(model, fr, opts, warnings);
}

}  // namespace phasered::sl
