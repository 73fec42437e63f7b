#include "phasered/history.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <tuple>

namespace phasered {

namespace {

double max_abs_omega(const std::vector<double>& omega) {
  double m = 0.0;
  for (double w : omega) m = std::max(m, std::abs(w));
  return std::max(m, 1e-300);
}

}  // namespace

PhaseHistoryField::PhaseHistoryField(int torus_dim, int dim_out, double tau,
                                     bool real_valued)
    : torus_dim_(torus_dim),
      dim_out_(dim_out),
      tau_(tau),
      real_valued_(real_valued) {
  if (torus_dim < 1 || dim_out < 1)
    throw std::invalid_argument("history field: bad dimensions");
  if (tau < 0.0) throw std::invalid_argument("history field: tau < 0");
}

PhaseHistoryField PhaseHistoryField::zero(int torus_dim, int dim_out,
                                          double tau) {
  return PhaseHistoryField(torus_dim, dim_out, tau, true);
}

int PhaseHistoryField::max_s_power() const {
  int p = 0;
  for (const auto& t : terms_) p = std::max(p, t.s_power);
  return p;
}

void PhaseHistoryField::add_term(HistoryTerm t) {
  if (static_cast<int>(t.k.size()) != torus_dim_)
    throw std::invalid_argument("history term: wavevector length");
  if (static_cast<int>(t.coeff.size()) != dim_out_)
    throw std::invalid_argument("history term: coefficient length");
  if (t.s_power < 0) throw std::invalid_argument("history term: p < 0");
  if (t.coeff.isZero(0.0)) return;
  terms_.push_back(std::move(t));
}

VecC PhaseHistoryField::eval(const std::vector<double>& phi, double s) const {
  if (static_cast<int>(phi.size()) != torus_dim_)
    throw std::invalid_argument("history eval: phi length");
  if (s > 1e-12 || s < -tau_ - 1e-12)
    throw std::domain_error("history eval: s outside [-tau, 0]");
  VecC out = VecC::Zero(dim_out_);
  for (const auto& t : terms_) {
    double arg = t.s_freq * s;
    for (int j = 0; j < torus_dim_; ++j) arg += t.k[j] * phi[j];
    out += t.coeff * (std::pow(s, t.s_power) * std::polar(1.0, arg));
  }
  return out;
}

VecR PhaseHistoryField::eval_real(const std::vector<double>& phi,
                                  double s) const {
  if (!real_valued_)
    throw std::logic_error("eval_real on a field without the real flag");
  return eval(phi, s).real();
}

FourierSeries PhaseHistoryField::boundary_trace() const {
  int K = 0;
  for (const auto& t : terms_) K = std::max(K, l1_norm(t.k));
  FourierSeries out(torus_dim_, dim_out_, 1, K, real_valued_);
  for (const auto& t : terms_)
    if (t.s_power == 0) out.add_to_coeff(t.k, t.coeff);
  FourierSeries pruned = out.pruned(0.0);
  pruned.set_real_valued(real_valued_);
  return pruned;
}

PhaseHistoryField PhaseHistoryField::d_ds() const {
  PhaseHistoryField out(torus_dim_, dim_out_, tau_, real_valued_);
  for (const auto& t : terms_) {
    if (t.s_power > 0) {
      HistoryTerm lower{t.k, t.s_power - 1, t.s_freq,
                        double(t.s_power) * t.coeff};
      out.add_term(std::move(lower));
    }
    if (t.s_freq != 0.0) {
      HistoryTerm osc{t.k, t.s_power, t.s_freq,
                      Complex(0.0, t.s_freq) * t.coeff};
      out.add_term(std::move(osc));
    }
  }
  return out.canonicalized();
}

PhaseHistoryField PhaseHistoryField::canonicalized(double drop_tol) const {
  // Merge keys quantize q; straddling terms stay separate, which only costs
  // a slightly longer term list.
  const double q_quant = 1e-9;
  std::map<std::tuple<MultiIndex, int, long long>, HistoryTerm> merged;
  for (const auto& t : terms_) {
    auto key = std::make_tuple(t.k, t.s_power,
                               static_cast<long long>(std::llround(t.s_freq / q_quant)));
    auto it = merged.find(key);
    if (it == merged.end())
      merged.emplace(key, t);
    else
      it->second.coeff += t.coeff;
  }
  double scale_ref = 0.0;
  for (const auto& [key, t] : merged)
    scale_ref = std::max(scale_ref, t.coeff.cwiseAbs().maxCoeff());
  PhaseHistoryField out(torus_dim_, dim_out_, tau_, real_valued_);
  for (const auto& [key, t] : merged)
    if (t.coeff.cwiseAbs().maxCoeff() > drop_tol * std::max(scale_ref, 1e-300))
      out.terms_.push_back(t);
  return out;
}

double PhaseHistoryField::max_abs() const {
  double m = 0.0;
  for (const auto& t : terms_)
    m = std::max(m, t.coeff.cwiseAbs().maxCoeff());
  return m;
}

double PhaseHistoryField::reality_defect() const {
  double d = 0.0;
  for (const auto& t : terms_) {
    VecC mirror = VecC::Zero(dim_out_);
    for (const auto& u : terms_) {
      if (u.s_power != t.s_power) continue;
      if (std::abs(u.s_freq + t.s_freq) > 1e-9) continue;
      if (u.k != negated(t.k)) continue;
      mirror += u.coeff;
    }
    d = std::max(d, (mirror - t.coeff.conjugate()).cwiseAbs().maxCoeff());
  }
  return d;
}

PhaseHistoryField add(const PhaseHistoryField& a, const PhaseHistoryField& b) {
  if (a.torus_dim() != b.torus_dim() || a.dim_out() != b.dim_out())
    throw std::invalid_argument("history add: dimension mismatch");
  PhaseHistoryField out(a.torus_dim(), a.dim_out(),
                        std::max(a.tau(), b.tau()),
                        a.real_valued() && b.real_valued());
  for (const auto& t : a.terms()) out.add_term(t);
  for (const auto& t : b.terms()) out.add_term(t);
  return out.canonicalized();
}

PhaseHistoryField scale(const PhaseHistoryField& a, Complex factor) {
  PhaseHistoryField out(a.torus_dim(), a.dim_out(), a.tau(),
                        a.real_valued() && factor.imag() == 0.0);
  if (factor == Complex(0.0, 0.0)) return out;
  for (const auto& t : a.terms())
    out.add_term({t.k, t.s_power, t.s_freq, factor * t.coeff});
  return out;
}

PhaseHistoryField promote(const FourierSeries& f, double tau) {
  if (f.cols() != 1)
    throw std::invalid_argument("promote: vector series expected");
  PhaseHistoryField out(f.torus_dim(), f.dim_out(), tau, f.real_valued());
  for (const auto& [k, c] : f.modes()) out.add_term({k, 0, 0.0, c});
  return out;
}

PhaseHistoryField dphi_dot(const PhaseHistoryField& a,
                           const PhaseHistoryField& b) {
  if (b.torus_dim() != a.torus_dim() || b.dim_out() != a.torus_dim())
    throw std::invalid_argument("history dphi_dot: b must be an m-vector");
  PhaseHistoryField out(a.torus_dim(), a.dim_out(),
                        std::max(a.tau(), b.tau()),
                        a.real_valued() && b.real_valued());
  const int m = a.torus_dim();
  for (const auto& ta : a.terms()) {
    for (const auto& tb : b.terms()) {
      Complex factor(0.0, 0.0);
      for (int j = 0; j < m; ++j)
        factor += Complex(0.0, double(ta.k[j])) * tb.coeff[j];
      if (factor == Complex(0.0, 0.0)) continue;
      MultiIndex k(m);
      for (int j = 0; j < m; ++j) k[j] = ta.k[j] + tb.k[j];
      out.add_term({std::move(k), ta.s_power + tb.s_power,
                    ta.s_freq + tb.s_freq, factor * ta.coeff});
    }
  }
  return out.canonicalized();
}

PhaseHistoryField dphi_dot(const PhaseHistoryField& a, const FourierSeries& f) {
  return dphi_dot(a, promote(f, a.tau()));
}

PhaseHistoryField dphi_dot_const(const PhaseHistoryField& a,
                                 const std::vector<double>& v) {
  if (static_cast<int>(v.size()) != a.torus_dim())
    throw std::invalid_argument("dphi_dot_const: direction length");
  PhaseHistoryField out(a.torus_dim(), a.dim_out(), a.tau(), a.real_valued());
  for (const auto& t : a.terms()) {
    Complex factor(0.0, dot(t.k, v));
    if (factor == Complex(0.0, 0.0)) continue;
    out.add_term({t.k, t.s_power, t.s_freq, factor * t.coeff});
  }
  return out;
}

PhaseHistoryField advected_integral(const PhaseHistoryField& h,
                                    const std::vector<double>& omega,
                                    double tol_res) {
  if (static_cast<int>(omega.size()) != h.torus_dim())
    throw std::invalid_argument("advected_integral: omega length");
  const double tol_abs = tol_res * max_abs_omega(omega);
  PhaseHistoryField out(h.torus_dim(), h.dim_out(), h.tau(),
                        h.real_valued());
  for (const auto& t : h.terms()) {
    const double a = dot(t.k, omega);
    const double b = t.s_freq - a;
    const int p = t.s_power;
    if (std::abs(b) <= tol_abs) {
      // int_0^s zeta^p dzeta = s^{p+1}/(p+1), phase exp(i a s) throughout.
      out.add_term({t.k, p + 1, a, t.coeff / double(p + 1)});
      continue;
    }
    // int_0^s zeta^p e^{ib zeta} dzeta
    //   = e^{ibs} sum_r (-1)^r p!/(p-r)! s^{p-r} / (ib)^{r+1}
    //     - (-1)^p p! / (ib)^{p+1},
    // multiplied by the advected phase e^{ias}; a + b = q restores the
    // original s-frequency on the polynomial part.
    const Complex ib(0.0, b);
    double fact = 1.0;  // p!/(p-r)!
    double sign = 1.0;
    Complex ib_pow = ib;
    for (int r = 0; r <= p; ++r) {
      out.add_term({t.k, p - r, t.s_freq, (sign * fact / ib_pow) * t.coeff});
      if (r < p) {
        fact *= double(p - r);
        sign = -sign;
        ib_pow *= ib;
      }
    }
    const double sign_p = (p % 2 == 0) ? 1.0 : -1.0;
    double p_fact = 1.0;
    for (int r = 2; r <= p; ++r) p_fact *= r;
    Complex ib_p1 = std::pow(ib, p + 1);
    out.add_term({t.k, 0, a, (-sign_p * p_fact / ib_p1) * t.coeff});
  }
  return out.canonicalized();
}

}  // namespace phasered
