// Functions of (phi, s) on the m-torus times a delay interval [-tau, 0],
// stored as finite sums of separable terms c * exp(i<k,phi>) s^p exp(i q s).
// This closed term algebra carries the history embeddings: phase shifts,
// s-derivatives, phi-derivative contractions and the advected integrals
// needed by the transport solve all stay inside it.

#pragma once

#include <vector>

#include "phasered/fourier.hpp"

namespace phasered {

struct HistoryTerm {
  MultiIndex k;
  int s_power = 0;     // p >= 0
  double s_freq = 0.0; // q
  VecC coeff;
};

class PhaseHistoryField {
 public:
  PhaseHistoryField(int torus_dim, int dim_out, double tau,
                    bool real_valued = true);

  static PhaseHistoryField zero(int torus_dim, int dim_out, double tau);

  int torus_dim() const { return torus_dim_; }
  int dim_out() const { return dim_out_; }
  double tau() const { return tau_; }
  bool real_valued() const { return real_valued_; }
  void set_real_valued(bool r) { real_valued_ = r; }

  const std::vector<HistoryTerm>& terms() const { return terms_; }
  std::size_t term_count() const { return terms_.size(); }
  int max_s_power() const;

  void add_term(HistoryTerm t);

  VecC eval(const std::vector<double>& phi, double s) const;
  VecR eval_real(const std::vector<double>& phi, double s) const;

  // Restriction to s = 0; terms with p > 0 vanish, exp(iq*0) = 1.
  FourierSeries boundary_trace() const;

  // Product rule on s^p exp(iqs).
  PhaseHistoryField d_ds() const;

  // Collapses terms sharing (k, p, q) and drops negligible coefficients.
  PhaseHistoryField canonicalized(double drop_tol = 0.0) const;

  double max_abs() const;

  // Largest mismatch of the pairing (k,p,q,c) <-> (-k,p,-q,conj c).
  double reality_defect() const;

 private:
  int torus_dim_;
  int dim_out_;
  double tau_;
  bool real_valued_;
  std::vector<HistoryTerm> terms_;
};

PhaseHistoryField add(const PhaseHistoryField& a, const PhaseHistoryField& b);
PhaseHistoryField scale(const PhaseHistoryField& a, Complex factor);

// Lifts an s-independent series into the field algebra.
PhaseHistoryField promote(const FourierSeries& f, double tau);

// (d_phi A)(phi,s) . B(phi,s) where B is an m-vector field; term-by-term
// convolution in (k, p, q).
PhaseHistoryField dphi_dot(const PhaseHistoryField& a,
                           const PhaseHistoryField& b);
PhaseHistoryField dphi_dot(const PhaseHistoryField& a, const FourierSeries& f);

// (d_phi A)(phi,s) . v for a constant direction v (v = omega gives the
// advective derivative along the torus flow).
PhaseHistoryField dphi_dot_const(const PhaseHistoryField& a,
                                 const std::vector<double>& v);

// The integral int_0^s H(phi + omega (s - zeta), zeta) dzeta, evaluated in
// closed form per term. Phases with q - <k,omega> resonant produce an extra
// power of s; the rest produce exponential pairs with rational coefficients.
PhaseHistoryField advected_integral(const PhaseHistoryField& h,
                                    const std::vector<double>& omega,
                                    double tol_res = kDefaultTolRes);

}  // namespace phasered
