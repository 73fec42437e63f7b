// Truncated multivariate Fourier series on the m-torus.
//
// A series stores a sparse set of wavevectors k with complex coefficient
// matrices and evaluates as sum_k C_k exp(i<k,phi>). Values may be vectors
// (cols == 1) or matrices; matrix-valued series carry frame data such as
// tangent/normal bases and projections.

#pragma once

#include <complex>
#include <functional>
#include <map>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

namespace phasered {

using Complex = std::complex<double>;
using VecC = Eigen::VectorXcd;
using VecR = Eigen::VectorXd;

// Fourier wavevector; lexicographic order makes it usable as a map key.
using MultiIndex = std::vector<int>;

int l1_norm(const MultiIndex& k);
MultiIndex negated(const MultiIndex& k);

inline double dot(const MultiIndex& k, const std::vector<double>& omega) {
  double s = 0.0;
  for (std::size_t j = 0; j < k.size(); ++j) s += k[j] * omega[j];
  return s;
}

// Resonance test <k,omega> == 0. Uses exact integer arithmetic when all
// omega entries coincide (then <k,omega> = omega * sum k_j), a scaled
// tolerance otherwise.
bool is_resonant(const MultiIndex& k, const std::vector<double>& omega,
                 double tol_res);

enum class ProductRule { Componentwise, Matrix };

class FourierSeries {
 public:
  FourierSeries(int torus_dim, int rows, int cols, int trunc,
                bool real_valued = true);

  static FourierSeries zero(int torus_dim, int dim_out, int trunc);
  static FourierSeries constant(int torus_dim, const VecR& value, int trunc);

  int torus_dim() const { return torus_dim_; }
  int rows() const { return rows_; }
  int cols() const { return cols_; }
  int dim_out() const { return rows_ * cols_; }
  int trunc() const { return trunc_; }
  bool real_valued() const { return real_valued_; }
  void set_real_valued(bool r) { real_valued_ = r; }

  const std::map<MultiIndex, VecC>& modes() const { return modes_; }
  bool empty() const { return modes_.empty(); }
  std::size_t mode_count() const { return modes_.size(); }

  // Coefficient access; the zero vector for absent modes.
  VecC coeff(const MultiIndex& k) const;
  void set_coeff(const MultiIndex& k, const VecC& c);
  void add_to_coeff(const MultiIndex& k, const VecC& c);

  VecC eval(const std::vector<double>& phi) const;
  // Evaluation of a real-valued series; rejects series without the flag.
  VecR eval_real(const std::vector<double>& phi) const;

  // Largest coefficient magnitude and sum of coefficient magnitudes.
  double max_abs() const;
  double sum_abs() const;

  // Removes modes with max-norm <= tol (exact zeros for tol = 0).
  FourierSeries pruned(double tol = 0.0) const;
  // Re-declares the truncation order; rejects if stored modes exceed it.
  FourierSeries with_trunc(int K) const;

  // Conjugate-pair consistency check: coeff(-k) == conj(coeff(k)).
  double reality_defect() const;
  // Averages k and conj(-k) coefficients so the pair condition holds exactly.
  void symmetrize_real();

 private:
  int torus_dim_;
  int rows_, cols_;
  int trunc_;
  bool real_valued_;
  std::map<MultiIndex, VecC> modes_;
};

FourierSeries add(const FourierSeries& a, const FourierSeries& b);
FourierSeries subtract(const FourierSeries& a, const FourierSeries& b);
FourierSeries scale(const FourierSeries& a, Complex factor);

// Mode k scaled by i<k,omega>; the derivative of a along the constant
// direction omega.
FourierSeries directional_derivative_omega(const FourierSeries& a,
                                           const std::vector<double>& omega);

// d/dphi_j: mode k scaled by i k_j.
FourierSeries partial_phi(const FourierSeries& a, int j);

// (d_phi a) . f for vector-valued f with dim_out == torus_dim; the chain-rule
// contraction sum_j d_{phi_j} a * f_j computed by sparse convolution.
FourierSeries dphi_dot(const FourierSeries& a, const FourierSeries& f);

// Coefficient convolution truncated to |k|_1 <= K_a + K_b. Componentwise
// requires equal shapes (or scalar a), Matrix requires a.cols == b.rows.
FourierSeries multiply(const FourierSeries& a, const FourierSeries& b,
                       ProductRule rule);

// Samples of a function on the equispaced lattice {2 pi j / n : 0 <= j < n}^m,
// row-major in the lattice index, innermost dimension last.
struct GridSamples {
  int torus_dim = 0;
  int dim_out = 0;
  int points_per_dim = 0;
  std::vector<VecC> values;
};

// Trigonometric interpolation onto modes |k|_1 <= K. Requires at least
// 2K+1 lattice points per dimension (coarser lattices alias).
FourierSeries collocation_transform(const GridSamples& samples, int K,
                                    double drop_tol = 1e-14);

// Samples fn on a (2K+1)^m lattice (or n_points^m if given) and transforms.
FourierSeries collocate(const std::function<VecC(const std::vector<double>&)>& fn,
                        int torus_dim, int dim_out, int K, int n_points = 0);

// Mode k is resonant iff <k,omega> vanishes under is_resonant(); the two
// parts sum to the input mode-by-mode.
std::pair<FourierSeries, FourierSeries> split_resonant(
    const FourierSeries& a, const std::vector<double>& omega, double tol_res);

// Default resonance tolerance, relative to max|omega_j|.
inline constexpr double kDefaultTolRes = 1e-9;

// Lattice of n equispaced angles per dimension; enumerates all n^m points.
std::vector<std::vector<double>> torus_lattice(int torus_dim, int n);

}  // namespace phasered
