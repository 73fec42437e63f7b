#include "phasered/fourier.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace phasered {

namespace {

void require(bool cond, const char* msg) {
  if (!cond) throw std::invalid_argument(msg);
}

bool all_equal(const std::vector<double>& v) {
  for (std::size_t i = 1; i < v.size(); ++i)
    if (v[i] != v[0]) return false;
  return true;
}

double max_abs_omega(const std::vector<double>& omega) {
  double m = 0.0;
  for (double w : omega) m = std::max(m, std::abs(w));
  return m;
}

}  // namespace

int l1_norm(const MultiIndex& k) {
  int s = 0;
  for (int kj : k) s += std::abs(kj);
  return s;
}

MultiIndex negated(const MultiIndex& k) {
  MultiIndex nk(k.size());
  for (std::size_t j = 0; j < k.size(); ++j) nk[j] = -k[j];
  return nk;
}

bool is_resonant(const MultiIndex& k, const std::vector<double>& omega,
                 double tol_res) {
  if (all_equal(omega)) {
    long sum = 0;
    for (int kj : k) sum += kj;
    return sum == 0 || omega[0] == 0.0;
  }
  return std::abs(dot(k, omega)) <= tol_res * max_abs_omega(omega);
}

FourierSeries::FourierSeries(int torus_dim, int rows, int cols, int trunc,
                             bool real_valued)
    : torus_dim_(torus_dim),
      rows_(rows),
      cols_(cols),
      trunc_(trunc),
      real_valued_(real_valued) {
  require(torus_dim >= 1, "torus_dim must be positive");
  require(rows >= 1 && cols >= 1, "value shape must be positive");
  require(trunc >= 0, "truncation order must be nonnegative");
}

FourierSeries FourierSeries::zero(int torus_dim, int dim_out, int trunc) {
  return FourierSeries(torus_dim, dim_out, 1, trunc, true);
}

FourierSeries FourierSeries::constant(int torus_dim, const VecR& value,
                                      int trunc) {
  FourierSeries s(torus_dim, static_cast<int>(value.size()), 1, trunc, true);
  s.set_coeff(MultiIndex(torus_dim, 0), value.cast<Complex>());
  return s;
}

VecC FourierSeries::coeff(const MultiIndex& k) const {
  auto it = modes_.find(k);
  if (it == modes_.end()) return VecC::Zero(dim_out());
  return it->second;
}

void FourierSeries::set_coeff(const MultiIndex& k, const VecC& c) {
  require(static_cast<int>(k.size()) == torus_dim_, "wavevector length != m");
  require(static_cast<int>(c.size()) == dim_out(), "coefficient length");
  if (l1_norm(k) > trunc_)
    throw std::invalid_argument("mode outside truncation ball");
  if (c.isZero(0.0))
    modes_.erase(k);
  else
    modes_[k] = c;
}

void FourierSeries::add_to_coeff(const MultiIndex& k, const VecC& c) {
  set_coeff(k, coeff(k) + c);
}

VecC FourierSeries::eval(const std::vector<double>& phi) const {
  require(static_cast<int>(phi.size()) == torus_dim_, "phi length != m");
  VecC out = VecC::Zero(dim_out());
  for (const auto& [k, c] : modes_) {
    double arg = 0.0;
    for (int j = 0; j < torus_dim_; ++j) arg += k[j] * phi[j];
    out += c * std::polar(1.0, arg);
  }
  return out;
}

VecR FourierSeries::eval_real(const std::vector<double>& phi) const {
  if (!real_valued_)
    throw std::logic_error("eval_real on a series without the real flag");
  return eval(phi).real();
}

double FourierSeries::max_abs() const {
  double m = 0.0;
  for (const auto& [k, c] : modes_)
    m = std::max(m, c.cwiseAbs().maxCoeff());
  return m;
}

double FourierSeries::sum_abs() const {
  double s = 0.0;
  for (const auto& [k, c] : modes_) s += c.cwiseAbs().sum();
  return s;
}

FourierSeries FourierSeries::pruned(double tol) const {
  FourierSeries out(torus_dim_, rows_, cols_, trunc_, real_valued_);
  for (const auto& [k, c] : modes_)
    if (c.cwiseAbs().maxCoeff() > tol) out.modes_[k] = c;
  return out;
}

FourierSeries FourierSeries::with_trunc(int K) const {
  FourierSeries out(torus_dim_, rows_, cols_, K, real_valued_);
  for (const auto& [k, c] : modes_) {
    if (l1_norm(k) > K)
      throw std::invalid_argument("stored mode exceeds requested truncation");
    out.modes_[k] = c;
  }
  return out;
}

double FourierSeries::reality_defect() const {
  double d = 0.0;
  for (const auto& [k, c] : modes_) {
    VecC mirror = coeff(negated(k));
    d = std::max(d, (mirror - c.conjugate()).cwiseAbs().maxCoeff());
  }
  return d;
}

void FourierSeries::symmetrize_real() {
  std::map<MultiIndex, VecC> sym;
  for (const auto& [k, c] : modes_) {
    VecC mirror = coeff(negated(k));
    sym[k] = 0.5 * (c + mirror.conjugate());
  }
  modes_ = std::move(sym);
  real_valued_ = true;
}

FourierSeries add(const FourierSeries& a, const FourierSeries& b) {
  if (a.torus_dim() != b.torus_dim() || a.rows() != b.rows() ||
      a.cols() != b.cols())
    throw std::invalid_argument("add: dimension mismatch");
  FourierSeries out(a.torus_dim(), a.rows(), a.cols(),
                    std::max(a.trunc(), b.trunc()),
                    a.real_valued() && b.real_valued());
  for (const auto& [k, c] : a.modes()) out.add_to_coeff(k, c);
  for (const auto& [k, c] : b.modes()) out.add_to_coeff(k, c);
  return out;
}

FourierSeries subtract(const FourierSeries& a, const FourierSeries& b) {
  return add(a, scale(b, Complex(-1.0, 0.0)));
}

FourierSeries scale(const FourierSeries& a, Complex factor) {
  FourierSeries out(a.torus_dim(), a.rows(), a.cols(), a.trunc(),
                    a.real_valued() && factor.imag() == 0.0);
  if (factor == Complex(0.0, 0.0)) return out;
  for (const auto& [k, c] : a.modes()) out.set_coeff(k, factor * c);
  return out;
}

FourierSeries directional_derivative_omega(const FourierSeries& a,
                                           const std::vector<double>& omega) {
  if (static_cast<int>(omega.size()) != a.torus_dim())
    throw std::invalid_argument("omega length != m");
  FourierSeries out(a.torus_dim(), a.rows(), a.cols(), a.trunc(),
                    a.real_valued());
  for (const auto& [k, c] : a.modes()) {
    Complex factor(0.0, dot(k, omega));
    if (factor != Complex(0.0, 0.0)) out.set_coeff(k, factor * c);
  }
  return out;
}

FourierSeries partial_phi(const FourierSeries& a, int j) {
  if (j < 0 || j >= a.torus_dim())
    throw std::invalid_argument("partial_phi: bad direction");
  FourierSeries out(a.torus_dim(), a.rows(), a.cols(), a.trunc(),
                    a.real_valued());
  for (const auto& [k, c] : a.modes())
    if (k[j] != 0) out.set_coeff(k, Complex(0.0, double(k[j])) * c);
  return out;
}

FourierSeries dphi_dot(const FourierSeries& a, const FourierSeries& f) {
  if (f.torus_dim() != a.torus_dim() || f.cols() != 1 ||
      f.rows() != a.torus_dim())
    throw std::invalid_argument("dphi_dot: f must be an m-vector series");
  FourierSeries out(a.torus_dim(), a.rows(), a.cols(), a.trunc() + f.trunc(),
                    a.real_valued() && f.real_valued());
  for (const auto& [ka, ca] : a.modes()) {
    for (const auto& [kf, cf] : f.modes()) {
      Complex factor(0.0, 0.0);
      for (int j = 0; j < a.torus_dim(); ++j)
        factor += Complex(0.0, double(ka[j])) * cf[j];
      if (factor == Complex(0.0, 0.0)) continue;
      MultiIndex k(a.torus_dim());
      for (int j = 0; j < a.torus_dim(); ++j) k[j] = ka[j] + kf[j];
      out.add_to_coeff(k, factor * ca);
    }
  }
  return out.pruned(0.0);
}

namespace {

constexpr std::size_t kConvolutionModeLimit = 64;

using RowMajorC =
    Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

VecC combine(const VecC& ca, int ra, int ca_cols, const VecC& cb, int rb,
             int cb_cols, ProductRule rule) {
  if (rule == ProductRule::Componentwise) {
    if (ra * ca_cols == 1) return ca[0] * cb;  // scalar broadcast
    return ca.cwiseProduct(cb);
  }
  Eigen::Map<const RowMajorC> A(ca.data(), ra, ca_cols);
  Eigen::Map<const RowMajorC> B(cb.data(), rb, cb_cols);
  RowMajorC prod = A * B;
  return Eigen::Map<const VecC>(prod.data(), prod.size());
}

}  // namespace

FourierSeries multiply(const FourierSeries& a, const FourierSeries& b,
                       ProductRule rule) {
  if (a.torus_dim() != b.torus_dim())
    throw std::invalid_argument("multiply: torus dimension mismatch");
  int out_rows = 0, out_cols = 0;
  if (rule == ProductRule::Componentwise) {
    bool scalar_a = (a.dim_out() == 1);
    if (!scalar_a && (a.rows() != b.rows() || a.cols() != b.cols()))
      throw std::invalid_argument("multiply: incompatible shapes");
    out_rows = b.rows();
    out_cols = b.cols();
  } else {
    if (a.cols() != b.rows())
      throw std::invalid_argument("multiply: inner dimensions differ");
    out_rows = a.rows();
    out_cols = b.cols();
  }
  const int K = a.trunc() + b.trunc();
  FourierSeries out(a.torus_dim(), out_rows, out_cols, K,
                    a.real_valued() && b.real_valued());

  if (a.mode_count() <= kConvolutionModeLimit &&
      b.mode_count() <= kConvolutionModeLimit) {
    for (const auto& [ka, ca] : a.modes()) {
      for (const auto& [kb, cb] : b.modes()) {
        MultiIndex k(a.torus_dim());
        for (int j = 0; j < a.torus_dim(); ++j) k[j] = ka[j] + kb[j];
        if (l1_norm(k) > K) continue;
        out.add_to_coeff(
            k, combine(ca, a.rows(), a.cols(), cb, b.rows(), b.cols(), rule));
      }
    }
    return out.pruned(0.0);
  }

  // Dense fallback: sample the pointwise product and re-transform.
  auto fn = [&](const std::vector<double>& phi) {
    return combine(a.eval(phi), a.rows(), a.cols(), b.eval(phi), b.rows(),
                   b.cols(), rule);
  };
  FourierSeries c = collocate(fn, a.torus_dim(), out_rows * out_cols, K);
  FourierSeries shaped(a.torus_dim(), out_rows, out_cols, K,
                       a.real_valued() && b.real_valued());
  for (const auto& [k, cc] : c.modes()) shaped.set_coeff(k, cc);
  return shaped;
}

namespace {

// Enumerates modes with |k|_1 <= K.
void enumerate_ball(int torus_dim, int K, MultiIndex& k, int pos, int budget,
                    const std::function<void(const MultiIndex&)>& visit) {
  if (pos == torus_dim) {
    visit(k);
    return;
  }
  for (int kj = -budget; kj <= budget; ++kj) {
    k[pos] = kj;
    enumerate_ball(torus_dim, K, k, pos + 1, budget - std::abs(kj), visit);
  }
}

}  // namespace

FourierSeries collocation_transform(const GridSamples& samples, int K,
                                    double drop_tol) {
  const int m = samples.torus_dim;
  const int n = samples.points_per_dim;
  if (n < 2 * K + 1)
    throw std::invalid_argument(
        "collocation lattice too coarse for requested truncation");
  std::size_t expected = 1;
  for (int j = 0; j < m; ++j) expected *= n;
  if (samples.values.size() != expected)
    throw std::invalid_argument("collocation: sample count != n^m");

  // Per-dimension phase tables.
  const double step = 2.0 * M_PI / n;
  std::vector<Complex> unit(n);
  for (int j = 0; j < n; ++j) unit[j] = std::polar(1.0, -step * j);

  double scale_in = 0.0;
  for (const auto& v : samples.values)
    scale_in = std::max(scale_in, v.cwiseAbs().maxCoeff());

  FourierSeries out(m, samples.dim_out, 1, K, false);
  MultiIndex k(m, 0);
  double norm = 1.0 / double(expected);
  enumerate_ball(m, K, k, 0, K, [&](const MultiIndex& kk) {
    VecC acc = VecC::Zero(samples.dim_out);
    std::vector<int> idx(m, 0);
    for (std::size_t flat = 0; flat < expected; ++flat) {
      // decode flat -> lattice index (row-major, last dim fastest)
      std::size_t rem = flat;
      long esum = 0;
      for (int j = m - 1; j >= 0; --j) {
        idx[j] = rem % n;
        rem /= n;
        esum += (long(kk[j] % n + n) % n) * idx[j];
      }
      acc += samples.values[flat] * unit[esum % n];
    }
    acc *= norm;
    if (acc.cwiseAbs().maxCoeff() > drop_tol * std::max(scale_in, 1e-300))
      out.set_coeff(kk, acc);
  });

  // Tag reality when the sampled data was real.
  bool real_data = true;
  for (const auto& v : samples.values)
    if (v.imag().cwiseAbs().maxCoeff() >
        1e-12 * std::max(scale_in, 1e-300)) {
      real_data = false;
      break;
    }
  if (real_data) out.symmetrize_real();
  return out;
}

FourierSeries collocate(
    const std::function<VecC(const std::vector<double>&)>& fn, int torus_dim,
    int dim_out, int K, int n_points) {
  GridSamples g;
  g.torus_dim = torus_dim;
  g.dim_out = dim_out;
  g.points_per_dim = n_points > 0 ? n_points : 2 * K + 1;
  std::size_t total = 1;
  for (int j = 0; j < torus_dim; ++j) total *= g.points_per_dim;
  g.values.reserve(total);
  const double step = 2.0 * M_PI / g.points_per_dim;
  std::vector<double> phi(torus_dim, 0.0);
  for (std::size_t flat = 0; flat < total; ++flat) {
    std::size_t rem = flat;
    for (int j = torus_dim - 1; j >= 0; --j) {
      phi[j] = step * double(rem % g.points_per_dim);
      rem /= g.points_per_dim;
    }
    g.values.push_back(fn(phi));
  }
  return collocation_transform(g, K);
}

std::pair<FourierSeries, FourierSeries> split_resonant(
    const FourierSeries& a, const std::vector<double>& omega, double tol_res) {
  FourierSeries res(a.torus_dim(), a.rows(), a.cols(), a.trunc(),
                    a.real_valued());
  FourierSeries non(a.torus_dim(), a.rows(), a.cols(), a.trunc(),
                    a.real_valued());
  for (const auto& [k, c] : a.modes()) {
    if (is_resonant(k, omega, tol_res))
      res.set_coeff(k, c);
    else
      non.set_coeff(k, c);
  }
  return {res, non};
}

std::vector<std::vector<double>> torus_lattice(int torus_dim, int n) {
  std::size_t total = 1;
  for (int j = 0; j < torus_dim; ++j) total *= n;
  std::vector<std::vector<double>> pts;
  pts.reserve(total);
  const double step = 2.0 * M_PI / n;
  for (std::size_t flat = 0; flat < total; ++flat) {
    std::vector<double> phi(torus_dim);
    std::size_t rem = flat;
    for (int j = torus_dim - 1; j >= 0; --j) {
      phi[j] = step * double(rem % n);
      rem /= n;
    }
    pts.push_back(std::move(phi));
  }
  return pts;
}

}  // namespace phasered
