#include "phasered/fourier.hpp"

#include "doctest.h"
#include "test_util.hpp"

using namespace phasered;
using testutil::lattice_max_diff;
using testutil::random_phi;
using testutil::random_series;

namespace {

FourierSeries single_mode(int m, const MultiIndex& k, Complex value, int K,
                          bool real_valued = false) {
  FourierSeries s(m, 1, 1, K, real_valued);
  VecC c(1);
  c[0] = value;
  s.set_coeff(k, c);
  return s;
}

}  // namespace

TEST_CASE("add: coefficient sums and identity") {
  FourierSeries a = single_mode(2, {0, 0}, 1.0, 2);
  FourierSeries b = single_mode(2, {0, 0}, 2.0, 2);
  FourierSeries c = add(a, b);
  CHECK(c.coeff({0, 0})[0] == Complex(3.0, 0.0));

  FourierSeries z = FourierSeries::zero(2, 1, 2);
  FourierSeries back = add(a, z);
  CHECK(back.mode_count() == 1);
  CHECK(back.coeff({0, 0})[0] == Complex(1.0, 0.0));

  FourierSeries wrong_dim = FourierSeries::zero(2, 3, 2);
  CHECK_THROWS_AS(add(a, wrong_dim), std::invalid_argument);
}

TEST_CASE("add: pointwise oracle on a 32x32 grid") {
  std::mt19937_64 rng(11);
  FourierSeries a = random_series(rng, 2, 3, 5, 8, false);
  FourierSeries b = random_series(rng, 2, 3, 5, 8, false);
  FourierSeries sum = add(a, b);
  double worst = 0.0;
  for (const auto& phi : torus_lattice(2, 32)) {
    VecC expect = a.eval(phi) + b.eval(phi);
    worst = std::max(worst, (sum.eval(phi) - expect).cwiseAbs().maxCoeff());
  }
  CHECK(worst <= 1e-12);
}

TEST_CASE("directional_derivative_omega") {
  FourierSeries c = FourierSeries::constant(2, VecR::Constant(1, 3.0), 4);
  CHECK(directional_derivative_omega(c, {1.0, 2.0}).empty());

  FourierSeries resonant = single_mode(2, {1, -1}, 1.0, 4);
  CHECK(directional_derivative_omega(resonant, {2.5, 2.5}).empty());

  FourierSeries mode = single_mode(2, {1, 0}, 1.0, 4);
  FourierSeries d = directional_derivative_omega(mode, {2.0, 2.0});
  CHECK(d.coeff({1, 0})[0] == Complex(0.0, 2.0));
}

TEST_CASE("multiply: cancellation and identity") {
  FourierSeries a = single_mode(2, {1, 0}, 1.0, 1);
  FourierSeries b = single_mode(2, {-1, 0}, 1.0, 1);
  FourierSeries prod = multiply(a, b, ProductRule::Componentwise);
  CHECK(prod.mode_count() == 1);
  CHECK(prod.coeff({0, 0})[0] == Complex(1.0, 0.0));

  FourierSeries one = FourierSeries::constant(2, VecR::Constant(1, 1.0), 0);
  std::mt19937_64 rng(7);
  FourierSeries r = random_series(rng, 2, 1, 3, 5, false);
  FourierSeries same = multiply(r, one, ProductRule::Componentwise);
  CHECK(lattice_max_diff(r, same, 16) <= 1e-14);
}

TEST_CASE("multiply: collocation oracle for sparse convolution") {
  std::mt19937_64 rng(23);
  FourierSeries a = random_series(rng, 2, 2, 4, 6, true);
  FourierSeries b = random_series(rng, 2, 2, 3, 6, true);
  FourierSeries prod = multiply(a, b, ProductRule::Componentwise);

  const int K = a.trunc() + b.trunc();
  auto fn = [&](const std::vector<double>& phi) {
    return VecC(a.eval(phi).cwiseProduct(b.eval(phi)));
  };
  FourierSeries sampled = collocate(fn, 2, 2, K);
  CHECK(lattice_max_diff(prod, sampled, 2 * K + 1) <= 1e-11);
  CHECK(prod.real_valued());
  CHECK(prod.reality_defect() <= 1e-14);
}

TEST_CASE("multiply: matrix rule against pointwise products") {
  std::mt19937_64 rng(29);
  // 3x2 matrix series times 2-vector series
  FourierSeries mat(2, 3, 2, 2, false);
  FourierSeries vec(2, 2, 1, 2, false);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  for (const MultiIndex& k :
       {MultiIndex{0, 0}, MultiIndex{1, -1}, MultiIndex{0, 1}}) {
    VecC cm(6), cv(2);
    for (int i = 0; i < 6; ++i) cm[i] = Complex(unif(rng), unif(rng));
    for (int i = 0; i < 2; ++i) cv[i] = Complex(unif(rng), unif(rng));
    mat.set_coeff(k, cm);
    vec.set_coeff(k, cv);
  }
  FourierSeries prod = multiply(mat, vec, ProductRule::Matrix);
  CHECK(prod.rows() == 3);
  CHECK(prod.cols() == 1);
  for (const auto& phi : torus_lattice(2, 9)) {
    VecC mv = mat.eval(phi), vv = vec.eval(phi), pv = prod.eval(phi);
    for (int i = 0; i < 3; ++i) {
      Complex expect = mv[2 * i] * vv[0] + mv[2 * i + 1] * vv[1];
      CHECK(std::abs(pv[i] - expect) <= 1e-12);
    }
  }
}

TEST_CASE("collocation_transform: exact mode recovery") {
  GridSamples g;
  g.torus_dim = 2;
  g.dim_out = 1;
  g.points_per_dim = 9;
  for (const auto& phi : torus_lattice(2, 9)) {
    VecC v(1);
    v[0] = std::polar(1.0, phi[1]);
    g.values.push_back(v);
  }
  FourierSeries s = collocation_transform(g, 4);
  CHECK(s.mode_count() == 1);
  CHECK(std::abs(s.coeff({0, 1})[0] - Complex(1.0, 0.0)) <= 1e-13);
}

TEST_CASE("collocation_transform: all-zero samples give the empty series") {
  GridSamples g;
  g.torus_dim = 2;
  g.dim_out = 2;
  g.points_per_dim = 9;
  g.values.assign(81, VecC::Zero(2));
  CHECK(collocation_transform(g, 4).empty());
}

TEST_CASE("collocation_transform: hand-expanded product sin(p1-p2)cos(2p2)") {
  auto fn = [](const std::vector<double>& phi) {
    VecC v(1);
    v[0] = std::sin(phi[0] - phi[1]) * std::cos(2.0 * phi[1]);
    return v;
  };
  FourierSeries s = collocate(fn, 2, 1, 4);
  // sin(a)cos(b) = [sin(a+b) + sin(a-b)]/2 with a = p1-p2, b = 2 p2:
  // modes (1,1), (1,-3) at -i/4 and their conjugate pairs.
  CHECK(s.mode_count() == 4);
  CHECK(std::abs(s.coeff({1, 1})[0] - Complex(0.0, -0.25)) <= 1e-13);
  CHECK(std::abs(s.coeff({1, -3})[0] - Complex(0.0, -0.25)) <= 1e-13);
  CHECK(std::abs(s.coeff({-1, -1})[0] - Complex(0.0, 0.25)) <= 1e-13);
  CHECK(std::abs(s.coeff({-1, 3})[0] - Complex(0.0, 0.25)) <= 1e-13);
}

TEST_CASE("collocation_transform: lattice below 2K+1 is rejected") {
  GridSamples g;
  g.torus_dim = 1;
  g.dim_out = 1;
  g.points_per_dim = 8;
  g.values.assign(8, VecC::Zero(1));
  CHECK_THROWS_AS(collocation_transform(g, 4), std::invalid_argument);
}

TEST_CASE("split_resonant: identical frequencies use the integer test") {
  FourierSeries s(2, 1, 1, 4, false);
  for (const MultiIndex& k :
       {MultiIndex{1, -1}, MultiIndex{2, -2}, MultiIndex{1, 0}})
    s.add_to_coeff(k, VecC::Constant(1, Complex(1.0, 0.0)));
  auto [res, non] = split_resonant(s, {1.0, 1.0}, kDefaultTolRes);
  CHECK(res.modes().count({1, -1}) == 1);
  CHECK(res.modes().count({2, -2}) == 1);
  CHECK(res.modes().count({1, 0}) == 0);
  CHECK(non.modes().count({1, 0}) == 1);
  CHECK(non.mode_count() == 1);

  FourierSeries c = FourierSeries::constant(2, VecR::Constant(1, 2.0), 4);
  auto [res_c, non_c] = split_resonant(c, {1.0, 1.0}, kDefaultTolRes);
  CHECK(res_c.mode_count() == 1);
  CHECK(non_c.empty());
}

TEST_CASE("split_resonant: irrational frequency vector") {
  // with omega = (1, sqrt 2), no k in the |k|_1 <= 6 ball except 0 resonates
  const std::vector<double> omega{1.0, std::sqrt(2.0)};
  for (int k1 = -6; k1 <= 6; ++k1) {
    for (int k2 = -6; k2 <= 6; ++k2) {
      if (std::abs(k1) + std::abs(k2) > 6) continue;
      const bool expect = (k1 == 0 && k2 == 0);
      CHECK(is_resonant({k1, k2}, omega, kDefaultTolRes) == expect);
    }
  }
}

TEST_CASE("split_resonant: parts recombine mode-wise") {
  std::mt19937_64 rng(31);
  FourierSeries s = random_series(rng, 2, 2, 6, 12, false);
  auto [res, non] = split_resonant(s, {1.0, 1.0}, kDefaultTolRes);
  FourierSeries back = add(res, non);
  for (const auto& [k, c] : s.modes())
    CHECK((back.coeff(k) - c).cwiseAbs().maxCoeff() == 0.0);
  CHECK(back.mode_count() == s.mode_count());
}

TEST_CASE("linearity of evaluation at random points") {
  std::mt19937_64 rng(37);
  FourierSeries a = random_series(rng, 2, 2, 5, 10, false);
  FourierSeries b = random_series(rng, 2, 2, 5, 10, false);
  const Complex ca(0.7, -0.3), cb(-1.1, 0.2);
  FourierSeries lin = add(scale(a, ca), scale(b, cb));
  for (int t = 0; t < 100; ++t) {
    auto phi = random_phi(rng, 2);
    VecC expect = ca * a.eval(phi) + cb * b.eval(phi);
    CHECK((lin.eval(phi) - expect).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("reality preservation through the arithmetic") {
  std::mt19937_64 rng(41);
  FourierSeries a = random_series(rng, 2, 2, 4, 6, true);
  FourierSeries b = random_series(rng, 2, 2, 4, 6, true);
  CHECK(add(a, b).real_valued());
  CHECK(add(a, b).reality_defect() <= 1e-14);
  CHECK(multiply(a, b, ProductRule::Componentwise).reality_defect() <= 1e-13);
  FourierSeries d = directional_derivative_omega(a, {1.0, 0.5});
  CHECK(d.real_valued());
  CHECK(d.reality_defect() <= 1e-13);

  // imaginary part of evaluations stays at roundoff scale
  for (int t = 0; t < 20; ++t) {
    auto phi = random_phi(rng, 2);
    CHECK(a.eval(phi).imag().cwiseAbs().maxCoeff() <=
          1e-12 * std::max(1.0, a.sum_abs()));
  }
}

TEST_CASE("Parseval consistency on the collocation lattice") {
  std::mt19937_64 rng(43);
  FourierSeries a = random_series(rng, 2, 1, 4, 7, false);
  const int n = 2 * a.trunc() + 1;
  double mean_sq = 0.0;
  for (const auto& phi : torus_lattice(2, n))
    mean_sq += std::norm(a.eval(phi)[0]);
  mean_sq /= double(n) * n;
  double coeff_sq = 0.0;
  for (const auto& [k, c] : a.modes()) coeff_sq += std::norm(c[0]);
  CHECK(mean_sq == doctest::Approx(coeff_sq).epsilon(1e-10));
}

TEST_CASE("dphi_dot matches finite differences") {
  std::mt19937_64 rng(47);
  FourierSeries a = random_series(rng, 2, 3, 4, 6, true);
  FourierSeries f = random_series(rng, 2, 2, 3, 5, true);
  FourierSeries contracted = dphi_dot(a, f);
  const double h = 1e-6;
  for (int t = 0; t < 20; ++t) {
    auto phi = random_phi(rng, 2);
    VecC expect = VecC::Zero(3);
    VecC fv = f.eval(phi);
    for (int j = 0; j < 2; ++j) {
      auto pp = phi, pm = phi;
      pp[j] += h;
      pm[j] -= h;
      expect += (a.eval(pp) - a.eval(pm)) / (2.0 * h) * fv[j];
    }
    CHECK((contracted.eval(phi) - expect).cwiseAbs().maxCoeff() <= 1e-7);
  }
}
