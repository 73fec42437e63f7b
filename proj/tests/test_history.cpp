#include "phasered/history.hpp"

#include "doctest.h"
#include "test_util.hpp"

using namespace phasered;
using testutil::random_phi;

namespace {

HistoryTerm term(MultiIndex k, int p, double q, Complex c) {
  VecC v(1);
  v[0] = c;
  return {std::move(k), p, q, v};
}

}  // namespace

TEST_CASE("boundary_trace kills s-power terms") {
  PhaseHistoryField E(2, 1, 1.0);
  E.add_term(term({1, 0}, 1, 0.7, Complex(2.0, 0.0)));
  E.add_term(term({0, 1}, 0, -0.3, Complex(0.0, 1.5)));
  FourierSeries tr = E.boundary_trace();
  CHECK(tr.mode_count() == 1);
  CHECK(tr.coeff({0, 1})[0] == Complex(0.0, 1.5));
}

TEST_CASE("d_ds on a pure exponential term") {
  PhaseHistoryField E(2, 1, 1.0);
  E.add_term(term({1, -1}, 0, 0.4, Complex(1.0, 0.0)));
  PhaseHistoryField d = E.d_ds();
  CHECK(d.term_count() == 1);
  const auto& t = d.terms()[0];
  CHECK(t.s_power == 0);
  CHECK(t.s_freq == doctest::Approx(0.4));
  CHECK(t.coeff[0] == Complex(0.0, 0.4));
}

TEST_CASE("d_ds matches central differences in s") {
  std::mt19937_64 rng(5);
  PhaseHistoryField E(2, 2, 0.8);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  for (int t = 0; t < 6; ++t) {
    VecC c(2);
    c << Complex(unif(rng), unif(rng)), Complex(unif(rng), unif(rng));
    E.add_term({{(t % 3) - 1, 1 - (t % 2)}, t % 3, 1.3 * unif(rng), c});
  }
  PhaseHistoryField d = E.d_ds();
  const double h = 1e-5;
  for (int t = 0; t < 10; ++t) {
    auto phi = random_phi(rng, 2);
    const double s = -0.4 + 0.03 * t;
    VecC fd = (E.eval(phi, s + h) - E.eval(phi, s - h)) / (2.0 * h);
    // O(h^2) central-difference remainder
    CHECK((fd - d.eval(phi, s)).cwiseAbs().maxCoeff() <= 1e-8);
  }
}

TEST_CASE("eval rejects s outside the delay interval") {
  PhaseHistoryField E(2, 1, 0.5);
  E.add_term(term({0, 0}, 0, 0.0, 1.0));
  CHECK_THROWS_AS(E.eval({0.0, 0.0}, 0.2), std::domain_error);
  CHECK_THROWS_AS(E.eval({0.0, 0.0}, -0.7), std::domain_error);
  CHECK(E.eval({0.0, 0.0}, -0.5)[0] == Complex(1.0, 0.0));
}

TEST_CASE("term with p=1 contributes nothing at s=0") {
  PhaseHistoryField E(2, 1, 1.0);
  E.add_term(term({2, -1}, 1, 0.9, Complex(3.0, -1.0)));
  CHECK(E.eval({0.3, 1.2}, 0.0).cwiseAbs().maxCoeff() == 0.0);
  CHECK(E.boundary_trace().empty());
}

TEST_CASE("advected integral: zero advection frequency gives s-powers") {
  // resonant term: q == <k,omega>
  PhaseHistoryField H(2, 1, 1.0);
  H.add_term(term({1, -1}, 0, 0.0, Complex(1.0, 0.0)));
  PhaseHistoryField I = advected_integral(H, {1.0, 1.0});
  CHECK(I.term_count() == 1);
  CHECK(I.terms()[0].s_power == 1);
  CHECK(I.terms()[0].coeff[0] == Complex(1.0, 0.0));
}

TEST_CASE("advected integral matches quadrature") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  const std::vector<double> omega{1.0, std::sqrt(2.0)};
  PhaseHistoryField H(2, 1, 1.0);
  H.add_term(term({1, 0}, 0, 0.6, Complex(0.8, 0.1)));
  H.add_term(term({1, -1}, 1, -0.9, Complex(-0.4, 0.7)));
  H.add_term(term({0, 2}, 2, 2.0 * std::sqrt(2.0), Complex(0.3, -0.2)));
  PhaseHistoryField I = advected_integral(H, omega);

  // composite Simpson quadrature of int_0^s H(phi + omega(s-z), z) dz
  auto quad = [&](const std::vector<double>& phi, double s) {
    const int n = 2000;
    Complex acc(0.0, 0.0);
    const double h = s / n;
    for (int i = 0; i <= n; ++i) {
      const double z = h * i;
      std::vector<double> shifted{phi[0] + omega[0] * (s - z),
                                  phi[1] + omega[1] * (s - z)};
      double w = (i == 0 || i == n) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
      acc += w * H.eval(shifted, z)[0];
    }
    return acc * (h / 3.0);
  };
  for (int t = 0; t < 6; ++t) {
    auto phi = random_phi(rng, 2);
    const double s = -1.0 + 0.15 * t;
    CHECK(std::abs(I.eval(phi, s)[0] - quad(phi, s)) <= 1e-9);
  }
}

TEST_CASE("real fields stay real through the algebra") {
  // conjugate-paired terms
  PhaseHistoryField E(2, 1, 1.0, true);
  E.add_term(term({1, 0}, 1, 0.5, Complex(0.3, 0.4)));
  E.add_term(term({-1, 0}, 1, -0.5, Complex(0.3, -0.4)));
  CHECK(E.reality_defect() <= 1e-15);
  CHECK(E.d_ds().reality_defect() <= 1e-15);
  PhaseHistoryField I = advected_integral(E, {1.0, 1.0});
  CHECK(I.reality_defect() <= 1e-15);
  std::mt19937_64 rng(13);
  for (int t = 0; t < 10; ++t) {
    auto phi = random_phi(rng, 2);
    CHECK(std::abs(E.eval(phi, -0.3)[0].imag()) <= 1e-14);
    CHECK(std::abs(I.eval(phi, -0.3)[0].imag()) <= 1e-14);
  }
}

TEST_CASE("dphi_dot contraction against finite differences") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  PhaseHistoryField A(2, 2, 1.0);
  for (int t = 0; t < 5; ++t) {
    VecC c(2);
    c << Complex(unif(rng), unif(rng)), Complex(unif(rng), unif(rng));
    A.add_term({{(t % 3) - 1, (t % 2)}, t % 2, 0.7 * unif(rng), c});
  }
  FourierSeries f(2, 2, 1, 2, false);
  for (const MultiIndex& k : {MultiIndex{0, 0}, MultiIndex{1, -1}}) {
    VecC c(2);
    c << Complex(unif(rng), unif(rng)), Complex(unif(rng), unif(rng));
    f.set_coeff(k, c);
  }
  PhaseHistoryField contracted = dphi_dot(A, f);
  const double h = 1e-6;
  for (int t = 0; t < 8; ++t) {
    auto phi = random_phi(rng, 2);
    const double s = -0.2 - 0.05 * t;
    VecC expect = VecC::Zero(2);
    VecC fv = f.eval(phi);
    for (int j = 0; j < 2; ++j) {
      auto pp = phi, pm = phi;
      pp[j] += h;
      pm[j] -= h;
      expect += (A.eval(pp, s) - A.eval(pm, s)) / (2.0 * h) * fv[j];
    }
    CHECK((contracted.eval(phi, s) - expect).cwiseAbs().maxCoeff() <= 1e-7);
  }
}
