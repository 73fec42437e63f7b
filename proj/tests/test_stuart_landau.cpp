#include "phasered/stuart_landau.hpp"

#include "doctest.h"
#include "test_util.hpp"

using namespace phasered;
using sl::SLParams;

namespace {

SLParams params(double alpha, double beta, double gamma, double delta,
                double eps = 0.1, double rho = 0.0, double tau = 0.0) {
  return SLParams{alpha, beta, gamma, delta, eps, rho, tau};
}

double eval_comp(const FourierSeries& s, const std::vector<double>& phi,
                 int comp) {
  return s.eval(phi)[comp].real();
}

}  // namespace

TEST_CASE("orbit radius and frequency") {
  auto o1 = sl::orbit(params(1, 1, -1, 0));
  CHECK(o1.R == doctest::Approx(1.0));
  CHECK(o1.Omega == doctest::Approx(1.0));

  auto o2 = sl::orbit(params(1, 1, -1, 0.5));
  CHECK(o2.R == doctest::Approx(1.0));
  CHECK(o2.Omega == doctest::Approx(1.5));

  auto o3 = sl::orbit(params(2, 1, -2, 0));
  CHECK(o3.R == doctest::Approx(1.0));
  CHECK(o3.Omega == doctest::Approx(1.0));

  CHECK_THROWS_AS(sl::orbit(params(-1, 1, -1, 0)), std::invalid_argument);
  CHECK_THROWS_AS(sl::orbit(params(1, 0.5, -1, -0.5)),
                  std::invalid_argument);  // Omega == 0
}

TEST_CASE("f1 closed form values") {
  // rho = tau = delta = 0: both components vanish at phi = 0
  FourierSeries f0 = sl::f1_closed(params(1, 1, -1, 0, 0.1, 0.0, 0.0));
  CHECK(std::abs(eval_comp(f0, {0.0, 0.0}, 0)) <= 1e-14);
  CHECK(std::abs(eval_comp(f0, {0.0, 0.0}, 1)) <= 1e-14);

  // rho = pi/2, tau = 0, delta = 0: f1 = (cos(p2-p1) - 1, cos(p1-p2) - 1)
  FourierSeries f = sl::f1_closed(params(1, 1, -1, 0, 0.1, M_PI / 2, 0.0));
  std::mt19937_64 rng(3);
  for (int t = 0; t < 20; ++t) {
    auto phi = testutil::random_phi(rng, 2);
    const double rel = phi[1] - phi[0];
    CHECK(eval_comp(f, phi, 0) ==
          doctest::Approx(std::cos(rel) - 1.0).epsilon(1e-12));
    CHECK(eval_comp(f, phi, 1) ==
          doctest::Approx(std::cos(-rel) - 1.0).epsilon(1e-12));
  }
}

TEST_CASE("first order delay acts as a pure phase shift") {
  // f1 with (rho, tau) coincides mode-wise with (rho - Omega tau, 0)
  SLParams a = params(1, 1, -1, 0.3, 0.1, 0.9, 0.7);
  const double Omega = sl::orbit(a).Omega;
  SLParams b = a;
  b.rho = std::fmod(a.rho - Omega * a.tau + 4.0 * M_PI, 2.0 * M_PI);
  b.tau = 0.0;
  FourierSeries fa = sl::f1_closed(a);
  FourierSeries fb = sl::f1_closed(b);
  for (const auto& [k, c] : fa.modes()) {
    if (l1_norm(k) == 0) continue;  // constant term carries rho itself
    CHECK((c - fb.coeff(k)).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("f2 vanishes identically at tau = 0, rho = 0") {
  FourierSeries f2 = sl::f2_closed(params(1, 1, -1, 0, 0.1, 0.0, 0.0));
  CHECK(f2.max_abs() <= 1e-15);
}

TEST_CASE("f2 rejects delta != 0") {
  CHECK_THROWS_AS(sl::f2_closed(params(1, 1, -1, 0.2)), std::invalid_argument);
  CHECK_THROWS_AS(sl::e1_closed(params(1, 1, -1, 0.2)), std::invalid_argument);
  CHECK_THROWS_AS(sl::E1_closed(params(1, 1, -1, 0.2)), std::invalid_argument);
}

TEST_CASE("exchange equivariance of the closed forms") {
  SLParams p = params(1, 1, -1, 0, 0.1, 0.8, 0.6);
  for (const FourierSeries& f : {sl::f1_closed(p), sl::f2_closed(p)}) {
    for (const auto& [k, c] : f.modes()) {
      MultiIndex swapped{k[1], k[0]};
      VecC mirror = f.coeff(swapped);
      CHECK(std::abs(c[0] - mirror[1]) <= 1e-14);
      CHECK(std::abs(c[1] - mirror[0]) <= 1e-14);
    }
  }
}

TEST_CASE("psi_rhs special values") {
  SLParams p = params(1, 1, -1, 0, 0.05, 0.0, 0.0);
  CHECK(sl::psi_rhs(p, 1, 0.0) == 0.0);
  CHECK(sl::psi_rhs(p, 2, 0.0) == 0.0);

  // rho = omega tau: cos(0) sin(pi/2) -> -2 eps
  SLParams q = params(1, 1, -1, 0, 0.05, 0.8, 0.8);  // Omega = 1
  CHECK(sl::psi_rhs(q, 1, M_PI / 2) == doctest::Approx(-2.0 * q.eps));

  // order 2, rho = pi/2, tau = 0: psi' = -(eps^2/alpha) sin(2 psi)
  SLParams r = params(1, 1, -1, 0, 0.05, M_PI / 2, 0.0);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> unif(0.0, 2.0 * M_PI);
  for (int t = 0; t < 10; ++t) {
    const double psi = unif(rng);
    CHECK(sl::psi_rhs(r, 2, psi) ==
          doctest::Approx(-r.eps * r.eps * std::sin(2.0 * psi))
              .epsilon(1e-12));
  }
}

TEST_CASE("psi_rhs agrees with the f-series difference at phi = (psi, 0)") {
  SLParams p = params(1, 1, -1, 0, 0.07, 1.1, 0.4);
  FourierSeries f1 = sl::f1_closed(p);
  FourierSeries f2 = sl::f2_closed(p);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> unif(0.0, 2.0 * M_PI);
  for (int t = 0; t < 25; ++t) {
    const double psi = unif(rng);
    const std::vector<double> phi{psi, 0.0};
    VecC v1 = f1.eval(phi), v2 = f2.eval(phi);
    const double expect =
        p.eps * (v1[0].real() - v1[1].real()) +
        p.eps * p.eps * (v2[0].real() - v2[1].real());
    CHECK(sl::psi_rhs(p, 2, psi) == doctest::Approx(expect).epsilon(1e-12));
  }

  // first order with delta != 0
  SLParams q = params(1, 1, -1, 0.25, 0.07, 1.1, 0.4);
  FourierSeries g1 = sl::f1_closed(q);
  for (int t = 0; t < 25; ++t) {
    const double psi = unif(rng);
    const std::vector<double> phi{psi, 0.0};
    VecC v1 = g1.eval(phi);
    CHECK(sl::psi_rhs(q, 1, psi) ==
          doctest::Approx(q.eps * (v1[0].real() - v1[1].real()))
              .epsilon(1e-12));
  }
}

TEST_CASE("e1/E1 closed forms: boundary and special values") {
  SLParams p = params(1, 1, -1, 0, 0.1, 0.0, 0.0);
  // rho = tau = 0 at phi = 0: cosine differences vanish
  FourierSeries e1 = sl::e1_closed(p);
  CHECK(e1.eval({0.0, 0.0}).cwiseAbs().maxCoeff() <= 1e-14);

  SLParams q = params(1, 1, -1, 0, 0.1, 0.7, 0.5);
  FourierSeries e1q = sl::e1_closed(q);
  PhaseHistoryField E1q = sl::E1_closed(q);
  FourierSeries tr = E1q.boundary_trace();
  for (const auto& [k, c] : e1q.modes())
    CHECK((tr.coeff(k) - c).cwiseAbs().maxCoeff() <= 1e-14);
  CHECK(E1q.reality_defect() <= 1e-14);

  // complex form check: first block equals R/(2a) e^{i phi1}[cos D1 - cos rho]
  // + R i s e^{i phi1 + i Omega s}[...] at sampled points
  const auto orb = sl::orbit(q);
  std::mt19937_64 rng(11);
  for (int t = 0; t < 15; ++t) {
    auto phi = testutil::random_phi(rng, 2);
    const double s = -q.tau * (t % 5) / 4.0;
    const double D1 = phi[1] - phi[0] - orb.Omega * q.tau + q.rho;
    Complex expect =
        orb.R / (2.0 * q.alpha) * std::polar(1.0, phi[0] + orb.Omega * s) *
            (std::cos(D1) - std::cos(q.rho)) +
        orb.R * Complex(0.0, 1.0) * s *
            std::polar(1.0, phi[0] + orb.Omega * s) *
            (std::sin(D1) - std::sin(q.rho));
    VecC v = E1q.eval(phi, s);
    CHECK(std::abs(Complex(v[0].real(), v[1].real()) - expect) <= 1e-12);
  }
}

TEST_CASE("reduced equilibria: symmetric pair always present") {
  SLParams p = params(1, 1, -1, 0, 0.05, 0.0, 0.0);
  auto eqs = sl::reduced_equilibria(p, 2);
  REQUIRE(eqs.size() >= 2);
  CHECK(eqs.front().psi == doctest::Approx(0.0).epsilon(1e-9));
  bool has_pi = false;
  for (const auto& e : eqs)
    if (std::abs(e.psi - M_PI) < 1e-8) has_pi = true;
  CHECK(has_pi);

  // rho - omega tau = 0, small eps: sync stable, antiphase unstable
  for (const auto& e : eqs) {
    if (std::abs(e.psi) < 1e-8) CHECK(e.stability == sl::Stability::Stable);
    if (std::abs(e.psi - M_PI) < 1e-8)
      CHECK(e.stability == sl::Stability::Unstable);
  }
}

TEST_CASE("integrate_reduced relaxes to the stable state") {
  SLParams p = params(1, 1, -1, 0, 0.05, 0.0, 0.0);
  auto traj = sl::integrate_reduced(p, 2, 0.4, 400.0, 0.05);
  CHECK(std::abs(traj.psi.back()) <= 1e-6);
  CHECK(traj.times.back() == doctest::Approx(400.0));
}
