// Python bindings for the main operations: orbit data, closed forms, the
// generic reduction, eigenvalue curves, bands, and DDE runs.

#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "phasered/bifurcation.hpp"
#include "phasered/dde.hpp"
#include "phasered/serialize.hpp"
#include "phasered/stuart_landau.hpp"

namespace py = pybind11;
using namespace phasered;

namespace {

std::vector<double> eval_series(const FourierSeries& s,
                                const std::vector<double>& phi) {
  VecR v = s.eval(phi).real();
  return std::vector<double>(v.data(), v.data() + v.size());
}

sl::SLParams make_params(double alpha, double beta, double gamma, double delta,
                         double eps, double rho, double tau) {
  sl::SLParams p{alpha, beta, gamma, delta, eps, rho, tau};
  p.validate();
  return p;
}

}  // namespace

PYBIND11_MODULE(_phasered, m) {
  m.doc() = "phase reduction for delay-coupled Stuart-Landau oscillators";

  py::register_exception<SolverError>(m, "SolverError");

  py::class_<sl::SLParams>(m, "SLParams")
      .def(py::init(&make_params), py::arg("alpha") = 1.0,
           py::arg("beta") = 1.0, py::arg("gamma") = -1.0,
           py::arg("delta") = 0.0, py::arg("eps") = 0.1, py::arg("rho") = 0.0,
           py::arg("tau") = 0.0)
      .def_readwrite("alpha", &sl::SLParams::alpha)
      .def_readwrite("beta", &sl::SLParams::beta)
      .def_readwrite("gamma", &sl::SLParams::gamma)
      .def_readwrite("delta", &sl::SLParams::delta)
      .def_readwrite("eps", &sl::SLParams::eps)
      .def_readwrite("rho", &sl::SLParams::rho)
      .def_readwrite("tau", &sl::SLParams::tau);

  py::class_<sl::OrbitData>(m, "OrbitData")
      .def_readonly("R", &sl::OrbitData::R)
      .def_readonly("Omega", &sl::OrbitData::Omega);

  py::class_<FourierSeries>(m, "FourierSeries")
      .def("eval", &eval_series, py::arg("phi"))
      .def("mode_count", &FourierSeries::mode_count)
      .def("to_json", [](const FourierSeries& s) { return to_json(s).dump(); });

  py::class_<Expansion>(m, "Expansion")
      .def("orders", &Expansion::orders)
      .def_readonly("omega", &Expansion::omega)
      .def("f", [](const Expansion& e, int ell) { return e.f.at(ell); },
           py::arg("order"))
      .def("e", [](const Expansion& e, int ell) { return e.e.at(ell); },
           py::arg("order"))
      .def("to_json", [](const Expansion& e) { return to_json(e).dump(); });

  m.def("orbit", &sl::orbit, py::arg("params"));
  m.def("f1_closed", &sl::f1_closed, py::arg("params"));
  m.def("f2_closed", &sl::f2_closed, py::arg("params"));
  m.def("psi_rhs", &sl::psi_rhs, py::arg("params"), py::arg("order"),
        py::arg("psi"));
  m.def(
      "reduce",
      [](const sl::SLParams& p, int max_order, int trunc) {
        return sl::reduce(p, max_order, trunc);
      },
      py::arg("params"), py::arg("max_order") = 2, py::arg("trunc") = 8);
  m.def(
      "conjugacy_residual",
      [](const Expansion& exp, const sl::SLParams& p, double eps) {
        auto r = conjugacy_residual(exp, sl::make_model(p), eps);
        return py::make_tuple(r.r_fin, r.r_tr);
      },
      py::arg("expansion"), py::arg("params"), py::arg("eps"));

  m.def(
      "eigenvalues",
      [](const sl::SLParams& p) {
        auto ev = bif::eigenvalues(p);
        return py::make_tuple(ev.lambda_sync, ev.lambda_splay);
      },
      py::arg("params"));
  m.def(
      "rho_zero_numeric",
      [](const std::string& kind, const std::string& branch, double eps,
         double tau, const sl::SLParams& p) {
        return bif::rho_zero_numeric(
            kind == "sync" ? bif::CurveKind::Sync : bif::CurveKind::Splay,
            branch == "3pi/2" ? bif::Branch::ThreeHalfPi : bif::Branch::HalfPi,
            eps, tau, p);
      },
      py::arg("kind"), py::arg("branch"), py::arg("eps"), py::arg("tau"),
      py::arg("params"));
  m.def(
      "rho_taylor",
      [](const std::string& kind, const std::string& branch, double eps,
         double tau, const sl::SLParams& p) {
        return bif::rho_taylor(
            kind == "sync" ? bif::CurveKind::Sync : bif::CurveKind::Splay,
            branch == "3pi/2" ? bif::Branch::ThreeHalfPi : bif::Branch::HalfPi,
            eps, tau, p);
      },
      py::arg("kind"), py::arg("branch"), py::arg("eps"), py::arg("tau"),
      py::arg("params"));
  m.def(
      "bistability_band",
      [](const std::string& branch, double eps, double tau,
         const sl::SLParams& p) -> py::object {
        auto band = bif::bistability_band(
            branch == "3pi/2" ? bif::Branch::ThreeHalfPi : bif::Branch::HalfPi,
            eps, tau, p);
        if (band.empty) return py::none();
        return py::make_tuple(band.rho_lo, band.rho_hi);
      },
      py::arg("branch"), py::arg("eps"), py::arg("tau"), py::arg("params"));

  m.def(
      "classify_attractor",
      [](const sl::SLParams& p, double psi0, double t_end) {
        auto c = dde::classify_attractor(p, psi0, t_end);
        return py::make_tuple(bif::attractor_name(c.kind), c.psi_final);
      },
      py::arg("params"), py::arg("psi0"), py::arg("t_end") = 1000.0);
  m.def(
      "integrate_dde",
      [](const sl::SLParams& p, double psi0, double t_end, int stride) {
        dde::IntegrateOptions opts;
        opts.record_stride = stride;
        auto traj =
            dde::integrate_dde(p, dde::HistorySpec{psi0, 0.0}, t_end, opts);
        std::vector<double> t(traj.times());
        std::vector<std::pair<std::complex<double>, std::complex<double>>> z;
        z.reserve(traj.states().size());
        for (const auto& s : traj.states()) z.emplace_back(s.z1, s.z2);
        return py::make_tuple(std::move(t), std::move(z));
      },
      py::arg("params"), py::arg("psi0"), py::arg("t_end"),
      py::arg("stride") = 1);
  m.def(
      "measured_drift",
      [](const sl::SLParams& p, double psi0, double t0, double t1) {
        auto d = dde::measured_drift(p, psi0, t0, t1);
        return py::make_tuple(d.slope, d.psi_mid);
      },
      py::arg("params"), py::arg("psi0"), py::arg("t0"), py::arg("t1"));
}
