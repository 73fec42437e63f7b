#include "phasered/serialize.hpp"

namespace phasered {

using nlohmann::json;

json to_json(const FourierSeries& s) {
  json j;
  j["m"] = s.torus_dim();
  j["dim_out"] = s.dim_out();
  j["K"] = s.trunc();
  json modes = json::array();
  for (const auto& [k, c] : s.modes()) {
    json mode;
    mode["k"] = k;
    std::vector<double> re(c.size()), im(c.size());
    for (int i = 0; i < c.size(); ++i) {
      re[i] = c[i].real();
      im[i] = c[i].imag();
    }
    mode["re"] = re;
    mode["im"] = im;
    modes.push_back(std::move(mode));
  }
  j["modes"] = std::move(modes);
  return j;
}

FourierSeries series_from_json(const json& j) {
  FourierSeries s(j.at("m").get<int>(), j.at("dim_out").get<int>(), 1,
                  j.at("K").get<int>(), false);
  for (const auto& mode : j.at("modes")) {
    auto k = mode.at("k").get<MultiIndex>();
    auto re = mode.at("re").get<std::vector<double>>();
    auto im = mode.at("im").get<std::vector<double>>();
    VecC c(re.size());
    for (std::size_t i = 0; i < re.size(); ++i) c[i] = Complex(re[i], im[i]);
    s.set_coeff(k, c);
  }
  if (s.reality_defect() < 1e-12 * std::max(1.0, s.max_abs()))
    s.set_real_valued(true);
  return s;
}

json to_json(const PhaseHistoryField& f) {
  json j;
  j["m"] = f.torus_dim();
  j["dim_out"] = f.dim_out();
  j["tau"] = f.tau();
  json terms = json::array();
  for (const auto& t : f.terms()) {
    json term;
    term["k"] = t.k;
    term["p"] = t.s_power;
    term["q"] = t.s_freq;
    std::vector<double> re(t.coeff.size()), im(t.coeff.size());
    for (int i = 0; i < t.coeff.size(); ++i) {
      re[i] = t.coeff[i].real();
      im[i] = t.coeff[i].imag();
    }
    term["re"] = re;
    term["im"] = im;
    terms.push_back(std::move(term));
  }
  j["terms"] = std::move(terms);
  return j;
}

PhaseHistoryField history_from_json(const json& j) {
  PhaseHistoryField f(j.at("m").get<int>(), j.at("dim_out").get<int>(),
                      j.at("tau").get<double>(), false);
  for (const auto& term : j.at("terms")) {
    auto k = term.at("k").get<MultiIndex>();
    auto re = term.at("re").get<std::vector<double>>();
    auto im = term.at("im").get<std::vector<double>>();
    VecC c(re.size());
    for (std::size_t i = 0; i < re.size(); ++i) c[i] = Complex(re[i], im[i]);
    f.add_term({k, term.at("p").get<int>(), term.at("q").get<double>(), c});
  }
  if (f.reality_defect() < 1e-12 * std::max(1.0, f.max_abs()))
    f.set_real_valued(true);
  return f;
}

json to_json(const Expansion& e) {
  json j;
  j["omega"] = e.omega;
  j["orders"] = e.orders();
  json f = json::array(), em = json::array(), E = json::array();
  for (const auto& s : e.f) f.push_back(to_json(s));
  for (const auto& s : e.e) em.push_back(to_json(s));
  for (const auto& h : e.E) E.push_back(to_json(h));
  j["f"] = std::move(f);
  j["e"] = std::move(em);
  j["E"] = std::move(E);
  return j;
}

Expansion expansion_from_json(const json& j) {
  Expansion e;
  e.omega = j.at("omega").get<std::vector<double>>();
  for (const auto& s : j.at("f")) e.f.push_back(series_from_json(s));
  for (const auto& s : j.at("e")) e.e.push_back(series_from_json(s));
  for (const auto& h : j.at("E")) e.E.push_back(history_from_json(h));
  return e;
}

}  // namespace phasered
