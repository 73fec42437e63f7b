// phasered: phase reduction of delay-coupled Stuart-Landau oscillators.
//
// Subcommands: reduce, simulate-dde, simulate-phase, curves, sweep, residual.
// Every output file starts with a header carrying the hash of the canonical
// run configuration; re-running from the emitted config reproduces outputs
// byte for byte. Exit codes: 0 ok, 2 solver error, 3 I/O error.

#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "phasered/bifurcation.hpp"
#include "phasered/config.hpp"
#include "phasered/dde.hpp"
#include "phasered/homological.hpp"
#include "phasered/serialize.hpp"
#include "phasered/stuart_landau.hpp"

namespace fs = std::filesystem;
using namespace phasered;

namespace {

struct CommonArgs {
  std::string config_path;
  std::string out_dir = ".";
  long long seed = 0;
  bool seed_set = false;
  std::map<std::string, double> model_overrides;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config_path, "config file (key=value lines)");
  cmd->add_option("--out", args.out_dir, "output directory");
  cmd->add_option_function<long long>(
      "--seed", [&args](long long v) { args.seed = v; args.seed_set = true; },
      "RNG seed");
  for (const char* name :
       {"alpha", "beta", "gamma", "delta", "eps", "rho", "tau"}) {
    cmd->add_option_function<double>(
        std::string("--") + name,
        [&args, name](double v) { args.model_overrides[name] = v; },
        std::string("model override ") + name);
  }
}

RunConfig build_config(const CommonArgs& args) {
  RunConfig cfg;
  if (!args.config_path.empty()) cfg = RunConfig::load_file(args.config_path);
  if (!cfg.has("model.alpha")) cfg.set_sl_params(sl::SLParams{});
  for (const auto& [name, value] : args.model_overrides)
    cfg.set_num("model." + name, value);
  if (args.seed_set) cfg.set_int("seed", args.seed);
  return cfg;
}

std::ofstream open_output(const CommonArgs& args, const std::string& name) {
  fs::path dir(args.out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  std::ofstream out(dir / name, std::ios::binary);
  if (!out) throw IoError("cannot open output file: " + (dir / name).string());
  return out;
}

void emit_config(const CommonArgs& args, const RunConfig& cfg) {
  auto out = open_output(args, "config.txt");
  out << cfg.canonical_text();
}

std::string mode_line(const MultiIndex& k, const VecC& a, const VecC& b) {
  std::string line = "  k=(";
  for (std::size_t j = 0; j < k.size(); ++j) {
    line += std::to_string(k[j]);
    if (j + 1 < k.size()) line += ",";
  }
  line += ")";
  char buf[160];
  double dev = 0.0;
  for (int i = 0; i < a.size(); ++i)
    dev = std::max(dev, std::abs(a[i] - b[i]));
  std::snprintf(buf, sizeof buf, "  [% .6e % .6e | % .6e % .6e]  dev=%.2e",
                a[0].real(), a[0].imag(), b[0].real(), b[0].imag(), dev);
  line += buf;
  return line;
}

double series_max_dev(const FourierSeries& a, const FourierSeries& b) {
  double dev = 0.0;
  for (const auto& [k, c] : a.modes())
    dev = std::max(dev, (c - b.coeff(k)).cwiseAbs().maxCoeff());
  for (const auto& [k, c] : b.modes())
    dev = std::max(dev, (c - a.coeff(k)).cwiseAbs().maxCoeff());
  return dev;
}

int cmd_reduce(const CommonArgs& args, RunConfig cfg,
               const std::string& emit_path, int order_flag, int trunc_flag) {
  if (order_flag >= 0) cfg.set_int("solver.order", order_flag);
  if (trunc_flag > 0) cfg.set_int("solver.trunc", trunc_flag);
  const int order = int(cfg.get_int("solver.order", 2));
  const int trunc = int(cfg.get_int("solver.trunc", 8));
  sl::SLParams p = cfg.sl_params();
  p.validate();

  std::vector<NearResonance> warnings;
  Expansion exp = sl::reduce(p, order, trunc, &warnings);
  emit_config(args, cfg);

  auto report = open_output(args, "report.txt");
  std::ostringstream body;
  body << "# config=" << cfg.hash() << "\n";
  body << "phase reduction report\n";
  const auto orb = sl::orbit(p);
  body << "model: alpha=" << format_num(p.alpha) << " beta=" << format_num(p.beta)
       << " gamma=" << format_num(p.gamma) << " delta=" << format_num(p.delta)
       << " eps=" << format_num(p.eps) << " rho=" << format_num(p.rho)
       << " tau=" << format_num(p.tau) << "\n";
  body << "orbit: R=" << format_num(orb.R) << " Omega=" << format_num(orb.Omega)
       << "\n";
  body << "orders computed: 0.." << exp.orders() << ", truncation K=" << trunc
       << "\n";

  if (p.eps == 0.0)
    body << "eps=0: constant-frequency phase dynamics, f = (Omega, Omega)\n";

  if (exp.orders() >= 1) {
    FourierSeries f1c = sl::f1_closed(p);
    body << "order 1 modes (reduce | closed form):\n";
    for (const auto& [k, c] : exp.f[1].modes())
      body << mode_line(k, c, f1c.coeff(k)) << "\n";
    body << "max coefficient deviation, order 1: "
         << format_num(series_max_dev(exp.f[1], f1c)) << "\n";
  }
  if (exp.orders() >= 2) {
    if (p.delta == 0.0) {
      FourierSeries f2c = sl::f2_closed(p);
      body << "order 2 modes (reduce | closed form):\n";
      for (const auto& [k, c] : exp.f[2].modes())
        body << mode_line(k, c, f2c.coeff(k)) << "\n";
      body << "max coefficient deviation, order 2: "
           << format_num(series_max_dev(exp.f[2], f2c)) << "\n";
    } else {
      body << "order 2 computed (no closed form for delta != 0)\n";
    }
  }
  if (!warnings.empty()) {
    body << "near-resonant divisors:\n";
    for (const auto& w : warnings) {
      body << "  k=(";
      for (std::size_t j = 0; j < w.k.size(); ++j) {
        body << w.k[j];
        if (j + 1 < w.k.size()) body << ",";
      }
      body << ") divisor=" << format_num(w.divisor) << "\n";
    }
  }
  report << body.str();
  std::cout << body.str();

  if (!emit_path.empty()) {
    nlohmann::json j;
    j["config_hash"] = cfg.hash();
    j["expansion"] = to_json(exp);
    fs::path target(emit_path);
    if (!target.is_absolute()) target = fs::path(args.out_dir) / target;
    std::ofstream out(target, std::ios::binary);
    if (!out) throw IoError("cannot open output file: " + target.string());
    out << j.dump(2) << "\n";
  }
  return 0;
}

int cmd_simulate_dde(const CommonArgs& args, RunConfig cfg) {
  sl::SLParams p = cfg.sl_params();
  p.validate();
  const double t_end = cfg.get_num("dde.t_end", 100.0);
  const double psi0 = cfg.get_num("dde.psi0", 0.3);
  dde::IntegrateOptions opts;
  opts.step = cfg.get_num("dde.step", 0.0);
  if (opts.step > 0.0) opts.step = dde::aligned_step(p, opts.step);
  opts.record_stride = int(cfg.get_int("dde.stride", 1));
  auto traj = dde::integrate_dde(p, dde::HistorySpec{psi0, 0.0}, t_end, opts);

  emit_config(args, cfg);
  auto out = open_output(args, "trajectory.csv");
  out << "# config=" << cfg.hash() << "\n";
  out << "t,re_z1,im_z1,re_z2,im_z2,psi\n";
  for (std::size_t i = 0; i < traj.times().size(); ++i) {
    const auto& s = traj.states()[i];
    out << format_num(traj.times()[i]) << ',' << format_num(s.z1.real()) << ','
        << format_num(s.z1.imag()) << ',' << format_num(s.z2.real()) << ','
        << format_num(s.z2.imag()) << ','
        << format_num(dde::phase_difference(traj, traj.times()[i])) << "\n";
  }
  return 0;
}

int cmd_simulate_phase(const CommonArgs& args, RunConfig cfg) {
  sl::SLParams p = cfg.sl_params();
  p.validate();
  const int order = int(cfg.get_int("phase.order", 2));
  const double t_end = cfg.get_num("phase.t_end", 100.0);
  const double step = cfg.get_num("phase.step", 0.05);
  const double psi0 = cfg.get_num("phase.psi0", 0.3);
  auto traj = sl::integrate_reduced(p, order, psi0, t_end, step);

  emit_config(args, cfg);
  auto out = open_output(args, "phase.csv");
  out << "# config=" << cfg.hash() << "\n";
  out << "t,psi\n";
  for (std::size_t i = 0; i < traj.times.size(); ++i)
    out << format_num(traj.times[i]) << ',' << format_num(traj.psi[i]) << "\n";
  return 0;
}

int cmd_curves(const CommonArgs& args, RunConfig cfg) {
  sl::SLParams p = cfg.sl_params();
  p.validate();
  const double tau_min = cfg.get_num("curves.tau_min", 0.0);
  const double tau_max = cfg.get_num("curves.tau_max", 2.0);
  const int count = int(cfg.get_int("curves.tau_count", 21));
  const std::string branch_name = cfg.get("curves.branch", "pi/2");
  const bif::Branch branch = branch_name == "3pi/2" ? bif::Branch::ThreeHalfPi
                                                    : bif::Branch::HalfPi;

  emit_config(args, cfg);
  auto out = open_output(args, "curves.csv");
  out << "# config=" << cfg.hash() << "\n";
  out << "tau,rho_sync_numeric,rho_splay_numeric,rho_sync_taylor,"
         "rho_splay_taylor\n";
  for (int i = 0; i < count; ++i) {
    const double tau =
        count > 1 ? tau_min + (tau_max - tau_min) * i / double(count - 1)
                  : tau_min;
    double sync_n = std::numeric_limits<double>::quiet_NaN();
    double splay_n = std::numeric_limits<double>::quiet_NaN();
    try {
      sync_n = bif::rho_zero_numeric(bif::CurveKind::Sync, branch, p.eps, tau, p);
    } catch (const SolverError&) {
    }
    try {
      splay_n =
          bif::rho_zero_numeric(bif::CurveKind::Splay, branch, p.eps, tau, p);
    } catch (const SolverError&) {
    }
    out << format_num(tau) << ',' << format_num(sync_n) << ','
        << format_num(splay_n) << ','
        << format_num(bif::rho_taylor(bif::CurveKind::Sync, branch, p.eps, tau, p))
        << ','
        << format_num(
               bif::rho_taylor(bif::CurveKind::Splay, branch, p.eps, tau, p))
        << "\n";
  }
  return 0;
}

int cmd_sweep(const CommonArgs& args, RunConfig cfg) {
  sl::SLParams p = cfg.sl_params();
  p.validate();
  bif::SweepGrid grid;
  grid.rho_min = cfg.get_num("sweep.rho_min", grid.rho_min);
  grid.rho_max = cfg.get_num("sweep.rho_max", grid.rho_max);
  grid.rho_count = int(cfg.get_int("sweep.rho_count", grid.rho_count));
  grid.tau_min = cfg.get_num("sweep.tau_min", grid.tau_min);
  grid.tau_max = cfg.get_num("sweep.tau_max", grid.tau_max);
  grid.tau_count = int(cfg.get_int("sweep.tau_count", grid.tau_count));
  bif::SweepOptions opts;
  opts.mode = cfg.get("sweep.mode", "dde") == "reduced"
                  ? bif::SweepMode::Reduced
                  : bif::SweepMode::Dde;
  opts.probe1 = cfg.get_num("sweep.probe1", opts.probe1);
  opts.probe2 = cfg.get_num("sweep.probe2", opts.probe2);
  opts.random_probes = cfg.get_int("sweep.random", 0) != 0;
  opts.seed = std::uint64_t(cfg.get_int("seed", 0));
  opts.t_end = cfg.get_num("sweep.t_end", opts.t_end);
  opts.threads = int(cfg.get_int("sweep.threads", 0));

  bif::SweepTable table = bif::sweep(grid, p, opts);

  emit_config(args, cfg);
  auto csv = open_output(args, "sweep.csv");
  csv << "# config=" << cfg.hash() << "\n";
  bif::write_sweep_csv(csv, table);
  auto svg = open_output(args, "sweep.svg");
  svg << "<!-- config=" << cfg.hash() << " -->\n";
  bif::write_sweep_svg(svg, table, p, p.eps);
  return 0;
}

int cmd_residual(const CommonArgs& args, RunConfig cfg) {
  sl::SLParams p = cfg.sl_params();
  p.validate();
  const int trunc = int(cfg.get_int("solver.trunc", 8));
  const double eps_hi = cfg.get_num("residual.eps_hi", 0.02);
  const double eps_lo = cfg.get_num("residual.eps_lo", 0.01);
  const int max_order = int(cfg.get_int("solver.order", 2));

  emit_config(args, cfg);
  auto out = open_output(args, "residual.txt");
  std::ostringstream body;
  body << "# config=" << cfg.hash() << "\n";
  body << "conjugacy residual scaling, eps " << format_num(eps_hi) << " vs "
       << format_num(eps_lo) << "\n";
  ModelSpec model = sl::make_model(p);
  for (int order = 1; order <= max_order; ++order) {
    if (order == 2 && p.delta != 0.0) {
      body << "order 2 skipped (delta != 0)\n";
      break;
    }
    Expansion exp = sl::reduce(p, order, trunc);
    auto r_hi = conjugacy_residual(exp, model, eps_hi);
    auto r_lo = conjugacy_residual(exp, model, eps_lo);
    body << "order " << order << ": r_fin(" << format_num(eps_hi)
         << ")=" << format_num(r_hi.r_fin) << " r_fin(" << format_num(eps_lo)
         << ")=" << format_num(r_lo.r_fin)
         << " ratio=" << format_num(r_hi.r_fin / r_lo.r_fin) << "\n";
    body << "order " << order << ": r_tr(" << format_num(eps_hi)
         << ")=" << format_num(r_hi.r_tr) << " r_tr(" << format_num(eps_lo)
         << ")=" << format_num(r_lo.r_tr)
         << " ratio=" << format_num(r_hi.r_tr / r_lo.r_tr) << "\n";
  }
  out << body.str();
  std::cout << body.str();
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"phase reduction toolkit for delay-coupled oscillators"};
  app.require_subcommand(1);

  CommonArgs args;
  std::string emit_path;
  int order_flag = -1;
  int trunc_flag = 0;

  CLI::App* reduce = app.add_subcommand("reduce", "order-by-order reduction");
  add_common(reduce, args);
  reduce->add_option("--order", order_flag, "expansion order (0..2)");
  reduce->add_option("--k,--trunc", trunc_flag, "normal-form truncation K");
  reduce->add_option("--emit-coefficients", emit_path,
                     "write expansion coefficients to this JSON file");

  std::map<std::string, std::string> extra;
  auto key_flag = [&extra](CLI::App* sub, const std::string& flag,
                           const std::string& key, const std::string& help) {
    sub->add_option_function<std::string>(
        flag, [&extra, key](const std::string& v) { extra[key] = v; }, help);
  };

  CLI::App* sim_dde = app.add_subcommand("simulate-dde", "integrate the DDE");
  add_common(sim_dde, args);
  key_flag(sim_dde, "--t-end", "dde.t_end", "integration horizon");
  key_flag(sim_dde, "--step", "dde.step", "step size (aligned to tau)");
  key_flag(sim_dde, "--psi0", "dde.psi0", "initial phase difference");
  key_flag(sim_dde, "--stride", "dde.stride", "record every k-th node");

  CLI::App* sim_phase =
      app.add_subcommand("simulate-phase", "integrate the reduced phase ODE");
  add_common(sim_phase, args);
  key_flag(sim_phase, "--order", "phase.order", "reduction order (1 or 2)");
  key_flag(sim_phase, "--t-end", "phase.t_end", "integration horizon");
  key_flag(sim_phase, "--step", "phase.step", "RK4 step");
  key_flag(sim_phase, "--psi0", "phase.psi0", "initial phase difference");

  CLI::App* curves =
      app.add_subcommand("curves", "stability boundary curves in rho");
  add_common(curves, args);
  key_flag(curves, "--tau-min", "curves.tau_min", "smallest delay");
  key_flag(curves, "--tau-max", "curves.tau_max", "largest delay");
  key_flag(curves, "--tau-count", "curves.tau_count", "grid size");
  key_flag(curves, "--branch", "curves.branch", "pi/2 or 3pi/2");

  CLI::App* sweep_cmd =
      app.add_subcommand("sweep", "(rho, tau) parameter-plane sweep");
  add_common(sweep_cmd, args);
  key_flag(sweep_cmd, "--mode", "sweep.mode", "dde or reduced");
  key_flag(sweep_cmd, "--rho-count", "sweep.rho_count", "rho grid size");
  key_flag(sweep_cmd, "--tau-count", "sweep.tau_count", "tau grid size");
  key_flag(sweep_cmd, "--tau-max", "sweep.tau_max", "largest delay");
  key_flag(sweep_cmd, "--t-end", "sweep.t_end", "per-cell horizon");
  key_flag(sweep_cmd, "--random-probes", "sweep.random",
           "1: draw seeded uniform psi0 per cell");
  key_flag(sweep_cmd, "--threads", "sweep.threads", "worker threads");

  CLI::App* residual =
      app.add_subcommand("residual", "conjugacy residual scaling report");
  add_common(residual, args);
  key_flag(residual, "--order", "solver.order", "highest expansion order");
  key_flag(residual, "--eps-hi", "residual.eps_hi", "larger coupling");
  key_flag(residual, "--eps-lo", "residual.eps_lo", "smaller coupling");

  for (CLI::App* sub :
       {reduce, sim_dde, sim_phase, curves, sweep_cmd, residual}) {
    sub->add_option_function<std::string>(
        "--set",
        [&extra](const std::string& kv) {
          const auto eq = kv.find('=');
          if (eq == std::string::npos)
            throw CLI::ValidationError("--set expects key=value");
          extra[kv.substr(0, eq)] = kv.substr(eq + 1);
        },
        "override a config key (key=value, repeatable)");
  }

  CLI11_PARSE(app, argc, argv);

  try {
    RunConfig cfg = build_config(args);
    for (const auto& [k, v] : extra) cfg.set(k, v);

    if (reduce->parsed())
      return cmd_reduce(args, cfg, emit_path, order_flag, trunc_flag);
    if (sim_dde->parsed()) return cmd_simulate_dde(args, cfg);
    if (sim_phase->parsed()) return cmd_simulate_phase(args, cfg);
    if (curves->parsed()) return cmd_curves(args, cfg);
    if (sweep_cmd->parsed()) return cmd_sweep(args, cfg);
    if (residual->parsed()) return cmd_residual(args, cfg);
  } catch (const IoError& err) {
    std::cerr << "io error: " << err.what() << "\n";
    return 3;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 2;
  }
  return 0;
}
