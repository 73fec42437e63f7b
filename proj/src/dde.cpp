#include "phasered/dde.hpp"

#include <cmath>

namespace phasered::dde {

namespace {

constexpr double kTwoPi = 2.0 * M_PI;

double wrap_2pi(double x) {
  double y = std::fmod(x, kTwoPi);
  if (y < 0.0) y += kTwoPi;
  return y;
}

State history_value(const SLParams& p, const HistorySpec& h, double t) {
  const auto orb = sl::orbit(p);
  return {(orb.R + h.dr1) * std::polar(1.0, orb.Omega * t + h.phi1),
          (orb.R + h.dr2) * std::polar(1.0, orb.Omega * t + h.phi2)};
}

State hermite(double t, double t0, double h, const State& y0, const State& d0,
              const State& y1, const State& d1) {
  const double th = (t - t0) / h;
  const double th2 = th * th, th3 = th2 * th;
  const double h00 = 2 * th3 - 3 * th2 + 1;
  const double h10 = th3 - 2 * th2 + th;
  const double h01 = -2 * th3 + 3 * th2;
  const double h11 = th3 - th2;
  return {h00 * y0.z1 + h * h10 * d0.z1 + h01 * y1.z1 + h * h11 * d1.z1,
          h00 * y0.z2 + h * h10 * d0.z2 + h01 * y1.z2 + h * h11 * d1.z2};
}

}  // namespace

DdeTrajectory::DdeTrajectory(SLParams p, HistorySpec hist, double step,
                             int stride)
    : params_(p), hist_(hist), step_(step), stride_(stride) {}

void DdeTrajectory::append(double t, const State& y, const State& dy) {
  times_.push_back(t);
  states_.push_back(y);
  derivs_.push_back(dy);
}

State DdeTrajectory::value_at(double t) const {
  if (t <= 0.0) return history_value(params_, hist_, t);
  if (times_.empty() || t > times_.back() + 1e-9)
    throw std::out_of_range("value_at: t beyond trajectory");
  // recorded nodes are equally spaced at stride_*step_, except the last gap
  const double rec_h = stride_ * step_;
  std::size_t i = std::min<std::size_t>(
      static_cast<std::size_t>(t / rec_h), times_.size() - 1);
  while (i + 1 < times_.size() && times_[i + 1] <= t) ++i;
  while (i > 0 && times_[i] > t) --i;
  if (i + 1 == times_.size()) return states_.back();
  const double gap = times_[i + 1] - times_[i];
  return hermite(t, times_[i], gap, states_[i], derivs_[i], states_[i + 1],
                 derivs_[i + 1]);
}

double default_step(const SLParams& p) {
  const auto orb = sl::orbit(p);
  const double period = kTwoPi / std::abs(orb.Omega);
  const double base = (p.tau > 0.0 ? std::min(p.tau, period) : period) / 200.0;
  return aligned_step(p, base);
}

double aligned_step(const SLParams& p, double h_target) {
  if (h_target <= 0.0) throw std::invalid_argument("step must be positive");
  if (p.tau <= 0.0) return h_target;
  const double n = std::ceil(p.tau / h_target - 1e-12);
  return p.tau / n;
}

namespace {

struct Stepper {
  const SLParams& p;
  const HistorySpec& hist;
  double h;
  long n_delay;  // tau / h, 0 when tau == 0

  // dense ring buffer covering the last delay interval
  std::vector<State> ring_y;
  std::vector<State> ring_d;
  long current = -1;  // index of the newest completed node

  Complex lin, cub, rot;

  State& ry(long i) { return ring_y[i % ring_y.size()]; }
  State& rd(long i) { return ring_d[i % ring_y.size()]; }

  State delayed_at(double u, long known_up_to) {
    if (u <= 1e-15) return history_value(p, hist, u);
    long i = static_cast<long>(std::floor(u / h + 1e-9));
    if (i >= known_up_to) i = known_up_to - 1;
    if (i < current - static_cast<long>(ring_y.size()) + 2)
      throw std::logic_error("delay lookup fell out of the ring buffer");
    const double t0 = i * h;
    if (std::abs(u - t0) < 1e-12 * std::max(1.0, u)) return ry(i);
    return hermite(u, t0, h, ry(i), rd(i), ry(i + 1), rd(i + 1));
  }

  // RHS with the delayed pair supplied by the caller.
  State rhs(const State& y, const State& delayed) const {
    auto f = [&](Complex z) { return lin * z + cub * std::norm(z) * z; };
    return {f(y.z1) + p.eps * rot * (delayed.z2 - y.z1),
            f(y.z2) + p.eps * rot * (delayed.z1 - y.z2)};
  }

  State rhs_at(double t, const State& y, long known_up_to) {
    State del = (n_delay == 0) ? y : delayed_at(t - p.tau, known_up_to);
    return rhs(y, del);
  }
};

State axpy(const State& y, double a, const State& d) {
  return {y.z1 + a * d.z1, y.z2 + a * d.z2};
}

}  // namespace

DdeTrajectory integrate_dde(const SLParams& p, const HistorySpec& hist,
                            double t_end, const IntegrateOptions& opts) {
  p.validate();
  if (t_end < 0.0) throw std::invalid_argument("integrate_dde: t_end < 0");
  const double h = opts.step > 0.0 ? opts.step : default_step(p);
  long n_delay = 0;
  if (p.tau > 0.0) {
    const double ratio = p.tau / h;
    n_delay = std::lround(ratio);
    if (n_delay < 1 || std::abs(ratio - double(n_delay)) > 1e-9)
      throw std::invalid_argument(
          "integrate_dde: tau/h must be a positive integer");
  }
  const int stride = std::max(1, opts.record_stride);
  const auto orb = sl::orbit(p);
  const double lo = opts.divergence_lo * orb.R;
  const double hi = opts.divergence_hi * orb.R;

  DdeTrajectory traj(p, hist, h, stride);
  Stepper st{p,
             hist,
             h,
             n_delay,
             std::vector<State>(std::max<long>(n_delay + 2, 4)),
             std::vector<State>(std::max<long>(n_delay + 2, 4)),
             -1,
             Complex(p.alpha, p.beta),
             Complex(p.gamma, p.delta),
             std::polar(1.0, p.rho)};

  const long n_steps = std::lround(std::ceil(t_end / h - 1e-9));
  State y = history_value(p, hist, 0.0);
  State dy = st.rhs_at(0.0, y, 0);
  st.ry(0) = y;
  st.rd(0) = dy;
  st.current = 0;
  traj.append(0.0, y, dy);

  for (long k = 0; k < n_steps; ++k) {
    const double t = k * h;
    // Stage lookups at t+h/2 and t+h reach back at most to t - tau + h,
    // inside the completed segment [t - tau, t - tau + h] whenever tau >= h.
    State k1 = st.rhs_at(t, y, k + 1);
    State k2 = st.rhs_at(t + 0.5 * h, axpy(y, 0.5 * h, k1), k + 1);
    State k3 = st.rhs_at(t + 0.5 * h, axpy(y, 0.5 * h, k2), k + 1);
    State k4 = st.rhs_at(t + h, axpy(y, h, k3), k + 1);
    State incr{(k1.z1 + 2.0 * k2.z1 + 2.0 * k3.z1 + k4.z1) / 6.0,
               (k1.z2 + 2.0 * k2.z2 + 2.0 * k3.z2 + k4.z2) / 6.0};
    y = axpy(y, h, incr);
    const double t_next = (k + 1) * h;
    dy = st.rhs_at(t_next, y, k + 1);
    st.ry(k + 1) = y;
    st.rd(k + 1) = dy;
    st.current = k + 1;

    const double a1 = std::abs(y.z1), a2 = std::abs(y.z2);
    if (a1 < lo || a1 > hi || a2 < lo || a2 > hi)
      throw SolverError("integrate_dde: divergence detector tripped");

    if ((k + 1) % stride == 0 || k + 1 == n_steps)
      traj.append(t_next, y, dy);
  }
  return traj;
}

double phase_difference(const DdeTrajectory& traj, double t) {
  State s = traj.value_at(t);
  if (std::abs(s.z1) < 1e-6 || std::abs(s.z2) < 1e-6)
    throw SolverError("phase_difference: amplitude too small");
  return wrap_2pi(std::arg(s.z1) - std::arg(s.z2));
}

AttractorClass classify_attractor(const SLParams& p, double psi0, double t_end,
                                  double threshold,
                                  const IntegrateOptions& opts) {
  IntegrateOptions o = opts;
  if (o.record_stride <= 1) o.record_stride = 64;
  DdeTrajectory traj = integrate_dde(p, HistorySpec{psi0, 0.0}, t_end, o);
  const double psi = phase_difference(traj, traj.t_end());
  AttractorClass out;
  out.psi_final = psi;
  const double dist0 = std::min(psi, kTwoPi - psi);
  if (dist0 < threshold)
    out.kind = AttractorKind::Sync;
  else if (std::abs(psi - M_PI) < threshold)
    out.kind = AttractorKind::Antiphase;
  else
    out.kind = AttractorKind::Other;
  return out;
}

DriftEstimate measured_drift(const SLParams& p, double psi0, double t0,
                             double t1, const IntegrateOptions& opts) {
  if (!(t1 > t0) || t0 < 0.0)
    throw std::invalid_argument("measured_drift: bad window");
  DdeTrajectory traj = integrate_dde(p, HistorySpec{psi0, 0.0}, t1, opts);

  // unwrapped phase difference at the recorded nodes inside the window
  std::vector<double> ts, psis;
  double prev = 0.0;
  bool have_prev = false;
  double offset = 0.0;
  for (std::size_t i = 0; i < traj.times().size(); ++i) {
    const State& s = traj.states()[i];
    double raw = std::arg(s.z1) - std::arg(s.z2);
    if (have_prev) {
      while (raw + offset - prev > M_PI) offset -= kTwoPi;
      while (raw + offset - prev < -M_PI) offset += kTwoPi;
    }
    double unwrapped = raw + offset;
    prev = unwrapped;
    have_prev = true;
    if (traj.times()[i] >= t0 - 1e-12) {
      ts.push_back(traj.times()[i]);
      psis.push_back(unwrapped);
    }
  }
  if (ts.size() < 2) throw std::invalid_argument("measured_drift: empty window");

  double t_mean = 0.0, p_mean = 0.0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    t_mean += ts[i];
    p_mean += psis[i];
  }
  t_mean /= ts.size();
  p_mean /= ts.size();
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    num += (ts[i] - t_mean) * (psis[i] - p_mean);
    den += (ts[i] - t_mean) * (ts[i] - t_mean);
  }
  DriftEstimate est;
  est.slope = num / den;

  // phase at the window center, interpolated between recorded samples
  const double t_mid = 0.5 * (t0 + t1);
  std::size_t j = 0;
  while (j + 1 < ts.size() && ts[j + 1] < t_mid) ++j;
  if (j + 1 < ts.size()) {
    const double w = (t_mid - ts[j]) / (ts[j + 1] - ts[j]);
    est.psi_mid = (1.0 - w) * psis[j] + w * psis[j + 1];
  } else {
    est.psi_mid = psis.back();
  }
  return est;
}

}  // namespace phasered::dde
