#ifndef DXXZ_EVOLUTION_HPP
#define DXXZ_EVOLUTION_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <vector>

#include "dxxz/errors.hpp"
#include "dxxz/linalg.hpp"
#include "dxxz/operators.hpp"
#include "dxxz/spin_basis.hpp"

namespace dxxz {

struct EvolutionConfig {
  int steps_per_period = 64;
  double t_max = 0.0;
  std::vector<double> snapshot_times;
  int krylov_dim = 20;
  double tolerance = 1e-10;
  bool store_states = true;

  void validate() const {
    if (steps_per_period < 8) throw InvalidArgument("steps_per_period must be >= 8");
    if (krylov_dim < 2) throw InvalidArgument("krylov_dim must be >= 2");
    if (!(tolerance > 0)) throw InvalidArgument("tolerance must be positive");
    for (double s : snapshot_times)
      if (s < 0 || s > t_max + 1e-12)
        throw InvalidArgument("snapshot times must lie in [0, t_max]");
    if (!std::is_sorted(snapshot_times.begin(), snapshot_times.end()))
      throw InvalidArgument("snapshot times must be sorted");
  }
};

// Snapshot record of a run. No renormalization ever happens along the way;
// norm_drift is the honest diagnostic (accepted runs stay below 1e-7).
struct Trajectory {
  std::vector<double> times;
  std::vector<StateVector> states;  // filled only when store_states
  double norm_drift = 0.0;
  double energy_drift = 0.0;  // static runs: max relative change of <H>
};

using SnapshotFn = std::function<void(double t, const StateVector& psi)>;

namespace evolution_detail {

inline cplx dot(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  cplx s = 0;
  for (std::size_t k = 0; k < a.size(); ++k) s += std::conj(a[k]) * b[k];
  return s;
}

inline double nrm(const std::vector<cplx>& a) {
  double s = 0;
  for (const cplx& v : a) s += std::norm(v);
  return std::sqrt(s);
}

// y = exp(-i dt T) e_1 for the symmetric tridiagonal T (alpha, beta), via the
// dense eigendecomposition of T. Sizes here are <= krylov_dim.
inline std::vector<cplx> tridiag_expm_e1(const std::vector<double>& alpha,
                                         const std::vector<double>& beta, double dt) {
  const std::size_t k = alpha.size();
  std::vector<double> d = alpha, e(k, 0.0);
  for (std::size_t i = 1; i < k; ++i) e[i] = beta[i - 1];
  std::vector<double> z(k * k, 0.0);
  for (std::size_t i = 0; i < k; ++i) z[i * k + i] = 1.0;
  linalg_detail::tridiag_ql(d, e, k, &z);
  std::vector<cplx> y(k, 0.0);
  for (std::size_t l = 0; l < k; ++l) {
    const cplx phase = cplx(std::cos(d[l] * dt), -std::sin(d[l] * dt)) * z[0 * k + l];
    for (std::size_t row = 0; row < k; ++row) y[row] += z[row * k + l] * phase;
  }
  return y;
}

}  // namespace evolution_detail

// Lanczos approximation of exp(-i dt H) psi. Full reorthogonalization keeps
// the basis orthonormal, so the result norm matches the input norm to
// rounding. Happy breakdown returns the exact subspace result; failure to
// meet the tolerance within krylov_dim raises AccuracyError.
inline StateVector expm_apply(const OperatorHandle& op, double dt,
                              const StateVector& psi, int krylov_dim = 20,
                              double tolerance = 1e-10) {
  using evolution_detail::dot;
  using evolution_detail::nrm;
  const double beta0 = psi.norm();
  if (dt == 0.0 || beta0 == 0.0) return psi;

  std::vector<std::vector<cplx>> v;
  v.reserve(krylov_dim + 1);
  v.push_back(psi.amp);
  for (cplx& x : v[0]) x /= beta0;

  std::vector<double> alpha, beta;  // beta[k] couples v[k] and v[k+1]
  std::vector<cplx> y;
  StateVector scratch{psi.basis, {}};
  bool converged = false;
  for (int k = 0; k < krylov_dim; ++k) {
    scratch.amp = v[k];
    StateVector w_sv = op.apply(scratch);
    std::vector<cplx>& w = w_sv.amp;
    const double a_k = dot(v[k], w).real();
    alpha.push_back(a_k);
    for (std::size_t n = 0; n < w.size(); ++n) w[n] -= a_k * v[k][n];
    if (k > 0)
      for (std::size_t n = 0; n < w.size(); ++n) w[n] -= beta[k - 1] * v[k - 1][n];
    // two-pass reorthogonalization against the whole basis
    for (int pass = 0; pass < 2; ++pass)
      for (int i = 0; i <= k; ++i) {
        const cplx c = dot(v[i], w);
        for (std::size_t n = 0; n < w.size(); ++n) w[n] -= c * v[i][n];
      }
    const double b_k = nrm(w);

    y = evolution_detail::tridiag_expm_e1(alpha, beta, dt);
    const double err = b_k * std::abs(y.back()) * std::fabs(dt);
    const double breakdown = 1e-14 * std::max(1.0, std::fabs(a_k));
    if (err <= tolerance || b_k <= breakdown) {
      converged = true;
      break;
    }
    beta.push_back(b_k);
    for (cplx& x : w) x /= b_k;
    v.push_back(std::move(w));
  }
  if (!converged)
    throw AccuracyError("expm_apply: Krylov space of dim " +
                        std::to_string(krylov_dim) + " did not converge");

  StateVector out = StateVector::zero(psi.basis);
  for (std::size_t j = 0; j < y.size(); ++j) {
    const cplx c = beta0 * y[j];
    for (std::size_t n = 0; n < out.amp.size(); ++n) out.amp[n] += c * v[j][n];
  }
  return out;
}

namespace evolution_detail {

// expm with recursive halving when a single Krylov call cannot reach the
// tolerance (long static stretches between snapshots).
inline StateVector expm_substepped(const OperatorHandle& op, double dt,
                                   const StateVector& psi, int krylov_dim,
                                   double tolerance, int depth = 0) {
  if (depth > 48) throw AccuracyError("expm substepping exceeded depth limit");
  try {
    return expm_apply(op, dt, psi, krylov_dim, tolerance);
  } catch (const AccuracyError&) {
    StateVector half = expm_substepped(op, 0.5 * dt, psi, krylov_dim,
                                       0.5 * tolerance, depth + 1);
    return expm_substepped(op, 0.5 * dt, half, krylov_dim, 0.5 * tolerance, depth + 1);
  }
}

}  // namespace evolution_detail

// Time evolution under the periodic drive H(t): second-order commutator-free
// scheme freezing H at each segment midpoint, segments being the uniform grid
// of width T/steps_per_period split wherever a snapshot time falls inside.
inline Trajectory evolve_periodic(const Model& model, const StateVector& psi0,
                                  const EvolutionConfig& config,
                                  const SnapshotFn& observer = {}) {
  config.validate();
  model.params().validate_driven();
  if (std::fabs(psi0.norm() - 1.0) > 1e-12)
    throw InvalidArgument("evolve_periodic: initial state must be normalized");

  const double dt = model.params().period() / config.steps_per_period;
  const double t_max = config.t_max;
  std::vector<double> events;
  for (std::uint64_t k = 1; k * dt < t_max - 1e-12 * std::max(1.0, t_max); ++k)
    events.push_back(k * dt);
  if (t_max > 0) events.push_back(t_max);
  for (double s : config.snapshot_times)
    if (s > 0) events.push_back(s);
  std::sort(events.begin(), events.end());
  events.erase(std::unique(events.begin(), events.end(),
                           [dt](double a, double b) { return b - a < 1e-9 * dt; }),
               events.end());

  Trajectory traj;
  StateVector psi = psi0;
  std::size_t next_snap = 0;
  auto emit = [&](double t) {
    while (next_snap < config.snapshot_times.size() &&
           std::fabs(config.snapshot_times[next_snap] - t) <= 1e-9 * std::max(dt, 1.0)) {
      traj.times.push_back(config.snapshot_times[next_snap]);
      if (config.store_states) traj.states.push_back(psi);
      if (observer) observer(config.snapshot_times[next_snap], psi);
      ++next_snap;
    }
  };
  emit(0.0);

  double t_cur = 0.0;
  for (double t_next : events) {
    const double width = t_next - t_cur;
    if (width <= 0) continue;
    const OperatorHandle frozen =
        OperatorHandle::h_of_t(model, t_cur + 0.5 * width);
    psi = evolution_detail::expm_substepped(frozen, width, psi, config.krylov_dim,
                                            config.tolerance);
    t_cur = t_next;
    traj.norm_drift = std::max(traj.norm_drift, std::fabs(1.0 - psi.norm()));
    if (traj.norm_drift > 1e-6)
      throw AccuracyError("evolve_periodic: norm drift exceeded 1e-6; "
                          "increase steps_per_period");
    emit(t_cur);
  }
  return traj;
}

// Krylov propagation under a static Hermitian generator; snapshots at the
// requested times, <H> recorded as a conservation diagnostic.
inline Trajectory evolve_static(const OperatorHandle& handle, const StateVector& psi0,
                                const std::vector<double>& times,
                                const EvolutionConfig& config = {},
                                const SnapshotFn& observer = {}) {
  if (handle.drive_snapshot())
    throw InvalidArgument("evolve_static needs a time-independent operator");
  if (!std::is_sorted(times.begin(), times.end()))
    throw InvalidArgument("evolve_static: times must be sorted");
  if (!times.empty() && times.front() < 0)
    throw InvalidArgument("evolve_static: times must be non-negative");
  if (std::fabs(psi0.norm() - 1.0) > 1e-12)
    throw InvalidArgument("evolve_static: initial state must be normalized");

  Trajectory traj;
  StateVector psi = psi0;
  auto energy_of = [&](const StateVector& p) {
    return evolution_detail::dot(p.amp, handle.apply(p).amp).real();
  };
  const double e0 = times.empty() ? 0.0 : energy_of(psi);
  double t_cur = 0.0;
  for (double t : times) {
    const double width = t - t_cur;
    if (width > 0) {
      psi = evolution_detail::expm_substepped(handle, width, psi, config.krylov_dim,
                                              config.tolerance);
      t_cur = t;
    }
    traj.times.push_back(t);
    if (config.store_states) traj.states.push_back(psi);
    if (observer) observer(t, psi);
    traj.norm_drift = std::max(traj.norm_drift, std::fabs(1.0 - psi.norm()));
    traj.energy_drift =
        std::max(traj.energy_drift,
                 std::fabs(energy_of(psi) - e0) / std::max(1.0, std::fabs(e0)));
  }
  return traj;
}

}  // namespace dxxz

#endif
