#ifndef DXXZ_OPERATORS_HPP
#define DXXZ_OPERATORS_HPP

#include <bit>
#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "dxxz/errors.hpp"
#include "dxxz/lattice.hpp"
#include "dxxz/linalg.hpp"
#include "dxxz/specfun.hpp"
#include "dxxz/spin_basis.hpp"

namespace dxxz {

// H(t) = H0 + V(t) with J_par(t) = j_par_bar + delta_j cos(omega t) and the
// dimensionless drive amplitude a = delta_j / omega (hbar = 1). amplitude_a
// is primary; delta_j is derived so the two never disagree.
struct ModelParams {
  double j_perp = 0.0;
  double j_par_bar = 0.0;
  double omega = 1.0;
  double amplitude_a = 0.0;

  double delta_j() const { return amplitude_a * omega; }
  double period() const { return 2.0 * M_PI / omega; }

  static ModelParams with_delta_j(double j_perp, double j_par_bar, double omega,
                                  double delta_j) {
    if (!(omega > 0)) throw InvalidArgument("omega must be positive");
    return {j_perp, j_par_bar, omega, delta_j / omega};
  }

  void validate_driven() const {
    if (!(omega > 0)) throw InvalidArgument("omega must be positive for a driven run");
  }
};

// Z_ij = sum_{k~i} S^z_k - sum_{k~j} S^z_k evaluated on a product state.
inline double z_eigenvalue(const LatticeGraph& graph, const ProductState& state,
                           int i, int j) {
  const StaggerSites sites = graph.neighbor_sum_sites(i, j);
  double z = 0;
  for (int k : sites.plus) z += state.m(k);
  for (int k : sites.minus) z -= state.m(k);
  return z;
}

// Bound lattice + basis + couplings with the per-bond stagger bookkeeping and
// the cached diagonal sum_bonds m_i m_j. All apply_* methods allocate their
// output; input is never aliased.
class Model {
 public:
  Model(LatticeGraph graph, SpinBasis basis, ModelParams params)
      : graph_(std::move(graph)), basis_(std::move(basis)), params_(params) {
    if (graph_.num_sites() != basis_.num_sites())
      throw InvalidArgument("lattice and basis disagree on site count");
    const double s = basis_.spin();
    for (const Bond& b : graph_.bonds()) {
      BondCtx ctx;
      ctx.i = b.i;
      ctx.j = b.j;
      const StaggerSites st = graph_.neighbor_sum_sites(b.i, b.j);
      ctx.plus = st.plus;
      ctx.minus = st.minus;
      const int count = static_cast<int>(ctx.plus.size() + ctx.minus.size());
      ctx.z_min = -s * count;
      ctx.z_count = basis_.two_s() * count + 1;
      for (int k : ctx.plus) ctx.pmask |= std::uint64_t(1) << k;
      for (int k : ctx.minus) ctx.mmask |= std::uint64_t(1) << k;
      bonds_.push_back(std::move(ctx));
    }
  }

  const LatticeGraph& graph() const { return graph_; }
  const SpinBasis& basis() const { return basis_; }
  const ModelParams& params() const { return params_; }

  // diagonal of sum_bonds S^z_i S^z_j
  const std::vector<double>& zz_diagonal() const {
    if (zz_diag_.empty() && basis_.dim() > 0) {
      zz_diag_.resize(basis_.dim());
      for (std::uint64_t n = 0; n < basis_.dim(); ++n) {
        double acc = 0;
        for (const Bond& b : graph_.bonds()) acc += basis_.sz(n, b.i) * basis_.sz(n, b.j);
        zz_diag_[n] = acc;
      }
    }
    return zz_diag_;
  }

  StateVector apply_h0(const StateVector& psi) const {
    check_basis(psi);
    StateVector out = StateVector::zero(basis_);
    add_xy_undressed(psi, out, -0.5 * params_.j_perp);
    add_diagonal(psi, out, -params_.j_par_bar);
    return out;
  }

  StateVector apply_v(double t, const StateVector& psi) const {
    check_basis(psi);
    StateVector out = StateVector::zero(basis_);
    add_diagonal(psi, out, -params_.delta_j() * std::cos(params_.omega * t));
    return out;
  }

  StateVector apply_h_of_t(double t, const StateVector& psi) const {
    check_basis(psi);
    StateVector out = StateVector::zero(basis_);
    add_xy_undressed(psi, out, -0.5 * params_.j_perp);
    add_diagonal(psi, out,
                 -(params_.j_par_bar + params_.delta_j() * std::cos(params_.omega * t)));
    return out;
  }

  StateVector apply_h_ising(const StateVector& psi) const {
    check_basis(psi);
    StateVector out = StateVector::zero(basis_);
    add_diagonal(psi, out, -params_.j_par_bar);
    return out;
  }

  StateVector apply_h_eff(double a, const StateVector& psi) const {
    check_basis(psi);
    StateVector out = StateVector::zero(basis_);
    add_xy_bessel(psi, out, -0.5 * params_.j_perp, a);
    add_diagonal(psi, out, -params_.j_par_bar);
    return out;
  }

  StateVector apply_h_eff_xy(double a, const StateVector& psi) const {
    check_basis(psi);
    StateVector out = StateVector::zero(basis_);
    add_xy_bessel(psi, out, -0.5 * params_.j_perp, a);
    return out;
  }

  // Single-bond operator b_ij(a) = S_i^+ J0(a Z_ij) S_j^- + S_i^- J0(a Z_ij) S_j^+
  // without the -J_perp/2 prefactor.
  StateVector apply_bond(int i, int j, double a, const StateVector& psi) const {
    check_basis(psi);
    StateVector out = StateVector::zero(basis_);
    const BondCtx* ctx = nullptr;
    for (const BondCtx& b : bonds_)
      if ((b.i == i && b.j == j) || (b.i == j && b.j == i)) { ctx = &b; break; }
    if (!ctx) throw InvalidArgument("apply_bond: (i,j) is not a bond");
    std::vector<cplx> w(ctx->z_count);
    for (int t = 0; t < ctx->z_count; ++t)
      w[t] = specfun::j0(a * (ctx->z_min + t));
    apply_xy_bond(*ctx, psi, out, 1.0, w.data(), w.data());
    return out;
  }

  // Rotated Hamiltonian U H0 U^dagger at drive phase theta = a sin(omega t),
  // in closed form: the XY term dressed by exp(-i theta Z_ij) (and the
  // conjugate phase on the reversed term), Ising part untouched.
  StateVector apply_rotated_h0_closed_form(double theta, const StateVector& psi) const {
    check_basis(psi);
    StateVector out = StateVector::zero(basis_);
    const double pref = -0.5 * params_.j_perp;
    for (const BondCtx& ctx : bonds_) {
      std::vector<cplx> w1(ctx.z_count), w2(ctx.z_count);
      for (int t = 0; t < ctx.z_count; ++t) {
        const double ph = theta * (ctx.z_min + t);
        w1[t] = cplx(std::cos(ph), -std::sin(ph));  // with S_i^+ ... S_j^-
        w2[t] = std::conj(w1[t]);                   // with S_i^- ... S_j^+
      }
      apply_xy_bond(ctx, psi, out, pref, w1.data(), w2.data());
    }
    add_diagonal(psi, out, -params_.j_par_bar);
    return out;
  }

 private:
  struct BondCtx {
    int i = 0, j = 0;
    std::vector<int> plus, minus;  // stagger site lists (neighbors of i / of j)
    std::uint64_t pmask = 0, mmask = 0;
    double z_min = 0;
    int z_count = 0;
  };

  void check_basis(const StateVector& psi) const {
    if (!(psi.basis == basis_)) throw InvalidArgument("state basis mismatch");
    if (psi.amp.size() != basis_.dim()) throw InvalidArgument("state size mismatch");
  }

  void add_diagonal(const StateVector& in, StateVector& out, double coeff) const {
    if (coeff == 0.0) return;
    const std::vector<double>& diag = zz_diagonal();
    for (std::uint64_t n = 0; n < basis_.dim(); ++n)
      out.amp[n] += coeff * diag[n] * in.amp[n];
  }

  // XY hop with per-bond coefficient tables indexed by the stagger value of
  // the intermediate state (after the right-most ladder operator acted):
  // table offset t = sum_plus d_k + two_s*|minus| - sum_minus d_k, which maps
  // the unit-spaced grid z = z_min + t.
  void apply_xy_bond(const BondCtx& ctx, const StateVector& in, StateVector& out,
                     double pref, const cplx* w1, const cplx* w2) const {
    const std::uint64_t dim = basis_.dim();
    if (basis_.two_s() == 1) {
      const std::uint64_t bi = std::uint64_t(1) << ctx.i;
      const std::uint64_t bj = std::uint64_t(1) << ctx.j;
      const std::uint64_t mask = bi | bj;
      const int msize = static_cast<int>(ctx.minus.size());
      for (std::uint64_t n = 0; n < dim; ++n) {
        const bool upi = (n & bi) != 0, upj = (n & bj) != 0;
        if (upi == upj) continue;
        const cplx amp = in.amp[n];
        if (amp == cplx(0.0)) continue;
        const std::uint64_t mid = n ^ bj;
        const int t = std::popcount(mid & ctx.pmask) + msize -
                      std::popcount(mid & ctx.mmask);
        const cplx& w = upj ? w1[t] : w2[t];
        out.amp[n ^ mask] += pref * w * amp;
      }
      return;
    }
    const int two_s = basis_.two_s();
    const std::uint64_t si = basis_.stride(ctx.i), sj = basis_.stride(ctx.j);
    const int msize_ts = two_s * static_cast<int>(ctx.minus.size());
    for (std::uint64_t n = 0; n < dim; ++n) {
      const cplx amp = in.amp[n];
      if (amp == cplx(0.0)) continue;
      const int di = basis_.digit(n, ctx.i), dj = basis_.digit(n, ctx.j);
      // S_i^+ J0 S_j^-
      if (dj > 0 && di < two_s) {
        const double c2 = ladder_coefficient(two_s, basis_.m_of_digit(dj), -1);
        const std::uint64_t mid = n - sj;
        int t = msize_ts;
        for (int k : ctx.plus) t += basis_.digit(mid, k);
        for (int k : ctx.minus) t -= basis_.digit(mid, k);
        const double c1 = ladder_coefficient(two_s, basis_.m_of_digit(di), +1);
        out.amp[mid + si] += pref * c1 * c2 * w1[t] * amp;
      }
      // S_i^- J0 S_j^+
      if (dj < two_s && di > 0) {
        const double c2 = ladder_coefficient(two_s, basis_.m_of_digit(dj), +1);
        const std::uint64_t mid = n + sj;
        int t = msize_ts;
        for (int k : ctx.plus) t += basis_.digit(mid, k);
        for (int k : ctx.minus) t -= basis_.digit(mid, k);
        const double c1 = ladder_coefficient(two_s, basis_.m_of_digit(di), -1);
        out.amp[mid - si] += pref * c1 * c2 * w2[t] * amp;
      }
    }
  }

  void add_xy_undressed(const StateVector& in, StateVector& out, double pref) const {
    if (pref == 0.0) return;
    int max_zc = 1;
    for (const BondCtx& ctx : bonds_) max_zc = std::max(max_zc, ctx.z_count);
    const std::vector<cplx> ones(max_zc, cplx(1.0));
    for (const BondCtx& ctx : bonds_)
      apply_xy_bond(ctx, in, out, pref, ones.data(), ones.data());
  }

  void add_xy_bessel(const StateVector& in, StateVector& out, double pref,
                     double a) const {
    if (pref == 0.0) return;
    for (const BondCtx& ctx : bonds_) {
      std::vector<cplx> w(ctx.z_count);
      for (int t = 0; t < ctx.z_count; ++t)
        w[t] = specfun::j0(a * (ctx.z_min + t));
      apply_xy_bond(ctx, in, out, pref, w.data(), w.data());
    }
  }

  LatticeGraph graph_;
  SpinBasis basis_;
  ModelParams params_;
  std::vector<BondCtx> bonds_;
  mutable std::vector<double> zz_diag_;  // built on first use; single-threaded
};

enum class OperatorKind { H0, HOfT, V, HEff, HEffXY, HIsing, BondOp };

// Thin dispatch wrapper so evolution / dense construction can take "some
// Hermitian operator" without templating. HOfT / V freeze the drive at a
// fixed time and are flagged time-dependent for evolve_static's benefit.
class OperatorHandle {
 public:
  static OperatorHandle h0(const Model& m) { return {&m, OperatorKind::H0}; }
  static OperatorHandle h_of_t(const Model& m, double t) {
    OperatorHandle h{&m, OperatorKind::HOfT};
    h.t_ = t;
    return h;
  }
  static OperatorHandle v(const Model& m, double t) {
    OperatorHandle h{&m, OperatorKind::V};
    h.t_ = t;
    return h;
  }
  static OperatorHandle h_eff(const Model& m, double a) {
    OperatorHandle h{&m, OperatorKind::HEff};
    h.a_ = a;
    return h;
  }
  static OperatorHandle h_eff_xy(const Model& m, double a) {
    OperatorHandle h{&m, OperatorKind::HEffXY};
    h.a_ = a;
    return h;
  }
  static OperatorHandle h_ising(const Model& m) { return {&m, OperatorKind::HIsing}; }
  static OperatorHandle bond(const Model& m, int i, int j, double a) {
    OperatorHandle h{&m, OperatorKind::BondOp};
    h.a_ = a;
    h.i_ = i;
    h.j_ = j;
    return h;
  }

  StateVector apply(const StateVector& psi) const {
    switch (kind_) {
      case OperatorKind::H0: return model_->apply_h0(psi);
      case OperatorKind::HOfT: return model_->apply_h_of_t(t_, psi);
      case OperatorKind::V: return model_->apply_v(t_, psi);
      case OperatorKind::HEff: return model_->apply_h_eff(a_, psi);
      case OperatorKind::HEffXY: return model_->apply_h_eff_xy(a_, psi);
      case OperatorKind::HIsing: return model_->apply_h_ising(psi);
      default: return model_->apply_bond(i_, j_, a_, psi);
    }
  }

  // operators that represent a snapshot of the drive, not a static generator
  bool drive_snapshot() const {
    return kind_ == OperatorKind::HOfT || kind_ == OperatorKind::V;
  }
  OperatorKind kind() const { return kind_; }
  const Model& model() const { return *model_; }
  std::string name() const {
    switch (kind_) {
      case OperatorKind::H0: return "h0";
      case OperatorKind::HOfT: return "h_of_t";
      case OperatorKind::V: return "v";
      case OperatorKind::HEff: return "h_eff";
      case OperatorKind::HEffXY: return "h_eff_xy";
      case OperatorKind::HIsing: return "h_ising";
      default: return "bond";
    }
  }

 private:
  OperatorHandle(const Model* m, OperatorKind k) : model_(m), kind_(k) {}
  const Model* model_;
  OperatorKind kind_;
  double a_ = 0.0;
  double t_ = 0.0;
  int i_ = -1, j_ = -1;
};

inline DenseMatrix build_dense(const OperatorHandle& op, std::uint64_t max_dim = 4096) {
  const SpinBasis& basis = op.model().basis();
  if (basis.dim() > max_dim) throw ResourceError("build_dense: dimension too large");
  const std::uint64_t dim = basis.dim();
  DenseMatrix m = DenseMatrix::zero(dim);
  StateVector unit = StateVector::zero(basis);
  for (std::uint64_t col = 0; col < dim; ++col) {
    unit.amp[col] = 1.0;
    StateVector image = op.apply(unit);
    for (std::uint64_t row = 0; row < dim; ++row) m.at(row, col) = image.amp[row];
    unit.amp[col] = 0.0;
  }
  return m;
}

}  // namespace dxxz

#endif
