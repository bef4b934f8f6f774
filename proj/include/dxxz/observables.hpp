#ifndef DXXZ_OBSERVABLES_HPP
#define DXXZ_OBSERVABLES_HPP

#include <cmath>
#include <cstdint>
#include <vector>

#include "dxxz/errors.hpp"
#include "dxxz/linalg.hpp"
#include "dxxz/operators.hpp"
#include "dxxz/spin_basis.hpp"

namespace dxxz {

// <S^z_site> for every site; requires a normalized state.
inline std::vector<double> sz_profile(const StateVector& psi) {
  if (std::fabs(psi.norm() - 1.0) > 1e-6)
    throw InvalidArgument("sz_profile: state not normalized");
  const SpinBasis& b = psi.basis;
  std::vector<double> profile(b.num_sites(), 0.0);
  for (std::uint64_t n = 0; n < b.dim(); ++n) {
    const double w = std::norm(psi.amp[n]);
    if (w == 0.0) continue;
    for (int site = 0; site < b.num_sites(); ++site)
      profile[site] += w * b.sz(n, site);
  }
  return profile;
}

// Reduced state of the second half (sites L/2+1..L, 1-based), i.e. the first
// half is traced out. Index layout puts the first half in the low digits, so
// reshaping amplitudes into M[lo][hi] gives rho_kept = M^dagger M.
inline DenseMatrix reduced_density_half(const StateVector& psi) {
  const SpinBasis& b = psi.basis;
  if (b.num_sites() % 2 != 0)
    throw InvalidArgument("reduced_density_half: odd number of sites");
  const int half = b.num_sites() / 2;
  const std::uint64_t lo_dim = b.stride(half);
  const std::uint64_t hi_dim = b.dim() / lo_dim;
  if (hi_dim > 4096) throw ResourceError("reduced_density_half: kept half too large");
  DenseMatrix rho = DenseMatrix::zero(hi_dim);
  for (std::uint64_t h1 = 0; h1 < hi_dim; ++h1)
    for (std::uint64_t h2 = h1; h2 < hi_dim; ++h2) {
      cplx s = 0;
      const cplx* col1 = psi.amp.data() + h1 * lo_dim;
      const cplx* col2 = psi.amp.data() + h2 * lo_dim;
      for (std::uint64_t lo = 0; lo < lo_dim; ++lo) s += std::conj(col1[lo]) * col2[lo];
      rho.at(h1, h2) = s;
      rho.at(h2, h1) = std::conj(s);
    }
  return rho;
}

// sigma = (1/L) * (-sum lambda ln lambda) of the half-chain reduced state,
// natural log. Eigenvalues in [-1e-12, 0) are clipped to zero; anything below
// -1e-9 means the density matrix itself is broken.
inline double entanglement_entropy_per_site(const StateVector& psi) {
  const DenseMatrix rho = reduced_density_half(psi);
  const std::vector<double> lambda = hermitian_eigenvalues(rho);
  double s = 0;
  for (double l : lambda) {
    if (l < -1e-9)
      throw NumericalError("entanglement entropy: reduced density eigenvalue < -1e-9");
    if (l <= 0.0) continue;  // clip roundoff negatives and exact zeros
    const double lc = std::min(l, 1.0);
    s -= lc * std::log(lc);
  }
  return s / psi.basis.num_sites();
}

// <phi|psi>
inline cplx overlap(const StateVector& psi, const StateVector& phi) {
  if (!(psi.basis == phi.basis)) throw InvalidArgument("overlap: basis mismatch");
  cplx s = 0;
  for (std::uint64_t n = 0; n < psi.amp.size(); ++n)
    s += std::conj(phi.amp[n]) * psi.amp[n];
  return s;
}

struct EnergyResult {
  double value;     // Re <psi|H|psi>
  double imag_abs;  // |Im|, should be roundoff for Hermitian H
};

inline EnergyResult energy(const OperatorHandle& handle, const StateVector& psi) {
  const StateVector h_psi = handle.apply(psi);
  cplx e = 0;
  for (std::uint64_t n = 0; n < psi.amp.size(); ++n)
    e += std::conj(psi.amp[n]) * h_psi.amp[n];
  return {e.real(), std::fabs(e.imag())};
}

}  // namespace dxxz

#endif
