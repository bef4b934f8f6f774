#ifndef DXXZ_SPIN_BASIS_HPP
#define DXXZ_SPIN_BASIS_HPP

#include <cmath>
#include <complex>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "dxxz/errors.hpp"

namespace dxxz {

using cplx = std::complex<double>;

// Product basis of L spins with 2S = two_s. Local digit d in [0, 2S] encodes
// m = d - S; basis index = sum_site d_site * (2S+1)^site, so site 0 is least
// significant. For S=1/2 this is one bit per site, bit 1 <=> up.
class SpinBasis {
 public:
  static constexpr std::uint64_t kDefaultMaxDim = std::uint64_t(1) << 26;

  explicit SpinBasis(int num_sites, int two_s = 1,
                     std::uint64_t max_dim = kDefaultMaxDim)
      : num_sites_(num_sites), two_s_(two_s) {
    if (num_sites < 1) throw InvalidArgument("num_sites must be >= 1");
    if (two_s < 1) throw InvalidArgument("two_s must be >= 1");
    const std::uint64_t d = static_cast<std::uint64_t>(two_s) + 1;
    std::uint64_t dim = 1;
    strides_.resize(num_sites);
    for (int site = 0; site < num_sites; ++site) {
      strides_[site] = dim;
      if (dim > max_dim / d)
        throw ResourceError("basis dimension exceeds memory cap");
      dim *= d;
    }
    dim_ = dim;
  }

  int num_sites() const { return num_sites_; }
  int two_s() const { return two_s_; }
  int local_dim() const { return two_s_ + 1; }
  std::uint64_t dim() const { return dim_; }
  std::uint64_t stride(int site) const { return strides_[site]; }
  double spin() const { return 0.5 * two_s_; }

  int digit(std::uint64_t index, int site) const {
    return static_cast<int>((index / strides_[site]) % (two_s_ + 1));
  }
  std::uint64_t set_digit(std::uint64_t index, int site, int d) const {
    return index + (static_cast<std::uint64_t>(d) - digit(index, site)) * strides_[site];
  }
  // m = d - S in units of hbar = 1
  double m_of_digit(int d) const { return d - 0.5 * two_s_; }
  double sz(std::uint64_t index, int site) const { return m_of_digit(digit(index, site)); }

  friend bool operator==(const SpinBasis& a, const SpinBasis& b) {
    return a.num_sites_ == b.num_sites_ && a.two_s_ == b.two_s_;
  }

 private:
  int num_sites_;
  int two_s_;
  std::uint64_t dim_;
  std::vector<std::uint64_t> strides_;
};

struct ProductState {
  SpinBasis basis;
  std::vector<int> digits;  // digits[k] belongs to internal site k (1-based site k+1)

  std::uint64_t encode() const {
    std::uint64_t index = 0;
    for (int site = 0; site < basis.num_sites(); ++site)
      index += static_cast<std::uint64_t>(digits[site]) * basis.stride(site);
    return index;
  }

  static ProductState decode(const SpinBasis& basis, std::uint64_t index) {
    ProductState s{basis, std::vector<int>(basis.num_sites())};
    for (int site = 0; site < basis.num_sites(); ++site)
      s.digits[site] = basis.digit(index, site);
    return s;
  }

  double m(int site) const { return basis.m_of_digit(digits[site]); }
};

struct StateVector {
  SpinBasis basis;
  std::vector<cplx> amp;

  static StateVector zero(const SpinBasis& basis) {
    return {basis, std::vector<cplx>(basis.dim())};
  }

  double norm() const {
    double s = 0;
    for (const cplx& a : amp) s += std::norm(a);
    return std::sqrt(s);
  }
};

inline StateVector product_state_vector(const ProductState& state) {
  StateVector psi = StateVector::zero(state.basis);
  psi.amp[state.encode()] = 1.0;
  return psi;
}

// Ladder matrix element <m+-1|S^+-|m> = sqrt(S(S+1) - m(m +- 1)); zero when
// the step leaves the multiplet.
inline double ladder_coefficient(int two_s, double m, int direction) {
  const double s = 0.5 * two_s;
  const double target = m + (direction > 0 ? 1.0 : -1.0);
  if (target > s + 0.5 || target < -s - 0.5) return 0.0;
  const double v = s * (s + 1.0) - m * (m + (direction > 0 ? 1.0 : -1.0));
  return v > 0 ? std::sqrt(v) : 0.0;
}

// Spin strings: leftmost character is site 1. For S=1/2, one of u/d or the
// UTF-8 arrows per site. For general S, comma-separated doubled quantum
// numbers 2m (e.g. "2,0,-2" for S=1), which stay integral for all S.
inline ProductState parse_spin_string(std::string_view text, const SpinBasis& basis) {
  ProductState out{basis, std::vector<int>(basis.num_sites())};
  const bool comma = text.find(',') != std::string_view::npos;
  if (basis.two_s() == 1 && !comma) {
    int site = 0;
    for (std::size_t pos = 0; pos < text.size();) {
      int digit;
      std::size_t step = 1;
      if (text[pos] == 'u' || text[pos] == 'U') digit = 1;
      else if (text[pos] == 'd' || text[pos] == 'D') digit = 0;
      else if (text.substr(pos, 3) == "↑") { digit = 1; step = 3; }
      else if (text.substr(pos, 3) == "↓") { digit = 0; step = 3; }
      else throw ParseError("spin string: unexpected character at position " +
                            std::to_string(pos));
      if (site >= basis.num_sites()) throw ParseError("spin string longer than lattice");
      out.digits[site++] = digit;
      pos += step;
    }
    if (site != basis.num_sites())
      throw ParseError("spin string has " + std::to_string(site) + " sites, expected " +
                       std::to_string(basis.num_sites()));
    return out;
  }
  // comma form
  int site = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t next = text.find(',', pos);
    if (next == std::string_view::npos) next = text.size();
    std::string token(text.substr(pos, next - pos));
    try {
      std::size_t used = 0;
      const int two_m = std::stoi(token, &used);
      if (used != token.size()) throw std::invalid_argument(token);
      const int digit = (two_m + basis.two_s()) / 2;
      if ((two_m + basis.two_s()) % 2 != 0 || digit < 0 || digit > basis.two_s())
        throw ParseError("spin string: 2m value " + token + " out of range at site " +
                         std::to_string(site + 1));
      if (site >= basis.num_sites()) throw ParseError("spin string longer than lattice");
      out.digits[site++] = digit;
    } catch (const std::logic_error&) {
      throw ParseError("spin string: bad token '" + token + "' at site " +
                       std::to_string(site + 1));
    }
    pos = next + 1;
    if (next == text.size()) break;
  }
  if (site != basis.num_sites())
    throw ParseError("spin string has " + std::to_string(site) + " sites, expected " +
                     std::to_string(basis.num_sites()));
  return out;
}

// Inverse of parse_spin_string: u/d for S=1/2, comma-separated 2m otherwise.
inline std::string spin_string(const ProductState& state) {
  std::string out;
  if (state.basis.two_s() == 1) {
    for (int d : state.digits) out += (d == 1 ? 'u' : 'd');
    return out;
  }
  for (int site = 0; site < state.basis.num_sites(); ++site) {
    if (site) out += ',';
    out += std::to_string(2 * state.digits[site] - state.basis.two_s());
  }
  return out;
}

inline double total_magnetization(const StateVector& psi) {
  const SpinBasis& b = psi.basis;
  double total = 0;
  for (std::uint64_t n = 0; n < b.dim(); ++n) {
    const double w = std::norm(psi.amp[n]);
    if (w == 0.0) continue;
    double m_sum = 0;
    for (int site = 0; site < b.num_sites(); ++site) m_sum += b.sz(n, site);
    total += w * m_sum;
  }
  return total;
}

}  // namespace dxxz

#endif
