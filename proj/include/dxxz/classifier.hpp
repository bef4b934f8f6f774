#ifndef DXXZ_CLASSIFIER_HPP
#define DXXZ_CLASSIFIER_HPP

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "dxxz/errors.hpp"
#include "dxxz/lattice.hpp"
#include "dxxz/spin_basis.hpp"

namespace dxxz {

// Four-site cluster classes around a bond of an S=1/2 chain. The bond
// operator acts on a cluster as J0(a) (H0), as the bare hop (H1), or
// annihilates it (HX, middle pair aligned).
enum class ClusterClass { H0, H1, HX };

namespace classifier_detail {

// Hard-coded membership, cluster encoded as bits (prev, i, j, next) with
// prev the most significant bit and 1 = up. The listing is authoritative;
// the derived rule (middle aligned -> HX; outer spins equal -> H1; else H0)
// is only used as a cross-check in the tests.
inline constexpr std::array<ClusterClass, 16> kClassTable = [] {
  std::array<ClusterClass, 16> t{};
  for (auto& c : t) c = ClusterClass::HX;
  constexpr int h0[] = {0b1100, 0b1010, 0b0101, 0b0011};  // uudd udud dudu dduu
  constexpr int h1[] = {0b1101, 0b1011, 0b0010, 0b0100};  // uudu uduu ddud dudd
  for (int i : h0) t[i] = ClusterClass::H0;
  for (int i : h1) t[i] = ClusterClass::H1;
  return t;
}();

}  // namespace classifier_detail

// up_* flags are the four S=1/2 orientations (m_prev, m_i, m_j, m_next)
// around bond (i, j) of a chain, listed left to right.
inline ClusterClass classify_cluster(bool up_prev, bool up_i, bool up_j, bool up_next) {
  const int code = (up_prev ? 8 : 0) | (up_i ? 4 : 0) | (up_j ? 2 : 0) | (up_next ? 1 : 0);
  return classifier_detail::kClassTable[code];
}

inline std::string cluster_class_name(ClusterClass c) {
  switch (c) {
    case ClusterClass::H0: return "h0";
    case ClusterClass::H1: return "h1";
    default: return "hx";
  }
}

struct StateClassification {
  bool localized = false;
  std::vector<Bond> h1_bonds;  // witness bonds, 0-based sites
};

// A product state is a fixed point of the effective dynamics at a J0 zero
// iff no bond cluster falls in class H1. Periodic S=1/2 chain only, L >= 6
// so the four-site window never revisits a site.
inline StateClassification classify_product_state(const LatticeGraph& graph,
                                                  const ProductState& state) {
  if (!graph.is_periodic_chain())
    throw UnsupportedLattice("classification is defined on the periodic chain only");
  if (state.basis.two_s() != 1)
    throw InvalidArgument("classification is defined for S=1/2 only");
  const int length = graph.num_sites();
  if (length < 6)
    throw InvalidArgument("classification needs chain length >= 6");
  StateClassification out;
  out.localized = true;
  for (int i = 0; i < length; ++i) {
    const int j = (i + 1) % length;
    const int prev = (i + length - 1) % length;
    const int next = (i + 2) % length;
    const ClusterClass c = classify_cluster(state.digits[prev] == 1, state.digits[i] == 1,
                                            state.digits[j] == 1, state.digits[next] == 1);
    if (c == ClusterClass::H1) {
      out.localized = false;
      out.h1_bonds.push_back({i, j});
    }
  }
  return out;
}

// All localized product states of the periodic length-L chain, ascending by
// basis index. L <= 20 keeps the sweep desk-scale.
inline std::vector<ProductState> enumerate_localized_states(int length) {
  if (length > 20) throw ResourceError("enumerate_localized_states: length > 20");
  const LatticeGraph graph = LatticeGraph::chain(length, true);
  const SpinBasis basis(length, 1);
  std::vector<ProductState> out;
  for (std::uint64_t n = 0; n < basis.dim(); ++n) {
    ProductState s = ProductState::decode(basis, n);
    if (classify_product_state(graph, s).localized) out.push_back(std::move(s));
  }
  return out;
}

// The named initial states. L = 16 is the reference size; for other lengths
// (even, >= 12) the analogue keeps the same structure: A0 is a
// half/half domain wall with the wall on the central bond (L/2, L/2+1)
// [1-based], A1 flips the two spins of that bond; B0 splits the chain into
// four L/4 domains (requires L % 4 == 0) again with a wall on the central
// bond, and B1 flips that bond's spins.
inline ProductState library_state(std::string_view name, int length) {
  if (length < 12 || length % 2 != 0)
    throw InvalidArgument("library states need even length >= 12");
  const SpinBasis basis(length, 1);
  ProductState s{basis, std::vector<int>(length, 0)};
  const bool flip_center = name == "A1" || name == "B1";
  if (name == "A0" || name == "A1") {
    for (int k = length / 2; k < length; ++k) s.digits[k] = 1;
  } else if (name == "B0" || name == "B1") {
    if (length % 4 != 0)
      throw InvalidArgument("B states need length divisible by 4");
    const int q = length / 4;
    for (int k = q; k < 2 * q; ++k) s.digits[k] = 1;
    for (int k = 3 * q; k < length; ++k) s.digits[k] = 1;
  } else {
    throw InvalidArgument("unknown state name: " + std::string(name));
  }
  if (flip_center) {
    s.digits[length / 2 - 1] ^= 1;
    s.digits[length / 2] ^= 1;
  }
  return s;
}

}  // namespace dxxz

#endif
