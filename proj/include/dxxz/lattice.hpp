#ifndef DXXZ_LATTICE_HPP
#define DXXZ_LATTICE_HPP

#include <algorithm>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "dxxz/errors.hpp"

namespace dxxz {

// Undirected bond, stored with i < j. Sites are 0-based internally; file and
// CLI formats are 1-based.
struct Bond {
  int i;
  int j;
  friend bool operator==(const Bond&, const Bond&) = default;
  friend bool operator<(const Bond& a, const Bond& b) {
    return a.i != b.i ? a.i < b.i : a.j < b.j;
  }
};

// Sites entering the staggered magnetization Z_ij = sum_{k~i} S^z_k
// - sum_{k~j} S^z_k. A site adjacent to both i and j appears in both lists;
// its contributions cancel.
struct StaggerSites {
  std::vector<int> plus;   // neighbors of i
  std::vector<int> minus;  // neighbors of j
};

class LatticeGraph {
 public:
  enum class Kind { Chain, Square, Custom };

  static LatticeGraph chain(int length, bool periodic) {
    if (length < 2) throw InvalidArgument("chain length must be >= 2");
    if (periodic && length == 2)
      throw InvalidArgument("periodic chain needs length >= 3 (double bond otherwise)");
    std::vector<Bond> edges;
    for (int i = 0; i + 1 < length; ++i) edges.push_back({i, i + 1});
    if (periodic) edges.push_back({0, length - 1});
    return LatticeGraph(Kind::Chain, length, periodic, std::move(edges));
  }

  static LatticeGraph square(int lx, int ly, bool periodic) {
    if (lx < 2 || ly < 2) throw InvalidArgument("square lattice needs lx, ly >= 2");
    if (periodic && (lx == 2 || ly == 2))
      throw InvalidArgument("periodic square lattice needs lx, ly >= 3");
    auto site = [lx](int x, int y) { return y * lx + x; };
    std::vector<Bond> edges;
    for (int y = 0; y < ly; ++y)
      for (int x = 0; x < lx; ++x) {
        if (x + 1 < lx) edges.push_back({site(x, y), site(x + 1, y)});
        else if (periodic) edges.push_back({site(0, y), site(x, y)});
        if (y + 1 < ly) edges.push_back({site(x, y), site(x, y + 1)});
        else if (periodic) edges.push_back({site(x, 0), site(x, y)});
      }
    for (auto& b : edges)
      if (b.i > b.j) std::swap(b.i, b.j);
    return LatticeGraph(Kind::Square, lx * ly, periodic, std::move(edges), lx, ly);
  }

  static LatticeGraph custom(int num_sites, std::vector<Bond> edges) {
    if (num_sites < 2) throw InvalidArgument("custom graph needs >= 2 sites");
    std::set<std::pair<int, int>> seen;
    for (auto& b : edges) {
      if (b.i > b.j) std::swap(b.i, b.j);
      if (b.i == b.j) throw InvalidArgument("self-loop rejected");
      if (b.i < 0 || b.j >= num_sites) throw InvalidArgument("edge site out of range");
      if (!seen.insert({b.i, b.j}).second) throw InvalidArgument("duplicate edge rejected");
    }
    return LatticeGraph(Kind::Custom, num_sites, false, std::move(edges));
  }

  int num_sites() const { return num_sites_; }
  const std::vector<Bond>& bonds() const { return bonds_; }
  const std::vector<int>& neighbors(int site) const { return adjacency_.at(site); }
  int degree(int site) const { return static_cast<int>(adjacency_.at(site).size()); }
  Kind kind() const { return kind_; }
  bool periodic() const { return periodic_; }
  bool is_periodic_chain() const { return kind_ == Kind::Chain && periodic_; }
  int lx() const { return lx_; }
  int ly() const { return ly_; }

  bool has_bond(int i, int j) const {
    if (i > j) std::swap(i, j);
    return std::binary_search(bonds_.begin(), bonds_.end(), Bond{i, j});
  }

  // Open boundaries: missing neighbors simply do not contribute (convention;
  // a periodic chain never hits this case).
  StaggerSites neighbor_sum_sites(int i, int j) const {
    if (!has_bond(i, j)) throw InvalidArgument("neighbor_sum_sites: (i,j) is not a bond");
    return {adjacency_.at(i), adjacency_.at(j)};
  }

  std::string kind_name() const {
    switch (kind_) {
      case Kind::Chain: return "chain";
      case Kind::Square: return "square";
      default: return "custom";
    }
  }

 private:
  LatticeGraph(Kind kind, int num_sites, bool periodic, std::vector<Bond> edges,
               int lx = 0, int ly = 0)
      : kind_(kind), num_sites_(num_sites), periodic_(periodic),
        bonds_(std::move(edges)), lx_(lx), ly_(ly) {
    std::sort(bonds_.begin(), bonds_.end());
    adjacency_.resize(num_sites_);
    for (const auto& b : bonds_) {
      adjacency_[b.i].push_back(b.j);
      adjacency_[b.j].push_back(b.i);
    }
    for (auto& nbrs : adjacency_) std::sort(nbrs.begin(), nbrs.end());
  }

  Kind kind_;
  int num_sites_;
  bool periodic_;
  std::vector<Bond> bonds_;
  std::vector<std::vector<int>> adjacency_;
  int lx_, ly_;
};

}  // namespace dxxz

#endif
