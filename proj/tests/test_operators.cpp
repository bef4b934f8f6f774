#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <vector>

#include "dxxz/classifier.hpp"
#include "dxxz/errors.hpp"
#include "dxxz/operators.hpp"
#include "oracles.hpp"

using dxxz::cplx;
using dxxz::LatticeGraph;
using dxxz::Model;
using dxxz::ModelParams;
using dxxz::OperatorHandle;
using dxxz::SpinBasis;
using dxxz::StateVector;

namespace {

StateVector random_state(const SpinBasis& basis, unsigned seed) {
  std::mt19937 gen(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  StateVector psi = StateVector::zero(basis);
  for (auto& a : psi.amp) a = cplx(u(gen), u(gen));
  const double n = psi.norm();
  for (auto& a : psi.amp) a /= n;
  return psi;
}

}  // namespace

TEST_CASE("two-site open chain by hand", "[operators]") {
  const auto graph = LatticeGraph::chain(2, false);
  const SpinBasis basis(2, 1);
  const Model model(graph, basis, {0.75, 0.5, 1.0, 0.0});
  const auto h = dxxz::build_dense(OperatorHandle::h0(model));

  // basis order: dd, ud(=site 1 up), du, uu
  CHECK(h.at(0, 0) == cplx(-0.125));  // -j_par_bar * (1/4)
  CHECK(h.at(3, 3) == cplx(-0.125));
  CHECK(h.at(1, 1) == cplx(0.125));
  CHECK(h.at(2, 2) == cplx(0.125));
  CHECK(h.at(2, 1) == cplx(-0.375));  // -j_perp/2
  CHECK(h.at(1, 2) == cplx(-0.375));
  CHECK(h.at(3, 0) == cplx(0.0));
  CHECK(h.hermiticity_defect() == 0.0);
}

TEST_CASE("h0 matches the dense site-operator reference", "[operators]") {
  struct Case {
    LatticeGraph graph;
    int two_s;
  };
  const Case cases[] = {
      {LatticeGraph::chain(5, false), 1},
      {LatticeGraph::chain(6, true), 1},
      {LatticeGraph::square(2, 2, false), 1},
      {LatticeGraph::chain(3, false), 2},
      {LatticeGraph::custom(4, {{0, 1}, {0, 2}, {0, 3}}), 1},  // star
  };
  for (const auto& c : cases) {
    CAPTURE(c.graph.kind_name(), c.graph.num_sites(), c.two_s);
    const SpinBasis basis(c.graph.num_sites(), c.two_s);
    const Model model(c.graph, basis, {-0.75, -1.0, 1.0, 0.0});
    const auto got = dxxz::build_dense(OperatorHandle::h0(model));
    const auto want = oracle::dense_h0(c.graph, basis, -0.75, -1.0);
    CHECK(got.max_abs_diff(want) <= 1e-14);
    CHECK(got.hermiticity_defect() <= 1e-14);
  }
}

TEST_CASE("z_eigenvalue agrees with the stagger diagonal", "[operators]") {
  const auto graph = LatticeGraph::chain(6, true);
  const SpinBasis basis(6, 1);
  for (const dxxz::Bond& b : graph.bonds()) {
    const auto diag = oracle::stagger_diagonal(graph, basis, b.i, b.j);
    for (std::uint64_t n = 0; n < basis.dim(); ++n) {
      const auto state = dxxz::ProductState::decode(basis, n);
      CHECK(dxxz::z_eigenvalue(graph, state, b.i, b.j) == diag[n]);
    }
  }
}

TEST_CASE("effective Hamiltonian at a = 0 reduces to h0 exactly", "[operators]") {
  const auto graph = LatticeGraph::chain(6, true);
  const SpinBasis basis(6, 1);
  const Model model(graph, basis, {-0.75, -1.0, 10.0, 0.0});
  const StateVector psi = random_state(basis, 99u);
  const StateVector via_h0 = model.apply_h0(psi);
  const StateVector via_eff = model.apply_h_eff(0.0, psi);
  for (std::uint64_t n = 0; n < basis.dim(); ++n)
    CHECK(via_h0.amp[n] == via_eff.amp[n]);
}

TEST_CASE("effective Hamiltonian matches the dense reference", "[operators]") {
  for (double a : {0.5, 1.0, oracle::kFirstJ0Zero}) {
    CAPTURE(a);
    const auto ring = LatticeGraph::chain(6, true);
    const SpinBasis half(6, 1);
    const Model m1(ring, half, {-0.75, -1.0, 1.0, a});
    const auto got1 = dxxz::build_dense(OperatorHandle::h_eff(m1, a));
    const auto want1 = oracle::dense_h_eff(ring, half, -0.75, -1.0, a);
    CHECK(got1.max_abs_diff(want1) <= 1e-13);
    CHECK(got1.hermiticity_defect() <= 1e-14);

    const auto xy = dxxz::build_dense(OperatorHandle::h_eff_xy(m1, a));
    CHECK(xy.max_abs_diff(oracle::dense_h_eff_xy(ring, half, -0.75, a)) <= 1e-13);

    const auto open4 = LatticeGraph::chain(4, false);
    const SpinBasis one(4, 2);
    const Model m2(open4, one, {0.6, 0.9, 1.0, a});
    const auto got2 = dxxz::build_dense(OperatorHandle::h_eff(m2, a));
    const auto want2 = oracle::dense_h_eff(open4, one, 0.6, 0.9, a);
    CHECK(got2.max_abs_diff(want2) <= 1e-13);
    CHECK(got2.hermiticity_defect() <= 1e-14);
  }
}

TEST_CASE("h_of_t is h0 plus the drive term", "[operators]") {
  const auto graph = LatticeGraph::chain(5, true);
  const SpinBasis basis(5, 1);
  const Model model(graph, basis, {-0.75, -1.0, 10.0, 2.0});
  const StateVector psi = random_state(basis, 5u);
  for (double t : {0.0, 0.21, 1.7}) {
    const StateVector lhs = model.apply_h_of_t(t, psi);
    const StateVector h0 = model.apply_h0(psi);
    const StateVector v = model.apply_v(t, psi);
    for (std::uint64_t n = 0; n < basis.dim(); ++n)
      CHECK(std::abs(lhs.amp[n] - h0.amp[n] - v.amp[n]) <= 1e-15);
  }
  // drive averages to zero over one period on the uniform grid
  const int nodes = 64;
  StateVector acc = StateVector::zero(basis);
  for (int k = 0; k < nodes; ++k) {
    const StateVector v = model.apply_v(model.params().period() * k / nodes, psi);
    for (std::uint64_t n = 0; n < basis.dim(); ++n) acc.amp[n] += v.amp[n];
  }
  CHECK(acc.norm() <= 1e-12);
}

TEST_CASE("all-up ring is an eigenstate of h0", "[operators]") {
  const auto graph = LatticeGraph::chain(8, true);
  const SpinBasis basis(8, 1);
  const Model model(graph, basis, {-0.75, -1.0, 1.0, 0.0});
  StateVector up = StateVector::zero(basis);
  up.amp[basis.dim() - 1] = 1.0;
  const StateVector h_up = model.apply_h0(up);
  // energy -j_par_bar * L/4 = 8/4 = 2 with j_par_bar = -1
  for (std::uint64_t n = 0; n < basis.dim(); ++n)
    CHECK(std::abs(h_up.amp[n] - (n == basis.dim() - 1 ? cplx(2.0) : cplx(0.0))) <=
          1e-15);
}

TEST_CASE("domain wall states and the dressed exchange at L = 16", "[operators]") {
  const int length = 16;
  const auto graph = LatticeGraph::chain(length, true);
  const SpinBasis basis(length, 1);
  const double j_perp = -0.75, j_par_bar = -1.0;
  const Model model(graph, basis, {j_perp, j_par_bar, 10.0, 0.0});

  const StateVector a0 = dxxz::product_state_vector(dxxz::library_state("A0", length));
  const StateVector a1 = dxxz::product_state_vector(dxxz::library_state("A1", length));

  // Ising action on A0: 14 aligned bonds, 2 walls -> eigenvalue -j_par_bar * 3
  const StateVector ising_a0 = model.apply_h_ising(a0);
  for (std::uint64_t n = 0; n < basis.dim(); ++n) {
    const cplx want = a0.amp[n] * cplx(3.0);
    CHECK(std::abs(ising_a0.amp[n] - want) <= 1e-15);
  }

  // A0 has two flippable bonds, both with the J0(a) coefficient; A1 has four,
  // two of them undressed.
  for (double a : {0.7, oracle::kFirstJ0Zero}) {
    CAPTURE(a);
    const double b = dxxz::specfun::j0(a);
    const double n0 = model.apply_h_eff_xy(a, a0).norm();
    CHECK(std::fabs(n0 - 0.375 * std::fabs(b) * std::sqrt(2.0)) <= 1e-13);
    const double n1 = model.apply_h_eff_xy(a, a1).norm();
    CHECK(std::fabs(n1 - 0.375 * std::sqrt(2.0 + 2.0 * b * b)) <= 1e-13);
  }
}

TEST_CASE("single-bond operator reproduces the cluster coefficients", "[operators]") {
  const int length = 8;
  const auto graph = LatticeGraph::chain(length, true);
  const SpinBasis basis(length, 1);
  const Model model(graph, basis, {1.0, 0.0, 1.0, 0.0});
  const double a = 0.7;
  const auto op = OperatorHandle::bond(model, 1, 2, a);

  for (int c = 0; c < 16; ++c) {
    CAPTURE(c);
    dxxz::ProductState ps{basis, std::vector<int>(length, 0)};
    ps.digits[0] = (c >> 3) & 1;
    ps.digits[1] = (c >> 2) & 1;
    ps.digits[2] = (c >> 1) & 1;
    ps.digits[3] = c & 1;
    const StateVector image = op.apply(dxxz::product_state_vector(ps));
    const auto cls = dxxz::classify_cluster(c & 8, c & 4, c & 2, c & 1);
    if (cls == dxxz::ClusterClass::HX) {
      CHECK(image.norm() == 0.0);
    } else {
      dxxz::ProductState flipped = ps;
      std::swap(flipped.digits[1], flipped.digits[2]);
      const double want = cls == dxxz::ClusterClass::H0 ? dxxz::specfun::j0(a) : 1.0;
      CHECK(std::abs(image.amp[flipped.encode()] - cplx(want)) <= 1e-15);
      CHECK(std::fabs(image.norm() - std::fabs(want)) <= 1e-15);
    }
  }
  CHECK_THROWS_AS(model.apply_bond(0, 2, a, StateVector::zero(basis)),
                  dxxz::InvalidArgument);
}

TEST_CASE("operator handles carry names and drive flags", "[operators]") {
  const auto graph = LatticeGraph::chain(4, true);
  const SpinBasis basis(4, 1);
  const Model model(graph, basis, {1.0, 1.0, 2.0, 0.5});
  CHECK(OperatorHandle::h0(model).name() == "h0");
  CHECK_FALSE(OperatorHandle::h0(model).drive_snapshot());
  CHECK(OperatorHandle::h_of_t(model, 0.1).drive_snapshot());
  CHECK(OperatorHandle::v(model, 0.1).drive_snapshot());
  CHECK_FALSE(OperatorHandle::h_eff(model, 0.5).drive_snapshot());
  CHECK(OperatorHandle::h_eff_xy(model, 0.5).name() == "h_eff_xy");
  CHECK(OperatorHandle::h_ising(model).name() == "h_ising");
}

TEST_CASE("dense construction respects the dimension cap", "[operators]") {
  const auto graph = LatticeGraph::chain(13, true);
  const SpinBasis basis(13, 1);
  const Model model(graph, basis, {1.0, 1.0, 1.0, 0.0});
  CHECK_THROWS_AS(dxxz::build_dense(OperatorHandle::h0(model)), dxxz::ResourceError);
  CHECK_NOTHROW(dxxz::build_dense(OperatorHandle::h0(model), 8192));
}

TEST_CASE("basis mismatch is rejected", "[operators]") {
  const auto graph = LatticeGraph::chain(4, true);
  const SpinBasis basis(4, 1);
  const Model model(graph, basis, {1.0, 1.0, 1.0, 0.0});
  const SpinBasis other(5, 1);
  CHECK_THROWS_AS(model.apply_h0(StateVector::zero(other)), dxxz::InvalidArgument);
  CHECK_THROWS_AS(Model(graph, other, {1.0, 1.0, 1.0, 0.0}), dxxz::InvalidArgument);
}

TEST_CASE("delta_j stays slaved to amplitude and omega", "[operators]") {
  ModelParams p{-0.75, -1.0, 10.0, 0.24};
  CHECK(p.delta_j() == Catch::Approx(2.4).margin(1e-15));
  CHECK(p.period() == Catch::Approx(2.0 * M_PI / 10.0).margin(1e-16));
  const ModelParams q = ModelParams::with_delta_j(-0.75, -1.0, 4.0, 2.4);
  CHECK(q.amplitude_a == Catch::Approx(0.6).margin(1e-15));
  CHECK_THROWS_AS(ModelParams::with_delta_j(1.0, 1.0, 0.0, 1.0), dxxz::InvalidArgument);
  CHECK_THROWS_AS((ModelParams{1.0, 1.0, -2.0, 0.1}).validate_driven(),
                  dxxz::InvalidArgument);
}
