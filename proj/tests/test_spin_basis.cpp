#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "dxxz/errors.hpp"
#include "dxxz/spin_basis.hpp"

using dxxz::ladder_coefficient;
using dxxz::parse_spin_string;
using dxxz::ProductState;
using dxxz::SpinBasis;

TEST_CASE("basis dimensions and digit round trips", "[spin_basis]") {
  const SpinBasis half(10, 1);
  CHECK(half.dim() == 1024);
  CHECK(half.local_dim() == 2);
  CHECK(half.spin() == 0.5);

  const SpinBasis one(4, 2);
  CHECK(one.dim() == 81);
  CHECK(one.stride(0) == 1);
  CHECK(one.stride(1) == 3);
  CHECK(one.stride(3) == 27);

  for (std::uint64_t n : {std::uint64_t(0), std::uint64_t(17), std::uint64_t(80)}) {
    const ProductState s = ProductState::decode(one, n);
    CHECK(s.encode() == n);
  }
  // set_digit rewrites exactly one digit
  const std::uint64_t n = 47;
  const std::uint64_t m = one.set_digit(n, 2, 0);
  CHECK(one.digit(m, 2) == 0);
  for (int site : {0, 1, 3}) CHECK(one.digit(m, site) == one.digit(n, site));
}

TEST_CASE("memory cap trips before overflow", "[spin_basis]") {
  CHECK_THROWS_AS(SpinBasis(40, 1), dxxz::ResourceError);
  CHECK_THROWS_AS(SpinBasis(14, 1, 1 << 13), dxxz::ResourceError);
  CHECK_NOTHROW(SpinBasis(13, 1, 1 << 13));
}

TEST_CASE("sz reads signed magnetization", "[spin_basis]") {
  const SpinBasis half(3, 1);
  const std::uint64_t n = 0b101;  // sites 0 and 2 up
  CHECK(half.sz(n, 0) == 0.5);
  CHECK(half.sz(n, 1) == -0.5);
  CHECK(half.sz(n, 2) == 0.5);

  const SpinBasis one(2, 2);  // S = 1, digits 0,1,2 -> m = -1,0,1
  CHECK(one.m_of_digit(0) == -1.0);
  CHECK(one.m_of_digit(1) == 0.0);
  CHECK(one.m_of_digit(2) == 1.0);
}

TEST_CASE("ladder coefficients for S=1/2 and S=1", "[spin_basis]") {
  CHECK(ladder_coefficient(1, -0.5, +1) == 1.0);
  CHECK(ladder_coefficient(1, 0.5, -1) == 1.0);
  CHECK(ladder_coefficient(1, 0.5, +1) == 0.0);   // already at the top
  CHECK(ladder_coefficient(1, -0.5, -1) == 0.0);  // already at the bottom

  const double r2 = std::sqrt(2.0);
  CHECK(ladder_coefficient(2, -1.0, +1) == Catch::Approx(r2).margin(1e-15));
  CHECK(ladder_coefficient(2, 0.0, +1) == Catch::Approx(r2).margin(1e-15));
  CHECK(ladder_coefficient(2, 1.0, +1) == 0.0);
  CHECK(ladder_coefficient(2, 0.0, -1) == Catch::Approx(r2).margin(1e-15));
}

TEST_CASE("spin strings, u/d form", "[spin_basis]") {
  const SpinBasis b(2, 1);
  // leftmost character is site 1 (internal site 0), which is the low bit
  CHECK(parse_spin_string("ud", b).encode() == 1);
  CHECK(parse_spin_string("du", b).encode() == 2);
  CHECK(parse_spin_string("uu", b).encode() == 3);
  CHECK(parse_spin_string("dd", b).encode() == 0);
  CHECK(parse_spin_string("UD", b).encode() == 1);
  CHECK(parse_spin_string("↑↓", b).encode() == 1);

  CHECK_THROWS_AS(parse_spin_string("u", b), dxxz::ParseError);
  CHECK_THROWS_AS(parse_spin_string("uud", b), dxxz::ParseError);
  CHECK_THROWS_AS(parse_spin_string("ux", b), dxxz::ParseError);
}

TEST_CASE("spin strings, comma 2m form", "[spin_basis]") {
  const SpinBasis one(3, 2);
  const ProductState s = parse_spin_string("2,0,-2", one);
  CHECK(s.digits == std::vector<int>{2, 1, 0});
  CHECK(s.m(0) == 1.0);
  CHECK(s.m(2) == -1.0);

  const SpinBasis half(2, 1);
  CHECK(parse_spin_string("1,-1", half).encode() == 1);

  CHECK_THROWS_AS(parse_spin_string("2,0", one), dxxz::ParseError);       // short
  CHECK_THROWS_AS(parse_spin_string("2,0,-2,0", one), dxxz::ParseError);  // long
  CHECK_THROWS_AS(parse_spin_string("3,0,0", one), dxxz::ParseError);     // range
  CHECK_THROWS_AS(parse_spin_string("1,0,0", one), dxxz::ParseError);     // parity
  CHECK_THROWS_AS(parse_spin_string("a,0,0", one), dxxz::ParseError);
}

TEST_CASE("spin_string renders back what was parsed", "[spin_basis]") {
  const SpinBasis half(6, 1);
  CHECK(dxxz::spin_string(parse_spin_string("uduudd", half)) == "uduudd");
  const SpinBasis one(3, 2);
  CHECK(dxxz::spin_string(parse_spin_string("2,0,-2", one)) == "2,0,-2");
}

TEST_CASE("product state vector and norms", "[spin_basis]") {
  const SpinBasis b(3, 1);
  const auto psi = dxxz::product_state_vector(parse_spin_string("uud", b));
  CHECK(psi.amp.size() == 8);
  CHECK(psi.norm() == 1.0);
  CHECK(psi.amp[0b011] == dxxz::cplx(1.0));
  CHECK(dxxz::total_magnetization(psi) == Catch::Approx(0.5).margin(1e-15));

  dxxz::StateVector two = psi;
  two.amp[0] = dxxz::cplx(0.0, 1.0);
  CHECK(two.norm() == Catch::Approx(std::sqrt(2.0)).margin(1e-15));
}
