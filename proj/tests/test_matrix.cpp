#include <cstdint>
#include <random>
#include <set>
#include <vector>

#include <catch2/catch_amalgamated.hpp>

#include "primeq/matrix.hpp"

using namespace primeq;

namespace {

ZeroOneMatrix random_matrix(int n, std::mt19937& rng, double density = 0.5) {
  std::bernoulli_distribution bit(density);
  ZeroOneMatrix a(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (bit(rng)) a.set_entry(i, j, true);
    }
  }
  return a;
}

Permutation random_permutation(int n, std::mt19937& rng) {
  std::vector<int> images(n);
  for (int i = 0; i < n; ++i) images[i] = i;
  std::shuffle(images.begin(), images.end(), rng);
  return Permutation(images);
}

}  // namespace

TEST_CASE("matrix construction and entry access") {
  ZeroOneMatrix a(3);
  REQUIRE(a.size() == 3);
  for (int i = 0; i < 3; ++i) REQUIRE(a.row(i) == 0);

  a.set_entry(0, 1, true);
  a.set_entry(2, 2, true);
  REQUIRE(a.entry(0, 1));
  REQUIRE_FALSE(a.entry(1, 1));
  REQUIRE(a.row(0) == 0b010);
  REQUIRE(a.row(2) == 0b100);

  a.set_entry(0, 1, false);
  REQUIRE(a.row(0) == 0);

  a.set_row(1, 0b101);
  REQUIRE(a.entry(1, 0));
  REQUIRE(a.entry(1, 2));
  REQUIRE_FALSE(a.entry(1, 1));
}

TEST_CASE("matrix constructor rejects bad arguments") {
  REQUIRE_THROWS_AS(ZeroOneMatrix(0), std::invalid_argument);
  REQUIRE_THROWS_AS(ZeroOneMatrix(65), std::invalid_argument);
  // A row with a bit outside column range 0..n-1 is rejected.
  REQUIRE_THROWS_AS(ZeroOneMatrix(2, {0b100, 0}), std::invalid_argument);
  REQUIRE_THROWS_AS(ZeroOneMatrix(2, {0, 0, 0}), std::invalid_argument);
  REQUIRE_NOTHROW(ZeroOneMatrix(2, {0b11, 0b01}));
}

TEST_CASE("matrix equality") {
  ZeroOneMatrix a(2, {0b01, 0b10});
  ZeroOneMatrix b(2, {0b01, 0b10});
  ZeroOneMatrix c(2, {0b01, 0b11});
  REQUIRE(a == b);
  REQUIRE(a != c);
}

TEST_CASE("unit_row sets exactly one bit") {
  REQUIRE(unit_row(5, 0) == 0b00001);
  REQUIRE(unit_row(5, 4) == 0b10000);
  REQUIRE_THROWS_AS(unit_row(5, 5), std::invalid_argument);
  REQUIRE_THROWS_AS(unit_row(5, -1), std::invalid_argument);
}

TEST_CASE("column_mask covers exactly the valid column bits") {
  REQUIRE(ZeroOneMatrix(3).column_mask() == 0b111);
  REQUIRE(ZeroOneMatrix(1).column_mask() == 0b1);
  REQUIRE(ZeroOneMatrix(8).column_mask() == 0xFF);
  REQUIRE(ZeroOneMatrix(64).column_mask() == ~std::uint64_t{0});
}

TEST_CASE("digraph and matrix are in bijection") {
  SECTION("explicit example") {
    Digraph g;
    g.n = 3;
    g.edges = {{0, 1}, {1, 1}, {2, 0}};
    ZeroOneMatrix a = matrix_from_digraph(g);
    REQUIRE(a.entry(0, 1));
    REQUIRE(a.entry(1, 1));
    REQUIRE(a.entry(2, 0));
    REQUIRE(a.row(0) == 0b010);
    REQUIRE(digraph_from_matrix(a).edges == g.edges);
  }

  SECTION("random round trips") {
    std::mt19937 rng(20240301);
    for (int trial = 0; trial < 200; ++trial) {
      const int n = 1 + static_cast<int>(rng() % 8);
      ZeroOneMatrix a = random_matrix(n, rng);
      Digraph g = digraph_from_matrix(a);
      REQUIRE(g.n == n);
      REQUIRE(matrix_from_digraph(g) == a);
      for (const auto& [u, v] : g.edges) REQUIRE(a.entry(u, v));
      std::set<std::pair<int, int>> expected;
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
          if (a.entry(i, j)) expected.insert({i, j});
        }
      }
      REQUIRE(g.edges == expected);
    }
  }
}

TEST_CASE("permutation validation and basics") {
  REQUIRE_THROWS_AS(Permutation(std::vector<int>{}), std::invalid_argument);
  REQUIRE_THROWS_AS(Permutation({0, 0}), std::invalid_argument);
  REQUIRE_THROWS_AS(Permutation({0, 2}), std::invalid_argument);

  Permutation id = Permutation::identity(4);
  REQUIRE(id.is_identity());
  for (int i = 0; i < 4; ++i) REQUIRE(id(i) == i);

  Permutation swap01({1, 0, 2});
  REQUIRE_FALSE(swap01.is_identity());
  REQUIRE(swap01(0) == 1);
  REQUIRE(swap01(1) == 0);
  REQUIRE(swap01.inverse() == swap01);
}

TEST_CASE("permutation inverse and composition") {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 8);
    Permutation p = random_permutation(n, rng);
    Permutation q = random_permutation(n, rng);
    Permutation inv = p.inverse();
    for (int i = 0; i < n; ++i) {
      REQUIRE(inv(p(i)) == i);
      REQUIRE(p(inv(i)) == i);
      // compose(q) applies q first, then this permutation.
      REQUIRE(p.compose(q)(i) == p(q(i)));
    }
    REQUIRE(p.compose(p.inverse()).is_identity());
  }
}

TEST_CASE("conjugation relabels rows and columns together") {
  SECTION("one-edge example") {
    // The matrix with single entry (0,1), conjugated by the swap of 0 and 1,
    // becomes the matrix with single entry (1,0).
    ZeroOneMatrix a(2, {0b10, 0b00});
    REQUIRE(a.entry(0, 1));
    ZeroOneMatrix b = conjugate(a, Permutation({1, 0}));
    REQUIRE(b.entry(1, 0));
    REQUIRE(b.row(0) == 0);
    REQUIRE(b.row(1) == 0b01);
  }

  SECTION("entries move by (i,j) -> (p(i),p(j))") {
    std::mt19937 rng(99);
    for (int trial = 0; trial < 100; ++trial) {
      const int n = 2 + static_cast<int>(rng() % 7);
      ZeroOneMatrix a = random_matrix(n, rng);
      Permutation p = random_permutation(n, rng);
      ZeroOneMatrix b = conjugate(a, p);
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
          REQUIRE(b.entry(p(i), p(j)) == a.entry(i, j));
        }
      }
    }
  }

  SECTION("group action laws") {
    std::mt19937 rng(42);
    for (int trial = 0; trial < 100; ++trial) {
      const int n = 2 + static_cast<int>(rng() % 7);
      ZeroOneMatrix a = random_matrix(n, rng);
      Permutation p = random_permutation(n, rng);
      Permutation q = random_permutation(n, rng);
      REQUIRE(conjugate(a, Permutation::identity(n)) == a);
      REQUIRE(conjugate(conjugate(a, p), q) == conjugate(a, q.compose(p)));
      REQUIRE(conjugate(conjugate(a, p), p.inverse()) == a);
    }
  }
}

TEST_CASE("permute_row_bits matches conjugation on columns") {
  std::mt19937 rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 8);
    ZeroOneMatrix a = random_matrix(n, rng);
    Permutation p = random_permutation(n, rng);
    ZeroOneMatrix b = conjugate(a, p);
    for (int i = 0; i < n; ++i) {
      REQUIRE(b.row(p(i)) == permute_row_bits(a.row(i), p));
    }
  }
}

TEST_CASE("mask and index-list conversions") {
  REQUIRE(mask_from_indices({2, 3, 5}, 8) == 0b00101100);
  REQUIRE(mask_from_indices({}, 8) == 0);
  REQUIRE(mask_from_indices({5, 3, 2}, 8) == 0b00101100);
  REQUIRE_THROWS_AS(mask_from_indices({8}, 8), std::invalid_argument);
  REQUIRE_THROWS_AS(mask_from_indices({-1}, 8), std::invalid_argument);
  REQUIRE_THROWS_AS(mask_from_indices({2, 2}, 8), std::invalid_argument);

  REQUIRE(indices_from_mask(0b00101100) == std::vector<int>{2, 3, 5});
  REQUIRE(indices_from_mask(0).empty());

  std::mt19937 rng(17);
  for (int trial = 0; trial < 100; ++trial) {
    const std::uint64_t mask = rng() & 0xFFFFu;
    REQUIRE(mask_from_indices(indices_from_mask(mask), 16) == mask);
  }
}
