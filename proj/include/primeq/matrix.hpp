#ifndef PRIMEQ_MATRIX_HPP
#define PRIMEQ_MATRIX_HPP

#include <algorithm>
#include <bit>
#include <cassert>
#include <cstdint>
#include <numeric>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace primeq {

// A square 0-1 matrix over indices 0..n-1.  Each row is stored as a bitmask
// in which bit j (value 1 << j) is the entry in column j, so a row's support
// set and its bitmask are the same object.  n is limited to the word width.
class ZeroOneMatrix {
 public:
  static constexpr int max_size = 64;

  explicit ZeroOneMatrix(int n) : n_(n), rows_(check_size(n), 0) {}

  ZeroOneMatrix(int n, std::vector<std::uint64_t> rows)
      : n_(n), rows_(std::move(rows)) {
    check_size(n);
    if (static_cast<int>(rows_.size()) != n_) {
      throw std::invalid_argument("ZeroOneMatrix: expected " +
                                  std::to_string(n_) + " rows, got " +
                                  std::to_string(rows_.size()));
    }
    for (const std::uint64_t row : rows_) {
      if (row & ~column_mask()) {
        throw std::invalid_argument(
            "ZeroOneMatrix: row has bits outside columns 0.." +
            std::to_string(n_ - 1));
      }
    }
  }

  int size() const { return n_; }

  // All-ones mask over the valid column positions.
  std::uint64_t column_mask() const {
    return n_ == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n_) - 1;
  }

  bool entry(int i, int j) const {
    check_index(i);
    check_index(j);
    return (rows_[i] >> j) & 1u;
  }

  void set_entry(int i, int j, bool value) {
    check_index(i);
    check_index(j);
    if (value) {
      rows_[i] |= std::uint64_t{1} << j;
    } else {
      rows_[i] &= ~(std::uint64_t{1} << j);
    }
  }

  std::uint64_t row(int i) const {
    check_index(i);
    return rows_[i];
  }

  void set_row(int i, std::uint64_t bits) {
    check_index(i);
    if (bits & ~column_mask()) {
      throw std::invalid_argument("ZeroOneMatrix::set_row: bits out of range");
    }
    rows_[i] = bits;
  }

  const std::vector<std::uint64_t>& rows() const { return rows_; }

  friend bool operator==(const ZeroOneMatrix& a, const ZeroOneMatrix& b) {
    return a.n_ == b.n_ && a.rows_ == b.rows_;
  }
  friend bool operator!=(const ZeroOneMatrix& a, const ZeroOneMatrix& b) {
    return !(a == b);
  }

 private:
  static int check_size(int n) {
    if (n < 1 || n > max_size) {
      throw std::invalid_argument("ZeroOneMatrix: size must be in 1.." +
                                  std::to_string(max_size));
    }
    return n;
  }

  void check_index(int i) const {
    if (i < 0 || i >= n_) {
      throw std::invalid_argument("ZeroOneMatrix: index " + std::to_string(i) +
                                  " out of range 0.." + std::to_string(n_ - 1));
    }
  }

  int n_;
  std::vector<std::uint64_t> rows_;
};

// Row with exactly one 1, at column j.
inline std::uint64_t unit_row(int n, int j) {
  if (n < 1 || n > ZeroOneMatrix::max_size) {
    throw std::invalid_argument("unit_row: bad size");
  }
  if (j < 0 || j >= n) {
    throw std::invalid_argument("unit_row: column " + std::to_string(j) +
                                " out of range 0.." + std::to_string(n - 1));
  }
  return std::uint64_t{1} << j;
}

// A finite digraph on vertices 0..n-1.  Loops are allowed; set semantics
// forbid multi-edges.  Edges are kept ordered so iteration is deterministic.
struct Digraph {
  int n = 0;
  std::set<std::pair<int, int>> edges;

  friend bool operator==(const Digraph& a, const Digraph& b) {
    return a.n == b.n && a.edges == b.edges;
  }
};

// Vertex matrix of a digraph: entry (v, w) = 1 iff edge (v, w) exists.
inline ZeroOneMatrix matrix_from_digraph(const Digraph& g) {
  ZeroOneMatrix a(g.n);
  for (const auto& [v, w] : g.edges) {
    if (v < 0 || v >= g.n || w < 0 || w >= g.n) {
      throw std::invalid_argument("matrix_from_digraph: edge endpoint out of range");
    }
    a.set_entry(v, w, true);
  }
  return a;
}

// Inverse of matrix_from_digraph.
inline Digraph digraph_from_matrix(const ZeroOneMatrix& a) {
  Digraph g;
  g.n = a.size();
  for (int v = 0; v < a.size(); ++v) {
    std::uint64_t row = a.row(v);
    while (row) {
      const int w = std::countr_zero(row);
      row &= row - 1;
      g.edges.emplace(v, w);
    }
  }
  return g;
}

// A bijection on 0..n-1, stored as the list of images: i maps to image(i).
class Permutation {
 public:
  explicit Permutation(int n) : images_(check_size(n)) {
    std::iota(images_.begin(), images_.end(), 0);
  }

  explicit Permutation(std::vector<int> images) : images_(std::move(images)) {
    check_size(static_cast<int>(images_.size()));
    std::vector<bool> seen(images_.size(), false);
    for (const int v : images_) {
      if (v < 0 || v >= static_cast<int>(images_.size()) || seen[v]) {
        throw std::invalid_argument("Permutation: images are not a bijection");
      }
      seen[v] = true;
    }
  }

  static Permutation identity(int n) { return Permutation(n); }

  int size() const { return static_cast<int>(images_.size()); }

  int operator()(int i) const {
    if (i < 0 || i >= size()) {
      throw std::invalid_argument("Permutation: index out of range");
    }
    return images_[i];
  }

  const std::vector<int>& images() const { return images_; }

  bool is_identity() const {
    for (int i = 0; i < size(); ++i) {
      if (images_[i] != i) return false;
    }
    return true;
  }

  Permutation inverse() const {
    std::vector<int> inv(images_.size());
    for (int i = 0; i < size(); ++i) inv[images_[i]] = i;
    return Permutation(std::move(inv));
  }

  // Composition acting left-to-right on points: compose(q)(i) = this(q(i)),
  // i.e. the usual function composition this ∘ q.
  Permutation compose(const Permutation& q) const {
    if (q.size() != size()) {
      throw std::invalid_argument("Permutation::compose: size mismatch");
    }
    std::vector<int> out(images_.size());
    for (int i = 0; i < size(); ++i) out[i] = images_[q.images_[i]];
    return Permutation(std::move(out));
  }

  friend bool operator==(const Permutation& a, const Permutation& b) {
    return a.images_ == b.images_;
  }
  friend bool operator!=(const Permutation& a, const Permutation& b) {
    return !(a == b);
  }

 private:
  static int check_size(int n) {
    if (n < 1 || n > ZeroOneMatrix::max_size) {
      throw std::invalid_argument("Permutation: bad size");
    }
    return n;
  }

  std::vector<int> images_;
};

// Relabel a row bitmask by a permutation: bit j moves to bit p(j).
inline std::uint64_t permute_row_bits(std::uint64_t row, const Permutation& p) {
  std::uint64_t out = 0;
  while (row) {
    const int j = std::countr_zero(row);
    row &= row - 1;
    out |= std::uint64_t{1} << p(j);
  }
  return out;
}

// Conjugation P·A·P⁻¹: result(p(i), p(j)) = a(i, j); relabels the digraph's
// vertices by p.
inline ZeroOneMatrix conjugate(const ZeroOneMatrix& a, const Permutation& p) {
  if (p.size() != a.size()) {
    throw std::invalid_argument("conjugate: permutation size mismatch");
  }
  ZeroOneMatrix out(a.size());
  for (int i = 0; i < a.size(); ++i) {
    out.set_row(p(i), permute_row_bits(a.row(i), p));
  }
  return out;
}

// Bitmask from a list of indices; rejects out-of-range and duplicates.
inline std::uint64_t mask_from_indices(const std::vector<int>& indices, int n) {
  std::uint64_t mask = 0;
  for (const int i : indices) {
    if (i < 0 || i >= n) {
      throw std::invalid_argument("index " + std::to_string(i) +
                                  " out of range 0.." + std::to_string(n - 1));
    }
    const std::uint64_t bit = std::uint64_t{1} << i;
    if (mask & bit) {
      throw std::invalid_argument("duplicate index " + std::to_string(i));
    }
    mask |= bit;
  }
  return mask;
}

// Ascending list of the set bit positions of a mask.
inline std::vector<int> indices_from_mask(std::uint64_t mask) {
  std::vector<int> out;
  while (mask) {
    out.push_back(std::countr_zero(mask));
    mask &= mask - 1;
  }
  return out;
}

}  // namespace primeq

#endif  // PRIMEQ_MATRIX_HPP
