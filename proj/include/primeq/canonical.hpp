#ifndef PRIMEQ_CANONICAL_HPP
#define PRIMEQ_CANONICAL_HPP

#include <algorithm>
#include <bit>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "primeq/matrix.hpp"

namespace primeq {

// The n² entries of a matrix with n ≤ 8 packed into one word: entry (i, j)
// occupies bit i·n + j, so entry (0, 0) is the least significant bit.  Keys
// give O(1) hashing/equality for search and a total order on matrices.
constexpr int max_packed_size = 8;

inline std::uint64_t packed_key(const ZeroOneMatrix& a) {
  const int n = a.size();
  if (n > max_packed_size) {
    throw std::invalid_argument("packed_key: size must be at most " +
                                std::to_string(max_packed_size));
  }
  std::uint64_t key = 0;
  for (int i = 0; i < n; ++i) {
    key |= a.row(i) << (i * n);
  }
  return key;
}

inline ZeroOneMatrix matrix_from_key(int n, std::uint64_t key) {
  if (n < 1 || n > max_packed_size) {
    throw std::invalid_argument("matrix_from_key: bad size");
  }
  ZeroOneMatrix a(n);
  const std::uint64_t row_mask = a.column_mask();
  for (int i = 0; i < n; ++i) {
    a.set_row(i, (key >> (i * n)) & row_mask);
  }
  if (n < 8 && (key >> (n * n)) != 0) {
    throw std::invalid_argument("matrix_from_key: key has bits beyond n*n");
  }
  return a;
}

namespace detail {

inline std::vector<std::vector<int>> build_permutation_images(int n) {
  std::vector<int> images(n);
  for (int i = 0; i < n; ++i) images[i] = i;
  std::vector<std::vector<int>> all;
  do {
    all.push_back(images);
  } while (std::next_permutation(images.begin(), images.end()));
  return all;
}

// Image vectors of all permutations of 0..n-1 in lexicographic order,
// built once per process (sizes 1..8 total 46233 vectors).
inline const std::vector<std::vector<int>>& permutation_images(int n) {
  if (n < 1 || n > max_packed_size) {
    throw std::invalid_argument("permutation_images: bad size");
  }
  static const std::vector<std::vector<std::vector<int>>> table = [] {
    std::vector<std::vector<std::vector<int>>> t;
    t.reserve(max_packed_size + 1);
    t.emplace_back();  // unused n = 0 slot
    for (int n = 1; n <= max_packed_size; ++n) {
      t.push_back(build_permutation_images(n));
    }
    return t;
  }();
  return table[n];
}

}  // namespace detail

// All n! permutations of 0..n-1 in lexicographic image order (n ≤ 8).
inline std::vector<Permutation> all_permutations(int n) {
  std::vector<Permutation> out;
  const auto& images = detail::permutation_images(n);
  out.reserve(images.size());
  for (const auto& im : images) out.emplace_back(im);
  return out;
}

// Key of the conjugate P·A·P⁻¹ where images is the permutation's image list:
// bit (i, j) of the input lands at (images[i], images[j]).
inline std::uint64_t conjugate_key(int n, std::uint64_t key,
                                   const std::vector<int>& images) {
  std::uint64_t out = 0;
  while (key) {
    const int b = std::countr_zero(key);
    key &= key - 1;
    out |= std::uint64_t{1} << (images[b / n] * n + images[b % n]);
  }
  return out;
}

// Least key among all conjugates: the canonical representative of the
// conjugation orbit, comparing packed words as integers.
inline std::uint64_t canonical_key(int n, std::uint64_t key) {
  std::uint64_t best = key;
  for (const auto& images : detail::permutation_images(n)) {
    const std::uint64_t k = conjugate_key(n, key, images);
    if (k < best) best = k;
  }
  return best;
}

// True iff no conjugate has a smaller key (early-exit sweep test).
inline bool is_canonical_key(int n, std::uint64_t key) {
  for (const auto& images : detail::permutation_images(n)) {
    if (conjugate_key(n, key, images) < key) return false;
  }
  return true;
}

// Number of distinct conjugates of the matrix behind a key (its orbit size
// under relabeling); used for raw-member counts in classification.
inline std::uint64_t orbit_size(int n, std::uint64_t key) {
  std::vector<std::uint64_t> seen;
  for (const auto& images : detail::permutation_images(n)) {
    seen.push_back(conjugate_key(n, key, images));
  }
  std::sort(seen.begin(), seen.end());
  seen.erase(std::unique(seen.begin(), seen.end()), seen.end());
  return seen.size();
}

struct CanonicalForm {
  ZeroOneMatrix matrix;
  Permutation witness;  // conjugate(input, witness) == matrix
};

// Exhaustive minimization over all n! conjugates.  Returns the least
// conjugate and the lexicographically least permutation achieving it.
inline CanonicalForm canonical_form(const ZeroOneMatrix& a, int limit = 8) {
  if (limit > max_packed_size) limit = max_packed_size;
  const int n = a.size();
  if (n > limit) {
    throw std::invalid_argument("canonical_form: size " + std::to_string(n) +
                                " above limit " + std::to_string(limit));
  }
  const std::uint64_t key = packed_key(a);
  const auto& all_images = detail::permutation_images(n);
  std::uint64_t best = conjugate_key(n, key, all_images[0]);
  const std::vector<int>* best_images = &all_images[0];
  for (const auto& images : all_images) {
    const std::uint64_t k = conjugate_key(n, key, images);
    if (k < best) {
      best = k;
      best_images = &images;
    }
  }
  return CanonicalForm{matrix_from_key(n, best), Permutation(*best_images)};
}

}  // namespace primeq

#endif  // PRIMEQ_CANONICAL_HPP
