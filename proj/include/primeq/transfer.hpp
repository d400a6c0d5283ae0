#ifndef PRIMEQ_TRANSFER_HPP
#define PRIMEQ_TRANSFER_HPP

#include <bit>
#include <cassert>
#include <cstdint>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "primeq/matrix.hpp"

namespace primeq {

// A primitive transfer at pivot p: row p is rewritten using the identity
// A_p = Σ_{m∈M} A_m + Σ_{k∈K} E_k.  M (the summed rows) and K (the unit
// columns) are bitmasks over 0..n-1; |M| is the transfer's size.
struct PrimitiveTransfer {
  int p = 0;
  std::uint64_t M = 0;
  std::uint64_t K = 0;

  int size() const { return std::popcount(M); }

  friend bool operator==(const PrimitiveTransfer& a,
                         const PrimitiveTransfer& b) {
    return a.p == b.p && a.M == b.M && a.K == b.K;
  }
  friend bool operator!=(const PrimitiveTransfer& a,
                         const PrimitiveTransfer& b) {
    return !(a == b);
  }
};

namespace detail {

inline void check_transfer_range(const ZeroOneMatrix& a,
                                 const PrimitiveTransfer& t) {
  if (t.p < 0 || t.p >= a.size()) {
    throw std::invalid_argument("transfer pivot " + std::to_string(t.p) +
                                " out of range 0.." +
                                std::to_string(a.size() - 1));
  }
  if ((t.M | t.K) & ~a.column_mask()) {
    throw std::invalid_argument("transfer index set out of range 0.." +
                                std::to_string(a.size() - 1));
  }
}

// Union of the rows of a over M if they are pairwise support-disjoint,
// otherwise nullopt.
inline std::optional<std::uint64_t> disjoint_row_union(const ZeroOneMatrix& a,
                                                       std::uint64_t M) {
  std::uint64_t acc = 0;
  while (M) {
    const int m = std::countr_zero(M);
    M &= M - 1;
    const std::uint64_t row = a.row(m);
    if (row & acc) return std::nullopt;
    acc |= row;
  }
  return acc;
}

}  // namespace detail

// True iff the defining row equation holds exactly over the integers: the
// rows over M are pairwise support-disjoint, K is disjoint from their union,
// the union together with K is exactly support(A_p), p ∉ M and M ∩ K = ∅.
inline bool validate(const ZeroOneMatrix& a, const PrimitiveTransfer& t) {
  detail::check_transfer_range(a, t);
  if ((t.M >> t.p) & 1u) return false;
  if (t.M & t.K) return false;
  const auto acc = detail::disjoint_row_union(a, t.M);
  if (!acc) return false;
  if (*acc & t.K) return false;
  return (*acc | t.K) == a.row(t.p);
}

// Replace row p by the indicator of M ∪ K (the rewritten right-hand side).
inline ZeroOneMatrix apply(const ZeroOneMatrix& a, const PrimitiveTransfer& t) {
  if (!validate(a, t)) {
    throw std::invalid_argument("apply: transfer is not valid on this matrix");
  }
#ifndef NDEBUG
  // The subtraction form B_p = A_p − Σ_{m∈M} A_m + Σ_{m∈M} E_m must agree
  // with the indicator form.
  const std::uint64_t acc = *detail::disjoint_row_union(a, t.M);
  assert(((a.row(t.p) & ~acc) | t.M) == (t.M | t.K));
#endif
  ZeroOneMatrix b = a;
  b.set_row(t.p, t.M | t.K);
  return b;
}

// Reconstruct the unique preimage of b under t if one exists: rows off p are
// kept and row p becomes Σ_{m∈M} B_m + Σ_{k∈K} E_k.  Returns nullopt when
// row p of b is not the M ∪ K indicator or the sum is not a 0-1 row.
inline std::optional<ZeroOneMatrix> try_invert(const ZeroOneMatrix& b,
                                               const PrimitiveTransfer& t) {
  detail::check_transfer_range(b, t);
  if (((t.M >> t.p) & 1u) || (t.M & t.K)) return std::nullopt;
  if (b.row(t.p) != (t.M | t.K)) return std::nullopt;
  const auto acc = detail::disjoint_row_union(b, t.M);
  if (!acc || (*acc & t.K)) return std::nullopt;
  ZeroOneMatrix a = b;
  a.set_row(t.p, *acc | t.K);
  assert(validate(a, t));
  return a;
}

// Throwing form of try_invert with the reason spelled out.
inline ZeroOneMatrix invert(const ZeroOneMatrix& b, const PrimitiveTransfer& t) {
  detail::check_transfer_range(b, t);
  if ((t.M >> t.p) & 1u) {
    throw std::invalid_argument("invert: pivot is contained in M");
  }
  if (t.M & t.K) {
    throw std::invalid_argument("invert: M and K intersect");
  }
  if (b.row(t.p) != (t.M | t.K)) {
    throw std::invalid_argument(
        "invert: row p of b is not the M ∪ K indicator");
  }
  const auto acc = detail::disjoint_row_union(b, t.M);
  if (!acc) {
    throw std::invalid_argument(
        "invert: rows of b over M are not support-disjoint");
  }
  if (*acc & t.K) {
    throw std::invalid_argument(
        "invert: reconstructed row p would not be a 0-1 row");
  }
  ZeroOneMatrix a = b;
  a.set_row(t.p, *acc | t.K);
  return a;
}

// All valid transfers of a, ordered by pivot ascending then M as an ascending
// bitmask.  For fixed (p, M) the equation forces K = support(A_p) minus the
// members' union, so only (p, M) is searched.  Size-0 transfers (M = ∅,
// identity moves) are included only when include_trivial is set.
inline std::vector<PrimitiveTransfer> enumerate(const ZeroOneMatrix& a,
                                                bool include_trivial = false) {
  std::vector<PrimitiveTransfer> out;
  const int n = a.size();
  for (int p = 0; p < n; ++p) {
    const std::uint64_t supp = a.row(p);
    std::uint64_t cand = 0;
    for (int m = 0; m < n; ++m) {
      if (m != p && (a.row(m) & ~supp) == 0) cand |= std::uint64_t{1} << m;
    }
    std::uint64_t M = 0;
    while (true) {
      const auto acc = detail::disjoint_row_union(a, M);
      if (acc) {
        const std::uint64_t K = supp & ~*acc;
        if (!(M & K) && !(*acc & K) && (M != 0 || include_trivial)) {
          out.push_back(PrimitiveTransfer{p, M, K});
        }
      }
      if (M == cand) break;
      M = (M - cand) & cand;  // next submask of cand in ascending order
    }
  }
  return out;
}

// Induced subgraph of the digraph on the vertex set M, with its partition
// into weak (undirected) components.  Validity forces in-degree ≤ 1 inside
// the graph: each column of M is covered by at most one member row.
struct TransferGraph {
  std::uint64_t vertices = 0;
  std::vector<std::pair<int, int>> edges;  // sorted (source, target)
  std::vector<std::uint64_t> components;   // masks, ascending by least vertex

  friend bool operator==(const TransferGraph& a, const TransferGraph& b) {
    return a.vertices == b.vertices && a.edges == b.edges &&
           a.components == b.components;
  }
};

namespace detail {

struct UnionFind {
  std::vector<int> parent;

  explicit UnionFind(int n) : parent(n) {
    std::iota(parent.begin(), parent.end(), 0);
  }

  int find(int x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }

  void unite(int a, int b) { parent[find(a)] = find(b); }
};

}  // namespace detail

inline TransferGraph transfer_graph(const ZeroOneMatrix& a,
                                    const PrimitiveTransfer& t) {
  if (!validate(a, t)) {
    throw std::invalid_argument(
        "transfer_graph: transfer is not valid on this matrix");
  }
  TransferGraph g;
  g.vertices = t.M;
  detail::UnionFind uf(a.size());
  std::uint64_t rest = t.M;
  while (rest) {
    const int u = std::countr_zero(rest);
    rest &= rest - 1;
    std::uint64_t targets = a.row(u) & t.M;
    while (targets) {
      const int v = std::countr_zero(targets);
      targets &= targets - 1;
      g.edges.emplace_back(u, v);
      uf.unite(u, v);
    }
  }
  // edges are generated with u ascending and v ascending within u, hence sorted
  assert(std::is_sorted(g.edges.begin(), g.edges.end()));
#ifndef NDEBUG
  {
    std::uint64_t targets_seen = 0;
    for (const auto& [u, v] : g.edges) {
      assert(!((targets_seen >> v) & 1u) && "in-degree above 1 inside graph");
      targets_seen |= std::uint64_t{1} << v;
    }
  }
#endif
  std::vector<std::uint64_t> by_root(a.size(), 0);
  std::uint64_t verts = t.M;
  while (verts) {
    const int u = std::countr_zero(verts);
    verts &= verts - 1;
    by_root[uf.find(u)] |= std::uint64_t{1} << u;
  }
  for (const std::uint64_t mask : by_root) {
    if (mask) g.components.push_back(mask);
  }
  std::sort(g.components.begin(), g.components.end(),
            [](std::uint64_t x, std::uint64_t y) {
              return std::countr_zero(x) < std::countr_zero(y);
            });
  return g;
}

}  // namespace primeq

#endif  // PRIMEQ_TRANSFER_HPP
