#ifndef PRIMEQ_DECOMPOSE_HPP
#define PRIMEQ_DECOMPOSE_HPP

#include <algorithm>
#include <bit>
#include <cassert>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "primeq/matrix.hpp"
#include "primeq/transfer.hpp"

namespace primeq {

// One step of an equivalence chain: apply a transfer, un-apply a transfer
// (the predecessor is the matrix of which the current one is a transfer), or
// conjugate by a permutation.
enum class MoveKind { forward_transfer, reverse_transfer, permute };

struct Move {
  MoveKind kind = MoveKind::forward_transfer;
  PrimitiveTransfer transfer;        // set for the two transfer kinds
  std::optional<Permutation> perm;   // set for permute

  static Move forward(PrimitiveTransfer t) {
    return Move{MoveKind::forward_transfer, t, std::nullopt};
  }
  static Move reverse(PrimitiveTransfer t) {
    return Move{MoveKind::reverse_transfer, t, std::nullopt};
  }
  static Move permute_by(Permutation p) {
    return Move{MoveKind::permute, PrimitiveTransfer{}, std::move(p)};
  }

  friend bool operator==(const Move& a, const Move& b) {
    if (a.kind != b.kind) return false;
    if (a.kind == MoveKind::permute) return a.perm == b.perm;
    return a.transfer == b.transfer;
  }
  friend bool operator!=(const Move& a, const Move& b) { return !(a == b); }
};

// A certified chain: replaying moves from initial must reproduce final.
// When intermediates are embedded they hold the whole chain C_0..C_L
// (moves.size() + 1 matrices); verification never trusts them.
struct MoveSequence {
  ZeroOneMatrix initial;
  std::vector<Move> moves;
  ZeroOneMatrix final_matrix;
  std::vector<ZeroOneMatrix> intermediates;
};

// Advance one chain state by one move.  Throws std::invalid_argument when the
// move is not applicable at this state.
inline ZeroOneMatrix apply_move(const ZeroOneMatrix& current, const Move& move) {
  switch (move.kind) {
    case MoveKind::forward_transfer:
      return apply(current, move.transfer);
    case MoveKind::reverse_transfer:
      return invert(current, move.transfer);
    case MoveKind::permute:
      if (!move.perm) {
        throw std::invalid_argument("permute move without a permutation");
      }
      return conjugate(current, *move.perm);
  }
  throw std::invalid_argument("unknown move kind");
}

struct VerifyResult {
  bool ok = false;
  int failing_move = -1;  // index of the first failing move; -1 if none
  std::string reason;
};

// Replay the chain from initial.  Forward transfers must validate before
// application; reverse transfers must admit the unique preimage; the replay
// must end bitwise at final.
inline VerifyResult verify(const MoveSequence& seq) {
  if (seq.initial.size() != seq.final_matrix.size()) {
    return VerifyResult{false, -1, "initial and final sizes differ"};
  }
  ZeroOneMatrix current = seq.initial;
  for (int i = 0; i < static_cast<int>(seq.moves.size()); ++i) {
    try {
      current = apply_move(current, seq.moves[i]);
    } catch (const std::invalid_argument& e) {
      return VerifyResult{false, i, e.what()};
    }
  }
  if (current != seq.final_matrix) {
    return VerifyResult{false, -1,
                        "replayed final matrix does not match the recorded final"};
  }
  return VerifyResult{true, -1, ""};
}

// A non-loop edge (l, n_vertex) of a transfer graph together with
// J = {j : A(l, j) = 1 and j ≠ n_vertex}, the splice's unit columns.
struct PeelStep {
  int l = 0;
  int n_vertex = 0;
  std::uint64_t J = 0;
};

inline PeelStep peel_step(const ZeroOneMatrix& a, const PrimitiveTransfer& t,
                          int l, int n_vertex) {
  if (!validate(a, t)) {
    throw std::invalid_argument("peel_step: transfer is not valid");
  }
  if (l == n_vertex) {
    throw std::invalid_argument("peel_step: loop edges cannot be peeled");
  }
  const std::uint64_t lbit = std::uint64_t{1} << l;
  const std::uint64_t nbit = std::uint64_t{1} << n_vertex;
  if (!(t.M & lbit) || !(t.M & nbit) || !(a.row(l) & nbit)) {
    throw std::invalid_argument(
        "peel_step: (l, n) is not an edge of the transfer graph");
  }
  return PeelStep{l, n_vertex, a.row(l) & ~nbit};
}

struct PeelResult {
  ZeroOneMatrix c;
  PrimitiveTransfer back;  // (l, {n}, J): applying it to c gives back a
  PrimitiveTransfer rest;  // (p, M \ {n}, K ∪ {n}): valid on c
};

// Splice row l across the edge (l, n): row l of c becomes A_l + A_n − E_n
// (a 0-1 row because member rows are disjoint and n, having l → n as its one
// incoming edge, carries no loop).  Then
//   apply(c, back) == a                      (the splice undone), and
//   apply(c, rest) == apply(a, t) with row l replaced by c's row l
// (rest never restores the spliced row; the splice survives until back is
// replayed forward).  rest's graph inherits an edge (l, m) whenever (n, m)
// was an edge, so it stays connected when t's graph was.
inline PeelResult peel_edge(const ZeroOneMatrix& a, const PrimitiveTransfer& t,
                            const PeelStep& step) {
  if (!validate(a, t)) {
    throw std::invalid_argument("peel_edge: transfer is not valid");
  }
  if (t.size() < 2) {
    throw std::invalid_argument("peel_edge: transfer size must be at least 2");
  }
  const int l = step.l;
  const int nv = step.n_vertex;
  if (l == nv) {
    throw std::invalid_argument("peel_edge: loop edges cannot be peeled");
  }
  const std::uint64_t lbit = std::uint64_t{1} << l;
  const std::uint64_t nbit = std::uint64_t{1} << nv;
  if (!(t.M & lbit) || !(t.M & nbit) || !(a.row(l) & nbit)) {
    throw std::invalid_argument(
        "peel_edge: (l, n) is not an edge of the transfer graph");
  }
  if (step.J != (a.row(l) & ~nbit)) {
    throw std::invalid_argument("peel_edge: step's J does not match row l");
  }
  assert((a.row(l) & a.row(nv)) == 0 && "member rows must be disjoint");
  assert((a.row(nv) & nbit) == 0 && "target of a non-loop edge has no loop");

  PeelResult r{a, PrimitiveTransfer{l, nbit, step.J},
               PrimitiveTransfer{t.p, t.M & ~nbit, t.K | nbit}};
  r.c.set_row(l, (a.row(l) | a.row(nv)) & ~nbit);
  assert(validate(r.c, r.back));
  assert(validate(r.c, r.rest));
  assert(apply(r.c, r.back) == a);
  return r;
}

struct SplitResult {
  ZeroOneMatrix d;           // apply(a, first)
  PrimitiveTransfer first;   // (p, F, K ∪ J): valid on a, graph = F's
  PrimitiveTransfer second;  // (p, M \ F, K ∪ F): valid on d
};

// Factor a transfer across one weak component F of its graph: first performs
// only F's rows (J collects the support columns of the other members) and
// second performs the remainder, with apply(d, second) == apply(a, t).
inline SplitResult split_component(const ZeroOneMatrix& a,
                                   const PrimitiveTransfer& t,
                                   std::uint64_t f) {
  const TransferGraph g = transfer_graph(a, t);  // validates t
  if (g.components.size() < 2) {
    throw std::invalid_argument(
        "split_component: the graph has no second component to split from");
  }
  bool is_component = false;
  for (const std::uint64_t c : g.components) is_component |= (c == f);
  if (!is_component) {
    throw std::invalid_argument(
        "split_component: f is not a weak component of the transfer graph");
  }
  std::uint64_t j = 0;
  std::uint64_t rest = t.M & ~f;
  while (rest) {
    const int h = std::countr_zero(rest);
    rest &= rest - 1;
    j |= a.row(h);
  }
  SplitResult r{a, PrimitiveTransfer{t.p, f, t.K | j},
                PrimitiveTransfer{t.p, t.M & ~f, t.K | f}};
  assert(validate(a, r.first));
  r.d = apply(a, r.first);
  assert(validate(r.d, r.second));
  assert(apply(r.d, r.second) == apply(a, t));
  return r;
}

namespace detail {

// Directed cycle of an in-degree ≤ 1 graph, as the vertex list
// v_0 → v_1 → ... → v_{k-1} → v_0 with v_0 the smallest cycle vertex;
// empty when the graph (restricted to the given component) is acyclic.
// Loops count as length-1 cycles.
inline std::vector<int> find_cycle(const ZeroOneMatrix& a, std::uint64_t verts) {
  std::vector<int> pred(a.size(), -1);
  std::uint64_t rest = verts;
  while (rest) {
    const int u = std::countr_zero(rest);
    rest &= rest - 1;
    std::uint64_t targets = a.row(u) & verts;
    while (targets) {
      const int v = std::countr_zero(targets);
      targets &= targets - 1;
      assert(pred[v] == -1 && "in-degree above 1");
      pred[v] = u;
    }
  }
  std::vector<int> stamp(a.size(), -1);
  rest = verts;
  while (rest) {
    const int start = std::countr_zero(rest);
    rest &= rest - 1;
    if (stamp[start] != -1) continue;
    int x = start;
    while (x != -1 && stamp[x] == -1) {
      stamp[x] = start;
      x = pred[x];
    }
    if (x == -1 || stamp[x] != start) continue;  // ran into older territory
    // x lies on a cycle: walk predecessors to collect it, then orient it.
    std::vector<int> walk{x};
    for (int y = pred[x]; y != x; y = pred[y]) walk.push_back(y);
    // walk = [x, pred(x), pred²(x), ...]; reversing all but the anchor turns
    // predecessor order into successor order x → walk.back() → ... → x.
    std::vector<int> cycle{walk.begin(), walk.end()};
    std::reverse(cycle.begin() + 1, cycle.end());
    // rotate so the smallest vertex leads
    const auto min_it = std::min_element(cycle.begin(), cycle.end());
    std::rotate(cycle.begin(), min_it, cycle.end());
    return cycle;
  }
  return {};
}

// Emit size-1 moves turning cur into apply(cur, s), for s with a connected
// graph: break the directed cycle (if any) by peeling at its smallest vertex,
// absorb every member the moment its size-1 transfer validates, then replay
// the peels forward in reverse order to restore the spliced row.
inline void decompose_connected(ZeroOneMatrix& cur, PrimitiveTransfer s,
                                std::vector<Move>& moves) {
  const ZeroOneMatrix target = apply(cur, s);
  std::vector<PrimitiveTransfer> peeled;

  std::vector<int> cycle = find_cycle(cur, s.M);
  while (cycle.size() >= 2) {
    const int l = cycle[0];
    const int succ = cycle[1];
    const PeelResult pr = peel_edge(cur, s, peel_step(cur, s, l, succ));
    moves.push_back(Move::reverse(pr.back));
    peeled.push_back(pr.back);
    cur = pr.c;
    s = pr.rest;
    cycle = find_cycle(cur, s.M);
  }

  while (s.M) {
    bool advanced = false;
    std::uint64_t members = s.M;
    while (members) {
      const int m = std::countr_zero(members);
      members &= members - 1;
      const PrimitiveTransfer one{s.p, std::uint64_t{1} << m,
                                  cur.row(s.p) & ~cur.row(m)};
      if (!validate(cur, one)) continue;
      moves.push_back(Move::forward(one));
      cur = apply(cur, one);
      s = PrimitiveTransfer{s.p, s.M & ~one.M, s.K | one.M};
      advanced = true;
      break;
    }
    if (!advanced) {
      throw std::logic_error("decompose: no member is ready to absorb");
    }
  }

  for (auto it = peeled.rbegin(); it != peeled.rend(); ++it) {
    moves.push_back(Move::forward(*it));
    cur = apply(cur, *it);
  }

  if (cur != target) {
    throw std::logic_error("decompose: replay of a connected factor drifted");
  }
}

}  // namespace detail

// Chain of size-1 transfer moves from a to apply(a, t): components are split
// off smallest-vertex-first; each connected factor contributes k − 1 reverse
// moves (k = its cycle length, if it has a cycle) and |factor| forward moves,
// plus k − 1 forward moves replaying the peeled splices.  No permute moves.
inline MoveSequence decompose(const ZeroOneMatrix& a, const PrimitiveTransfer& t,
                              bool embed_intermediates = false) {
  const ZeroOneMatrix b = apply(a, t);  // also validates t
  MoveSequence seq{a, {}, b, {}};

  ZeroOneMatrix cur = a;
  PrimitiveTransfer rem = t;
  while (rem.M) {
    const TransferGraph g = transfer_graph(cur, rem);
    if (g.components.size() > 1) {
      const SplitResult sr = split_component(cur, rem, g.components[0]);
      detail::decompose_connected(cur, sr.first, seq.moves);
      rem = sr.second;
    } else {
      detail::decompose_connected(cur, rem, seq.moves);
      rem = PrimitiveTransfer{rem.p, 0, 0};
    }
  }
  if (cur != b) {
    throw std::logic_error("decompose: replayed chain does not reach apply(a, t)");
  }

  if (embed_intermediates) {
    seq.intermediates.push_back(a);
    ZeroOneMatrix state = a;
    for (const Move& m : seq.moves) {
      state = apply_move(state, m);
      seq.intermediates.push_back(state);
    }
  }
  return seq;
}

}  // namespace primeq

#endif  // PRIMEQ_DECOMPOSE_HPP
