#ifndef PRIMEQ_SEARCH_HPP
#define PRIMEQ_SEARCH_HPP

#include <algorithm>
#include <bit>
#include <cassert>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "primeq/canonical.hpp"
#include "primeq/decompose.hpp"
#include "primeq/io.hpp"
#include "primeq/matrix.hpp"
#include "primeq/transfer.hpp"

namespace primeq {

// True iff the digraph is strongly connected through walks of length ≥ 1:
// for every ordered pair (i, j), some walk i → j exists.  For n = 1 this
// makes [[1]] irreducible and [[0]] not.
inline bool is_irreducible(const ZeroOneMatrix& a) {
  const int n = a.size();
  std::vector<std::uint64_t> reach(a.rows().begin(), a.rows().end());
  for (int round = 0; round < n; ++round) {
    bool changed = false;
    for (int i = 0; i < n; ++i) {
      std::uint64_t acc = reach[i];
      std::uint64_t frontier = reach[i];
      while (frontier) {
        const int j = std::countr_zero(frontier);
        frontier &= frontier - 1;
        acc |= reach[j];
      }
      if (acc != reach[i]) {
        reach[i] = acc;
        changed = true;
      }
    }
    if (!changed) break;
  }
  const std::uint64_t full = a.column_mask();
  for (int i = 0; i < n; ++i) {
    if (reach[i] != full) return false;
  }
  return true;
}

// All states one nontrivial move away: every forward transfer, then every
// reverse transfer (matrices c admitting a transfer onto a, found by choosing
// M inside support(A_p) and reconstructing c's row p).  Permutation moves are
// not expanded here; search tracks them through canonical forms.
inline std::vector<std::pair<Move, ZeroOneMatrix>> neighbors(
    const ZeroOneMatrix& a) {
  std::vector<std::pair<Move, ZeroOneMatrix>> out;
  for (const PrimitiveTransfer& t : enumerate(a)) {
    out.emplace_back(Move::forward(t), apply(a, t));
  }
  const int n = a.size();
  for (int p = 0; p < n; ++p) {
    const std::uint64_t supp = a.row(p);
    const std::uint64_t cand = supp & ~(std::uint64_t{1} << p);
    std::uint64_t M = 0;
    while (true) {
      if (M) {
        const PrimitiveTransfer t{p, M, supp & ~M};
        if (auto c = try_invert(a, t)) {
          assert(c->size() == n);
          out.emplace_back(Move::reverse(t), std::move(*c));
        }
      }
      if (M == cand) break;
      M = (M - cand) & cand;
    }
  }
  return out;
}

namespace detail {

// Size-1 moves only.  decompose() factors any transfer into size-1 moves,
// so these generate the same reachability as all transfer moves with far
// smaller branching, and chains built from them contain only size-1
// transfers.
inline std::vector<std::pair<Move, ZeroOneMatrix>> size1_moves(
    const ZeroOneMatrix& a) {
  std::vector<std::pair<Move, ZeroOneMatrix>> out;
  const int n = a.size();
  for (int p = 0; p < n; ++p) {
    const std::uint64_t supp = a.row(p);
    for (int m = 0; m < n; ++m) {
      if (m == p) continue;
      const PrimitiveTransfer t{p, std::uint64_t{1} << m, supp & ~a.row(m)};
      if (validate(a, t)) {
        out.emplace_back(Move::forward(t), apply(a, t));
      }
    }
  }
  for (int p = 0; p < n; ++p) {
    const std::uint64_t supp = a.row(p);
    for (int m = 0; m < n; ++m) {
      if (m == p || !((supp >> m) & 1u)) continue;
      const PrimitiveTransfer t{p, std::uint64_t{1} << m,
                                supp & ~(std::uint64_t{1} << m)};
      if (auto c = try_invert(a, t)) {
        out.emplace_back(Move::reverse(t), std::move(*c));
      }
    }
  }
  return out;
}

}  // namespace detail

struct SearchLimits {
  std::uint64_t max_states = std::uint64_t{1} << 25;
  int max_class_n = 4;  // exhaustive classification limit; 5 by override
};

enum class Verdict { equivalent, not_equivalent, unknown };

struct EquivalenceResult {
  Verdict verdict = Verdict::unknown;
  std::optional<MoveSequence> certificate;
  std::uint64_t states_explored = 0;
};

namespace detail {

struct RawEdge {
  std::uint64_t parent = 0;
  Move move;
};

// Moves along the tree path root ⇝ key, in chain order.
inline std::vector<Move> path_from_root(
    const std::unordered_map<std::uint64_t, RawEdge>& tree, std::uint64_t root,
    std::uint64_t key) {
  std::vector<Move> moves;
  while (key != root) {
    const RawEdge& e = tree.at(key);
    moves.push_back(e.move);
    key = e.parent;
  }
  std::reverse(moves.begin(), moves.end());
  return moves;
}

inline Move flip_move(const Move& m) {
  switch (m.kind) {
    case MoveKind::forward_transfer:
      return Move::reverse(m.transfer);
    case MoveKind::reverse_transfer:
      return Move::forward(m.transfer);
    case MoveKind::permute:
      return Move::permute_by(m.perm->inverse());
  }
  throw std::logic_error("flip_move: unknown kind");
}

// Moves along the reversed tree path key ⇝ root, each edge undone.
inline std::vector<Move> path_to_root(
    const std::unordered_map<std::uint64_t, RawEdge>& tree, std::uint64_t root,
    std::uint64_t key) {
  std::vector<Move> moves;
  while (key != root) {
    const RawEdge& e = tree.at(key);
    moves.push_back(flip_move(e.move));
    key = e.parent;
  }
  return moves;
}

}  // namespace detail

// Decide primitive equivalence (n ≤ 8).  Conjugation commutes with transfers
// — relabeling a matrix relabels its transfers — so every mixed chain
// normalizes to transfers followed by one permutation; the search therefore
// runs a bidirectional breadth-first search over raw matrices under size-1
// transfer moves, and if one side's closure completes without meeting, sweeps
// the other matrix's n! conjugates against that closure before answering
// definitively.  Certificates are replayed through verify before returning.
inline EquivalenceResult are_equivalent(const ZeroOneMatrix& a,
                                        const ZeroOneMatrix& b,
                                        const SearchLimits& limits = {}) {
  if (a.size() != b.size()) {
    return EquivalenceResult{Verdict::not_equivalent, std::nullopt, 0};
  }
  const int n = a.size();
  if (n > max_packed_size) {
    throw std::invalid_argument("are_equivalent: size must be at most " +
                                std::to_string(max_packed_size));
  }
  const std::uint64_t key_a = packed_key(a);
  const std::uint64_t key_b = packed_key(b);

  auto finish = [&](std::vector<Move> moves,
                    std::uint64_t states) -> EquivalenceResult {
    MoveSequence seq{a, std::move(moves), b, {}};
    const VerifyResult vr = verify(seq);
    if (!vr.ok) {
      throw std::logic_error("are_equivalent: built a certificate that fails "
                             "verification: " +
                             vr.reason);
    }
    return EquivalenceResult{Verdict::equivalent, std::move(seq), states};
  };

  if (key_a == key_b) {
    return finish({}, 1);
  }

  std::unordered_map<std::uint64_t, detail::RawEdge> visited[2];
  std::vector<std::uint64_t> frontier[2];
  visited[0].emplace(key_a, detail::RawEdge{key_a, Move{}});
  visited[1].emplace(key_b, detail::RawEdge{key_b, Move{}});
  frontier[0].push_back(key_a);
  frontier[1].push_back(key_b);
  const std::uint64_t roots[2] = {key_a, key_b};

  auto states_explored = [&] {
    return static_cast<std::uint64_t>(visited[0].size() + visited[1].size());
  };

  // A-side moves run forward along the chain; B-side tree edges are undone
  // while walking from the meet back to b.
  auto assemble = [&](std::uint64_t meet) {
    std::vector<Move> moves =
        detail::path_from_root(visited[0], key_a, meet);
    const std::vector<Move> back =
        detail::path_to_root(visited[1], key_b, meet);
    moves.insert(moves.end(), back.begin(), back.end());
    return finish(std::move(moves), states_explored());
  };

  while (true) {
    if (frontier[0].empty() || frontier[1].empty()) {
      // One closure is complete: equivalence holds iff it contains a
      // conjugate of the other side's matrix.
      const int done = frontier[0].empty() ? 0 : 1;
      const int other = 1 - done;
      for (const auto& images : detail::permutation_images(n)) {
        const std::uint64_t conj = conjugate_key(n, roots[other], images);
        const auto it = visited[done].find(conj);
        if (it == visited[done].end()) continue;
        const Permutation sigma{images};
        if (done == 0) {
          // a ⇝ conj = conjugate(b, sigma), then permute by sigma⁻¹ to b.
          std::vector<Move> moves =
              detail::path_from_root(visited[0], key_a, conj);
          moves.push_back(Move::permute_by(sigma.inverse()));
          return finish(std::move(moves), states_explored());
        }
        // conj = conjugate(a, sigma): permute a by sigma, then walk to b.
        std::vector<Move> moves{Move::permute_by(sigma)};
        const std::vector<Move> back =
            detail::path_to_root(visited[1], key_b, conj);
        moves.insert(moves.end(), back.begin(), back.end());
        return finish(std::move(moves), states_explored());
      }
      return EquivalenceResult{Verdict::not_equivalent, std::nullopt,
                               states_explored()};
    }
    if (states_explored() >= limits.max_states) {
      return EquivalenceResult{Verdict::unknown, std::nullopt,
                               states_explored()};
    }

    const int side = frontier[0].size() <= frontier[1].size() ? 0 : 1;
    std::vector<std::uint64_t> next;
    for (const std::uint64_t key : frontier[side]) {
      const ZeroOneMatrix mat = matrix_from_key(n, key);
      for (const auto& [move, nxt] : detail::size1_moves(mat)) {
        const std::uint64_t nk = packed_key(nxt);
        if (!visited[side].emplace(nk, detail::RawEdge{key, move}).second) {
          continue;
        }
        if (visited[1 - side].count(nk)) {
          return assemble(nk);
        }
        next.push_back(nk);
      }
    }
    frontier[side] = std::move(next);
  }
}

struct ClassEdge {
  std::uint64_t parent = 0;
  Move move;
  Permutation witness{1};  // canonicalizes the raw successor onto the child
};

// Breadth-first closure of one canonical form under size-1 moves followed by
// canonicalization: the full primitive-equivalence class when complete.
struct ClassResult {
  bool complete = false;
  std::uint64_t root = 0;                 // canonical key of the seed
  std::vector<std::uint64_t> forms;       // ascending canonical keys
  std::unordered_map<std::uint64_t, ClassEdge> tree;  // parent links, no root
};

inline ClassResult equivalence_class(const ZeroOneMatrix& a,
                                     const SearchLimits& limits = {},
                                     int threads = 1) {
  const int n = a.size();
  const int class_limit = std::min(limits.max_class_n, 5);
  if (n > class_limit) {
    throw std::invalid_argument(
        "equivalence_class: size " + std::to_string(n) + " above limit " +
        std::to_string(class_limit));
  }
  if (threads < 1) {
    throw std::invalid_argument("equivalence_class: thread count must be ≥ 1");
  }
  detail::permutation_images(n);  // build the table before spawning threads

  ClassResult result;
  result.root = packed_key(canonical_form(a).matrix);
  std::unordered_set<std::uint64_t> visited{result.root};
  std::vector<std::uint64_t> frontier{result.root};
  bool capped = false;

  using Found = std::vector<std::pair<std::uint64_t, ClassEdge>>;

  // Expansion of one chunk of the frontier; pure, so chunks can run in
  // parallel and their results be merged in chunk order, making the outcome
  // identical for every thread count.
  auto expand_chunk = [n](const std::vector<std::uint64_t>& keys, size_t begin,
                          size_t end, Found& found) {
    for (size_t i = begin; i < end; ++i) {
      const ZeroOneMatrix mat = matrix_from_key(n, keys[i]);
      for (const auto& [move, nxt] : detail::size1_moves(mat)) {
        assert(nxt.size() == n);
        const CanonicalForm cf = canonical_form(nxt);
        found.emplace_back(packed_key(cf.matrix),
                           ClassEdge{keys[i], move, cf.witness});
      }
    }
  };

  while (!frontier.empty()) {
    if (visited.size() >= limits.max_states) {
      capped = true;
      break;
    }
    const size_t chunk_count =
        std::min<size_t>(static_cast<size_t>(threads), frontier.size());
    std::vector<Found> found(chunk_count);
    if (chunk_count <= 1) {
      expand_chunk(frontier, 0, frontier.size(), found[0]);
    } else {
      std::vector<std::thread> workers;
      const size_t per = (frontier.size() + chunk_count - 1) / chunk_count;
      for (size_t c = 0; c < chunk_count; ++c) {
        const size_t begin = c * per;
        const size_t end = std::min(frontier.size(), begin + per);
        workers.emplace_back(expand_chunk, std::cref(frontier), begin, end,
                             std::ref(found[c]));
      }
      for (std::thread& w : workers) w.join();
    }
    std::vector<std::uint64_t> next;
    for (const Found& chunk : found) {
      for (const auto& [key, edge] : chunk) {
        if (visited.insert(key).second) {
          result.tree.emplace(key, edge);
          next.push_back(key);
        }
      }
    }
    frontier = std::move(next);
  }

  result.complete = !capped;
  result.forms.assign(visited.begin(), visited.end());
  std::sort(result.forms.begin(), result.forms.end());
  return result;
}

enum class ClassFilter { all, irreducible };

struct AtlasClass {
  std::uint64_t representative = 0;      // least canonical key of the class
  std::vector<std::uint64_t> forms;      // ascending canonical keys
  std::uint64_t member_count = 0;        // raw matrices across all orbits
  bool representative_irreducible = false;
  int irreducible_forms = 0;

  std::uint64_t class_size() const { return forms.size(); }
};

struct ClassAtlas {
  int n = 0;
  ClassFilter filter = ClassFilter::all;
  std::vector<AtlasClass> classes;  // ascending by representative
};

// Partition all n×n canonical forms into primitive-equivalence classes by
// sweeping keys in ascending order and closing each unseen canonical form.
// The sweep order makes every representative the least canonical key of its
// class and fixes the class order; the irreducible filter only restricts
// which classes are reported, never which moves are explored.
inline ClassAtlas classify(int n, ClassFilter filter = ClassFilter::all,
                           int threads = 1, const SearchLimits& limits = {}) {
  const int class_limit = std::min(limits.max_class_n, 5);
  if (n < 1 || n > class_limit) {
    throw std::invalid_argument("classify: size must be in 1.." +
                                std::to_string(class_limit));
  }
  if (threads < 1) {
    throw std::invalid_argument("classify: thread count must be ≥ 1");
  }
  detail::permutation_images(n);

  const std::uint64_t universe = std::uint64_t{1} << (n * n);

  // Ascending list of canonical keys, computed in parallel over key ranges
  // and concatenated in range order.
  std::vector<std::uint64_t> canonical_keys;
  {
    const size_t chunk_count = static_cast<size_t>(threads);
    std::vector<std::vector<std::uint64_t>> per_chunk(chunk_count);
    auto sweep = [&](size_t c) {
      const std::uint64_t begin = universe * c / chunk_count;
      const std::uint64_t end = universe * (c + 1) / chunk_count;
      for (std::uint64_t key = begin; key < end; ++key) {
        if (is_canonical_key(n, key)) per_chunk[c].push_back(key);
      }
    };
    if (chunk_count <= 1) {
      sweep(0);
    } else {
      std::vector<std::thread> workers;
      for (size_t c = 0; c < chunk_count; ++c) workers.emplace_back(sweep, c);
      for (std::thread& w : workers) w.join();
    }
    for (const auto& chunk : per_chunk) {
      canonical_keys.insert(canonical_keys.end(), chunk.begin(), chunk.end());
    }
    assert(std::is_sorted(canonical_keys.begin(), canonical_keys.end()));
  }

  ClassAtlas atlas;
  atlas.n = n;
  atlas.filter = filter;
  std::unordered_set<std::uint64_t> classified;
  for (const std::uint64_t key : canonical_keys) {
    if (classified.count(key)) continue;
    const ClassResult cr =
        equivalence_class(matrix_from_key(n, key), limits, threads);
    if (!cr.complete) {
      throw std::runtime_error("classify: state cap exceeded");
    }
    assert(cr.root == key && "sweep must reach each class at its least key");
    AtlasClass cls;
    cls.representative = key;
    cls.forms = cr.forms;
    for (const std::uint64_t f : cr.forms) {
      classified.insert(f);
      cls.member_count += orbit_size(n, f);
      if (is_irreducible(matrix_from_key(n, f))) ++cls.irreducible_forms;
    }
    cls.representative_irreducible = is_irreducible(matrix_from_key(n, key));
    atlas.classes.push_back(std::move(cls));
  }

  if (filter == ClassFilter::irreducible) {
    std::vector<AtlasClass> kept;
    for (AtlasClass& cls : atlas.classes) {
      if (cls.irreducible_forms > 0) kept.push_back(std::move(cls));
    }
    atlas.classes = std::move(kept);
  }
  return atlas;
}

// Deterministic plain-text rendering: header totals, then one record per
// class holding the representative (core text format), class size (canonical
// forms), member count (raw matrices) and irreducibility data.
inline std::string atlas_to_text(const ClassAtlas& atlas) {
  std::uint64_t total_forms = 0;
  std::uint64_t total_members = 0;
  for (const AtlasClass& cls : atlas.classes) {
    total_forms += cls.class_size();
    total_members += cls.member_count;
  }
  std::string out = "# primitive-equivalence atlas\n";
  out += "n " + std::to_string(atlas.n) + "\n";
  out += std::string("filter ") +
         (atlas.filter == ClassFilter::all ? "all" : "irreducible") + "\n";
  out += "classes " + std::to_string(atlas.classes.size()) + "\n";
  out += "canonical_forms " + std::to_string(total_forms) + "\n";
  out += "matrices " + std::to_string(total_members) + "\n";
  for (size_t i = 0; i < atlas.classes.size(); ++i) {
    const AtlasClass& cls = atlas.classes[i];
    out += "\nclass " + std::to_string(i) + "\n";
    out += "representative\n";
    out += format_matrix(matrix_from_key(atlas.n, cls.representative));
    out += "class_size " + std::to_string(cls.class_size()) + "\n";
    out += "member_count " + std::to_string(cls.member_count) + "\n";
    out += std::string("irreducible ") +
           (cls.representative_irreducible ? "1" : "0") + "\n";
    out += "irreducible_forms " + std::to_string(cls.irreducible_forms) + "\n";
  }
  return out;
}

}  // namespace primeq

#endif  // PRIMEQ_SEARCH_HPP
