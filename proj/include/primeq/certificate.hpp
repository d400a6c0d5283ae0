#ifndef PRIMEQ_CERTIFICATE_HPP
#define PRIMEQ_CERTIFICATE_HPP

#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "primeq/decompose.hpp"
#include "primeq/io.hpp"
#include "primeq/matrix.hpp"

namespace primeq {

// Certificates are stored as a JSON document with a fixed field order:
// n, initial, moves, final, then optionally intermediates.  Matrices appear
// as arrays of row strings ("00110111", leftmost character = column 0) and
// index sets as ascending arrays of 0-based indices.
using certificate_json = nlohmann::ordered_json;

namespace detail {

inline certificate_json matrix_to_json(const ZeroOneMatrix& a) {
  return certificate_json(strings_from_matrix(a));
}

inline ZeroOneMatrix matrix_from_json(const certificate_json& j, int n,
                                      const std::string& what) {
  if (!j.is_array() || static_cast<int>(j.size()) != n) {
    throw std::runtime_error("certificate: " + what + " must be an array of " +
                             std::to_string(n) + " row strings");
  }
  std::vector<std::string> rows;
  rows.reserve(n);
  for (const auto& row : j) {
    if (!row.is_string()) {
      throw std::runtime_error("certificate: " + what +
                               " rows must be strings");
    }
    rows.push_back(row.get<std::string>());
  }
  try {
    return matrix_from_strings(rows);
  } catch (const std::invalid_argument& e) {
    throw std::runtime_error("certificate: " + what + ": " + e.what());
  }
}

inline certificate_json indices_to_json(std::uint64_t mask) {
  return certificate_json(indices_from_mask(mask));
}

inline std::uint64_t indices_from_json(const certificate_json& j, int n,
                                       const std::string& what) {
  if (!j.is_array()) {
    throw std::runtime_error("certificate: " + what +
                             " must be an array of indices");
  }
  std::vector<int> indices;
  for (const auto& v : j) {
    if (!v.is_number_integer()) {
      throw std::runtime_error("certificate: " + what +
                               " entries must be integers");
    }
    indices.push_back(v.get<int>());
  }
  try {
    return mask_from_indices(indices, n);
  } catch (const std::invalid_argument& e) {
    throw std::runtime_error("certificate: " + what + ": " + e.what());
  }
}

}  // namespace detail

inline certificate_json certificate_to_json(const MoveSequence& seq) {
  certificate_json j;
  j["n"] = seq.initial.size();
  j["initial"] = detail::matrix_to_json(seq.initial);
  certificate_json moves = certificate_json::array();
  for (const Move& m : seq.moves) {
    certificate_json mj;
    switch (m.kind) {
      case MoveKind::forward_transfer:
      case MoveKind::reverse_transfer:
        mj["kind"] = m.kind == MoveKind::forward_transfer ? "forward_transfer"
                                                          : "reverse_transfer";
        mj["p"] = m.transfer.p;
        mj["M"] = detail::indices_to_json(m.transfer.M);
        mj["K"] = detail::indices_to_json(m.transfer.K);
        break;
      case MoveKind::permute:
        mj["kind"] = "permute";
        mj["perm"] = m.perm ? certificate_json(m.perm->images())
                            : certificate_json::array();
        break;
    }
    moves.push_back(std::move(mj));
  }
  j["moves"] = std::move(moves);
  j["final"] = detail::matrix_to_json(seq.final_matrix);
  if (!seq.intermediates.empty()) {
    certificate_json inter = certificate_json::array();
    for (const ZeroOneMatrix& m : seq.intermediates) {
      inter.push_back(detail::matrix_to_json(m));
    }
    j["intermediates"] = std::move(inter);
  }
  return j;
}

inline MoveSequence certificate_from_json(const certificate_json& j) {
  if (!j.is_object()) {
    throw std::runtime_error("certificate: document must be an object");
  }
  for (const char* field : {"n", "initial", "moves", "final"}) {
    if (!j.contains(field)) {
      throw std::runtime_error(std::string("certificate: missing field '") +
                               field + "'");
    }
  }
  if (!j["n"].is_number_integer()) {
    throw std::runtime_error("certificate: n must be an integer");
  }
  const int n = j["n"].get<int>();
  if (n < 1 || n > ZeroOneMatrix::max_size) {
    throw std::runtime_error("certificate: n out of range 1.." +
                             std::to_string(ZeroOneMatrix::max_size));
  }
  MoveSequence seq{detail::matrix_from_json(j["initial"], n, "initial"),
                   {},
                   detail::matrix_from_json(j["final"], n, "final"),
                   {}};
  if (!j["moves"].is_array()) {
    throw std::runtime_error("certificate: moves must be an array");
  }
  for (const auto& mj : j["moves"]) {
    if (!mj.is_object() || !mj.contains("kind") || !mj["kind"].is_string()) {
      throw std::runtime_error("certificate: each move needs a string 'kind'");
    }
    const std::string kind = mj["kind"].get<std::string>();
    if (kind == "forward_transfer" || kind == "reverse_transfer") {
      for (const char* field : {"p", "M", "K"}) {
        if (!mj.contains(field)) {
          throw std::runtime_error(
              std::string("certificate: transfer move missing field '") +
              field + "'");
        }
      }
      if (!mj["p"].is_number_integer()) {
        throw std::runtime_error("certificate: move pivot must be an integer");
      }
      const int p = mj["p"].get<int>();
      if (p < 0 || p >= n) {
        throw std::runtime_error("certificate: move pivot out of range");
      }
      PrimitiveTransfer t{p, detail::indices_from_json(mj["M"], n, "M"),
                          detail::indices_from_json(mj["K"], n, "K")};
      seq.moves.push_back(kind == "forward_transfer" ? Move::forward(t)
                                                     : Move::reverse(t));
    } else if (kind == "permute") {
      if (!mj.contains("perm") || !mj["perm"].is_array() ||
          static_cast<int>(mj["perm"].size()) != n) {
        throw std::runtime_error(
            "certificate: permute move needs a 'perm' array of length n");
      }
      std::vector<int> images;
      for (const auto& v : mj["perm"]) {
        if (!v.is_number_integer()) {
          throw std::runtime_error(
              "certificate: perm entries must be integers");
        }
        images.push_back(v.get<int>());
      }
      try {
        seq.moves.push_back(Move::permute_by(Permutation(std::move(images))));
      } catch (const std::invalid_argument& e) {
        throw std::runtime_error(std::string("certificate: ") + e.what());
      }
    } else {
      throw std::runtime_error("certificate: unknown move kind '" + kind + "'");
    }
  }
  if (j.contains("intermediates")) {
    if (!j["intermediates"].is_array()) {
      throw std::runtime_error("certificate: intermediates must be an array");
    }
    for (const auto& mj : j["intermediates"]) {
      seq.intermediates.push_back(
          detail::matrix_from_json(mj, n, "intermediates entry"));
    }
  }
  return seq;
}

inline void write_certificate_file(const std::string& path,
                                   const MoveSequence& seq) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot open file for writing: " + path);
  }
  out << certificate_to_json(seq).dump(2) << '\n';
  if (!out) {
    throw std::runtime_error("failed writing file: " + path);
  }
}

inline MoveSequence read_certificate_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open file: " + path);
  }
  certificate_json j;
  try {
    j = certificate_json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::runtime_error("certificate: " + std::string(e.what()));
  }
  return certificate_from_json(j);
}

}  // namespace primeq

#endif  // PRIMEQ_CERTIFICATE_HPP
