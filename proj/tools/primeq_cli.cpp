// primeq — primitive transfers of 0-1 square matrices: validation,
// application, enumeration, transfer graphs, size-1 decomposition
// certificates, equivalence decision and exhaustive classification.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "primeq/canonical.hpp"
#include "primeq/certificate.hpp"
#include "primeq/decompose.hpp"
#include "primeq/io.hpp"
#include "primeq/matrix.hpp"
#include "primeq/search.hpp"
#include "primeq/transfer.hpp"

namespace {

constexpr int exit_true = 0;
constexpr int exit_false = 1;
constexpr int exit_usage = 2;
constexpr int exit_unknown = 3;

// Comma-separated 0-based indices; the empty string is the empty set.
std::vector<int> parse_index_list(const std::string& text) {
  std::vector<int> out;
  if (text.empty()) return out;
  std::stringstream in(text);
  std::string token;
  while (std::getline(in, token, ',')) {
    size_t pos = 0;
    int value = 0;
    try {
      value = std::stoi(token, &pos);
    } catch (const std::exception&) {
      throw std::invalid_argument("bad index list entry '" + token + "'");
    }
    if (pos != token.size()) {
      throw std::invalid_argument("bad index list entry '" + token + "'");
    }
    out.push_back(value);
  }
  if (text.back() == ',') {
    throw std::invalid_argument("index list ends with a comma");
  }
  return out;
}

std::string join_indices(std::uint64_t mask) {
  std::string out;
  for (const int i : primeq::indices_from_mask(mask)) {
    if (!out.empty()) out += ',';
    out += std::to_string(i);
  }
  return out;
}

primeq::ZeroOneMatrix load_matrix(const std::string& path) {
  try {
    return primeq::read_matrix_file(path);
  } catch (const primeq::MatrixParseError& e) {
    throw std::runtime_error(path + ":" + e.what());
  }
}

primeq::PrimitiveTransfer build_transfer(const primeq::ZeroOneMatrix& a,
                                         int p, const std::string& m_list,
                                         const std::string& k_list) {
  return primeq::PrimitiveTransfer{
      p, primeq::mask_from_indices(parse_index_list(m_list), a.size()),
      primeq::mask_from_indices(parse_index_list(k_list), a.size())};
}

std::string describe_move(const primeq::Move& move) {
  using primeq::MoveKind;
  switch (move.kind) {
    case MoveKind::forward_transfer:
    case MoveKind::reverse_transfer: {
      std::string out = move.kind == MoveKind::forward_transfer
                            ? "forward_transfer"
                            : "reverse_transfer";
      out += " p=" + std::to_string(move.transfer.p);
      out += " M=" + join_indices(move.transfer.M);
      out += " K=" + join_indices(move.transfer.K);
      return out;
    }
    case MoveKind::permute: {
      std::string out = "permute perm=";
      const auto& images = move.perm->images();
      for (size_t i = 0; i < images.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(images[i]);
      }
      return out;
    }
  }
  return "unknown";
}

const char* kFormatHelp = R"(Formats:
  Matrix file: optional '#' comment lines, then the size n, then n rows of n
  characters from {0,1} (single spaces between characters are tolerated on
  input; writers emit none).  All indices are 0-based.  Example (8x8):
      # first fixture of the bundled example pair (data/paperA.mat)
      8
      11011111
      00000000
      01000000
      00011000
      00000000
      10000000
      00000101
      00000010
  Transfer flags: --p 0 --M 2,3,5,6,7 --K "" describe the transfer at pivot 0
  summing rows {2,3,5,6,7} with no unit columns; applying it to the matrix
  above rewrites row 0 to 00110111 (the second fixture, data/paperB.mat).
  Certificate: JSON object with fields n, initial, moves, final (and
  optionally intermediates); matrices are arrays of row strings, moves are
  {"kind":"forward_transfer"|"reverse_transfer","p":..,"M":[..],"K":[..]} or
  {"kind":"permute","perm":[..]}.
  Atlas: plain text; header lines (n, filter, classes, canonical_forms,
  matrices), then one record per class: representative matrix, class_size
  (canonical forms), member_count (raw matrices), irreducibility data.
Exit codes: 0 success/true, 1 false/invalid, 2 usage or input error,
  3 resource-capped unknown.
Worked example:
  primeq validate data/paperA.mat --p 0 --M 2,3,5,6,7 --K ""   (exit 0)
  primeq decompose data/paperA.mat --p 0 --M 2,3,5,6,7 --K "" -o cert.json
  primeq verify cert.json                                      (exit 0)
  primeq equivalent data/paperA.mat data/paperB.mat -o eq.json (exit 0)
)";

int run_validate(const std::string& file, int p, const std::string& m_list,
                 const std::string& k_list) {
  const primeq::ZeroOneMatrix a = load_matrix(file);
  const primeq::PrimitiveTransfer t = build_transfer(a, p, m_list, k_list);
  const bool ok = primeq::validate(a, t);
  std::cout << (ok ? "valid" : "invalid") << '\n';
  return ok ? exit_true : exit_false;
}

int run_apply(const std::string& file, int p, const std::string& m_list,
              const std::string& k_list, const std::string& out_path) {
  const primeq::ZeroOneMatrix a = load_matrix(file);
  const primeq::PrimitiveTransfer t = build_transfer(a, p, m_list, k_list);
  if (!primeq::validate(a, t)) {
    std::cerr << "transfer is not valid on this matrix\n";
    return exit_false;
  }
  const primeq::ZeroOneMatrix b = primeq::apply(a, t);
  if (out_path.empty()) {
    std::cout << primeq::format_matrix(b);
  } else {
    primeq::write_matrix_file(out_path, b);
  }
  return exit_true;
}

int run_enumerate(const std::string& file, bool include_trivial) {
  const primeq::ZeroOneMatrix a = load_matrix(file);
  for (const primeq::PrimitiveTransfer& t :
       primeq::enumerate(a, include_trivial)) {
    std::cout << "p=" << t.p << ";M=" << join_indices(t.M)
              << ";K=" << join_indices(t.K) << '\n';
  }
  return exit_true;
}

int run_graph(const std::string& file, int p, const std::string& m_list,
              const std::string& k_list) {
  const primeq::ZeroOneMatrix a = load_matrix(file);
  const primeq::PrimitiveTransfer t = build_transfer(a, p, m_list, k_list);
  if (!primeq::validate(a, t)) {
    std::cerr << "transfer is not valid on this matrix\n";
    return exit_false;
  }
  const primeq::TransferGraph g = primeq::transfer_graph(a, t);
  std::cout << "vertices " << join_indices(g.vertices) << '\n';
  for (const auto& [u, v] : g.edges) {
    std::cout << "edge " << u << ' ' << v << '\n';
  }
  for (const std::uint64_t c : g.components) {
    std::cout << "component " << join_indices(c) << '\n';
  }
  return exit_true;
}

int run_decompose(const std::string& file, int p, const std::string& m_list,
                  const std::string& k_list, bool embed,
                  const std::string& out_path) {
  const primeq::ZeroOneMatrix a = load_matrix(file);
  const primeq::PrimitiveTransfer t = build_transfer(a, p, m_list, k_list);
  if (!primeq::validate(a, t)) {
    std::cerr << "transfer is not valid on this matrix\n";
    return exit_false;
  }
  const primeq::MoveSequence seq = primeq::decompose(a, t, embed);
  primeq::write_certificate_file(out_path, seq);
  std::cout << "wrote " << seq.moves.size() << " moves to " << out_path
            << '\n';
  return exit_true;
}

int run_verify(const std::string& cert_path) {
  const primeq::MoveSequence seq = primeq::read_certificate_file(cert_path);
  const primeq::VerifyResult vr = primeq::verify(seq);
  if (vr.ok) {
    std::cout << "ok: replayed " << seq.moves.size() << " moves\n";
    return exit_true;
  }
  if (vr.failing_move >= 0) {
    std::cout << "failed at move " << vr.failing_move << " ("
              << describe_move(seq.moves[vr.failing_move])
              << "): " << vr.reason << '\n';
  } else {
    std::cout << "failed: " << vr.reason << '\n';
  }
  return exit_false;
}

int run_equivalent(const std::string& file_a, const std::string& file_b,
                   std::uint64_t max_states, const std::string& out_path) {
  const primeq::ZeroOneMatrix a = load_matrix(file_a);
  const primeq::ZeroOneMatrix b = load_matrix(file_b);
  primeq::SearchLimits limits;
  limits.max_states = max_states;
  const primeq::EquivalenceResult r = primeq::are_equivalent(a, b, limits);
  switch (r.verdict) {
    case primeq::Verdict::equivalent:
      std::cout << "equivalent (" << r.certificate->moves.size() << " moves, "
                << r.states_explored << " states explored)\n";
      if (!out_path.empty()) {
        primeq::write_certificate_file(out_path, *r.certificate);
      }
      return exit_true;
    case primeq::Verdict::not_equivalent:
      std::cout << "not equivalent (" << r.states_explored
                << " states explored)\n";
      return exit_false;
    case primeq::Verdict::unknown:
      std::cout << "unknown (state cap exceeded after " << r.states_explored
                << " states)\n";
      return exit_unknown;
  }
  return exit_usage;
}

int run_classify(int n, const std::string& filter_name, int threads,
                 bool override_size_limit, const std::string& out_path) {
  primeq::SearchLimits limits;
  if (override_size_limit) limits.max_class_n = 5;
  const primeq::ClassFilter filter = filter_name == "irreducible"
                                         ? primeq::ClassFilter::irreducible
                                         : primeq::ClassFilter::all;
  const primeq::ClassAtlas atlas =
      primeq::classify(n, filter, threads, limits);
  const std::string text = primeq::atlas_to_text(atlas);
  if (out_path.empty() || out_path == "-") {
    std::cout << text;
  } else {
    std::ofstream out(out_path);
    if (!out) {
      throw std::runtime_error("cannot open file for writing: " + out_path);
    }
    out << text;
    std::cout << "classified " << atlas.classes.size() << " classes\n";
  }
  return exit_true;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"primitive transfers of 0-1 square matrices"};
  app.footer(kFormatHelp);
  app.require_subcommand(1);

  std::string file, file_b, m_list, k_list, out_path, filter_name = "all";
  std::string cert_path;
  int p = 0;
  int n = 0;
  int threads = 1;
  bool include_trivial = false;
  bool embed = false;
  bool override_size_limit = false;
  std::uint64_t max_states = primeq::SearchLimits{}.max_states;

  auto add_transfer_flags = [&](CLI::App* cmd) {
    cmd->add_option("file", file, "matrix file")->required();
    cmd->add_option("--p", p, "pivot row (0-based)")->required();
    cmd->add_option("--M", m_list,
                    "summed rows, comma-separated (empty string for none)")
        ->required();
    cmd->add_option("--K", k_list,
                    "unit columns, comma-separated (empty string for none)")
        ->required();
  };

  CLI::App* c_validate =
      app.add_subcommand("validate", "check a transfer's defining equation");
  add_transfer_flags(c_validate);

  CLI::App* c_apply =
      app.add_subcommand("apply", "apply a transfer and print the result");
  add_transfer_flags(c_apply);
  c_apply->add_option("-o,--output", out_path, "output matrix file");

  CLI::App* c_enumerate =
      app.add_subcommand("enumerate", "list all valid transfers");
  c_enumerate->add_option("file", file, "matrix file")->required();
  c_enumerate->add_flag("--include-trivial", include_trivial,
                        "also list size-0 (identity) transfers");

  CLI::App* c_graph = app.add_subcommand(
      "graph", "print a transfer's graph: vertices, edges, weak components");
  add_transfer_flags(c_graph);

  CLI::App* c_decompose = app.add_subcommand(
      "decompose", "write a size-1 decomposition certificate");
  add_transfer_flags(c_decompose);
  c_decompose->add_flag("--embed-intermediates", embed,
                        "embed every chain matrix in the certificate");
  c_decompose->add_option("-o,--output", cert_path, "certificate file")
      ->required();

  CLI::App* c_verify =
      app.add_subcommand("verify", "replay and check a certificate");
  c_verify->add_option("certificate", cert_path, "certificate file")
      ->required();

  CLI::App* c_equivalent = app.add_subcommand(
      "equivalent", "decide primitive equivalence of two matrices");
  c_equivalent->add_option("file_a", file, "first matrix file")->required();
  c_equivalent->add_option("file_b", file_b, "second matrix file")->required();
  c_equivalent->add_option("--max-states", max_states,
                           "search state cap before answering unknown");
  c_equivalent->add_option("-o,--output", out_path,
                           "write the equivalence certificate here");

  CLI::App* c_classify = app.add_subcommand(
      "classify", "partition all n×n matrices into equivalence classes");
  c_classify->add_option("--n", n, "matrix size (1..4, 5 with override)")
      ->required();
  c_classify
      ->add_option("--filter", filter_name,
                   "'all' or 'irreducible' (report only classes containing "
                   "an irreducible canonical form)")
      ->check(CLI::IsMember({"all", "irreducible"}));
  c_classify->add_option("--threads", threads, "worker thread count");
  c_classify->add_flag("--override-size-limit", override_size_limit,
                       "allow n = 5 (slow: sweeps 2^25 matrices)");
  c_classify->add_option("-o,--output", out_path, "atlas file ('-' = stdout)")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return exit_usage;
  }

  try {
    if (app.got_subcommand(c_validate)) {
      return run_validate(file, p, m_list, k_list);
    }
    if (app.got_subcommand(c_apply)) {
      return run_apply(file, p, m_list, k_list, out_path);
    }
    if (app.got_subcommand(c_enumerate)) {
      return run_enumerate(file, include_trivial);
    }
    if (app.got_subcommand(c_graph)) {
      return run_graph(file, p, m_list, k_list);
    }
    if (app.got_subcommand(c_decompose)) {
      return run_decompose(file, p, m_list, k_list, embed, cert_path);
    }
    if (app.got_subcommand(c_verify)) {
      return run_verify(cert_path);
    }
    if (app.got_subcommand(c_equivalent)) {
      return run_equivalent(file, file_b, max_states, out_path);
    }
    if (app.got_subcommand(c_classify)) {
      return run_classify(n, filter_name, threads, override_size_limit,
                          out_path);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_usage;
  }
  return exit_usage;
}
