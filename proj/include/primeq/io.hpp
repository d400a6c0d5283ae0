#ifndef PRIMEQ_IO_HPP
#define PRIMEQ_IO_HPP

#include <fstream>
#include <istream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "primeq/matrix.hpp"

namespace primeq {

// Parse failure for the matrix text format, carrying a 1-based line/column
// position for diagnostics.
class MatrixParseError : public std::runtime_error {
 public:
  MatrixParseError(int line, int column, const std::string& message)
      : std::runtime_error(std::to_string(line) + ":" +
                           std::to_string(column) + ": " + message),
        line_(line),
        column_(column) {}

  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

// One row of '0'/'1' characters ("00110111"), leftmost character = column 0.
inline std::string row_to_string(std::uint64_t row, int n) {
  std::string s(n, '0');
  for (int j = 0; j < n; ++j) {
    if ((row >> j) & 1u) s[j] = '1';
  }
  return s;
}

inline std::uint64_t row_from_string(const std::string& s, int n) {
  if (static_cast<int>(s.size()) != n) {
    throw std::invalid_argument("row string has length " +
                                std::to_string(s.size()) + ", expected " +
                                std::to_string(n));
  }
  std::uint64_t row = 0;
  for (int j = 0; j < n; ++j) {
    if (s[j] == '1') {
      row |= std::uint64_t{1} << j;
    } else if (s[j] != '0') {
      throw std::invalid_argument("row string has character '" +
                                  std::string(1, s[j]) + "', expected 0 or 1");
    }
  }
  return row;
}

// Build a matrix from row strings; n is taken from the number of rows.
inline ZeroOneMatrix matrix_from_strings(const std::vector<std::string>& rows) {
  const int n = static_cast<int>(rows.size());
  if (n < 1 || n > ZeroOneMatrix::max_size) {
    throw std::invalid_argument("matrix_from_strings: bad row count");
  }
  std::vector<std::uint64_t> bits;
  bits.reserve(rows.size());
  for (const std::string& s : rows) bits.push_back(row_from_string(s, n));
  return ZeroOneMatrix(n, std::move(bits));
}

inline std::vector<std::string> strings_from_matrix(const ZeroOneMatrix& a) {
  std::vector<std::string> out;
  out.reserve(a.size());
  for (int i = 0; i < a.size(); ++i) {
    out.push_back(row_to_string(a.row(i), a.size()));
  }
  return out;
}

namespace detail {

inline bool is_blank(const std::string& line) {
  return line.find_first_not_of(" \t\r") == std::string::npos;
}

}  // namespace detail

// Matrix text format: optional '#' comment lines; the first non-comment line
// holds n; then n lines of n characters from {0,1}.  Single spaces between
// the characters of a row are tolerated on input.  Positions in errors are
// 1-based.
inline ZeroOneMatrix parse_matrix(std::istream& in) {
  std::string line;
  int line_no = 0;

  auto next_content_line = [&](const char* what) {
    while (std::getline(in, line)) {
      ++line_no;
      if (!line.empty() && line[0] == '#') continue;
      if (detail::is_blank(line)) continue;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      return;
    }
    throw MatrixParseError(line_no + 1, 1,
                           std::string("unexpected end of input, expected ") +
                               what);
  };

  next_content_line("matrix size");
  int n = 0;
  {
    std::istringstream size_in(line);
    if (!(size_in >> n)) {
      throw MatrixParseError(line_no, 1, "expected matrix size");
    }
    std::string rest;
    if (size_in >> rest) {
      throw MatrixParseError(line_no, 1, "trailing text after matrix size");
    }
    if (n < 1 || n > ZeroOneMatrix::max_size) {
      throw MatrixParseError(line_no, 1,
                             "matrix size must be in 1.." +
                                 std::to_string(ZeroOneMatrix::max_size));
    }
  }

  ZeroOneMatrix a(n);
  for (int i = 0; i < n; ++i) {
    next_content_line("matrix row");
    int col = 0;
    bool last_was_space = false;
    for (int pos = 0; pos < static_cast<int>(line.size()); ++pos) {
      const char c = line[pos];
      if (c == '0' || c == '1') {
        if (col >= n) {
          throw MatrixParseError(line_no, pos + 1,
                                 "row has more than " + std::to_string(n) +
                                     " entries");
        }
        if (c == '1') a.set_entry(i, col, true);
        ++col;
        last_was_space = false;
      } else if (c == ' ') {
        if (col == 0) {
          throw MatrixParseError(line_no, pos + 1, "unexpected leading space");
        }
        if (last_was_space) {
          throw MatrixParseError(line_no, pos + 1, "unexpected double space");
        }
        last_was_space = true;
      } else {
        throw MatrixParseError(line_no, pos + 1,
                               "unexpected character '" + std::string(1, c) +
                                   "', expected 0 or 1");
      }
    }
    if (col != n) {
      throw MatrixParseError(line_no, static_cast<int>(line.size()) + 1,
                             "row has " + std::to_string(col) +
                                 " entries, expected " + std::to_string(n));
    }
  }
  return a;
}

inline ZeroOneMatrix parse_matrix(const std::string& text) {
  std::istringstream in(text);
  return parse_matrix(in);
}

inline ZeroOneMatrix read_matrix_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open file: " + path);
  }
  return parse_matrix(in);
}

// Writer form of the matrix text format: no comments, no spaces.
inline std::string format_matrix(const ZeroOneMatrix& a) {
  std::string out = std::to_string(a.size());
  out += '\n';
  for (int i = 0; i < a.size(); ++i) {
    out += row_to_string(a.row(i), a.size());
    out += '\n';
  }
  return out;
}

inline void write_matrix_file(const std::string& path, const ZeroOneMatrix& a) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot open file for writing: " + path);
  }
  out << format_matrix(a);
  if (!out) {
    throw std::runtime_error("failed writing file: " + path);
  }
}

}  // namespace primeq

#endif  // PRIMEQ_IO_HPP
