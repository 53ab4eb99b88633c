#pragma once

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "ritz/bounds.hpp"
#include "ritz/core.hpp"
#include "ritz/gaps.hpp"
#include "ritz/rayleigh_ritz.hpp"

namespace ritz {

// Fixed-width float formatting shared by every CSV emitter. 17 significant
// digits round-trip any double exactly, so repeated runs with the same seed
// produce byte-identical files.
inline std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return std::string(buf);
}

inline std::string csv_join(const std::vector<std::string>& cells) {
  std::string line;
  for (std::size_t c = 0; c < cells.size(); ++c) {
    if (c) line += ',';
    line += cells[c];
  }
  return line;
}

namespace detail {

inline double parse_double(const std::string& tok, const std::string& where, long line_no) {
  const char* s = tok.c_str();
  char* end = nullptr;
  double v = std::strtod(s, &end);
  if (end == s || *end != '\0')
    throw Error(ErrorCode::ParseError, where + ": bad number '" + tok + "'", line_no);
  return v;
}

inline long parse_index(const std::string& tok, const std::string& where, long line_no) {
  const char* s = tok.c_str();
  char* end = nullptr;
  long v = std::strtol(s, &end, 10);
  if (end == s || *end != '\0' || v < 0)
    throw Error(ErrorCode::ParseError, where + ": bad integer '" + tok + "'", line_no);
  return v;
}

inline std::vector<std::string> split_ws(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream ss(line);
  std::string tok;
  while (ss >> tok) out.push_back(tok);
  return out;
}

inline std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

inline std::string lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

inline bool is_digits(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s)
    if (c < '0' || c > '9') return false;
  return true;
}

}  // namespace detail

// Matrix Market reader covering the dense "array" and sparse "coordinate"
// layouts with real or integer entries, general or symmetric storage.
// Symmetric files may store either triangle; the mirror entry is filled in.
// Duplicate coordinate entries accumulate. Anything outside this envelope
// (complex, pattern, skew-symmetric, non-matrix objects) is a parse error.
//
// Input:  path of a Matrix Market file
// Output: dense matrix with .symmetric set when the header declared symmetry
struct MatrixMarketData {
  Matrix values;
  bool symmetric = false;
};

inline MatrixMarketData read_matrix_market(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open '" + path + "'");

  std::string line;
  long line_no = 0;
  if (!std::getline(in, line))
    throw Error(ErrorCode::ParseError, path + ": empty file");
  ++line_no;

  auto header = detail::split_ws(line);
  if (header.size() != 5 || detail::lower(header[0]) != "%%matrixmarket")
    throw Error(ErrorCode::ParseError, path + ": missing MatrixMarket banner", line_no);
  std::string object = detail::lower(header[1]);
  std::string layout = detail::lower(header[2]);
  std::string field = detail::lower(header[3]);
  std::string symmetry = detail::lower(header[4]);
  if (object != "matrix")
    throw Error(ErrorCode::ParseError, path + ": unsupported object '" + object + "'", line_no);
  if (layout != "coordinate" && layout != "array")
    throw Error(ErrorCode::ParseError, path + ": unsupported layout '" + layout + "'", line_no);
  if (field != "real" && field != "integer")
    throw Error(ErrorCode::ParseError, path + ": unsupported field '" + field + "'", line_no);
  if (symmetry != "general" && symmetry != "symmetric")
    throw Error(ErrorCode::ParseError, path + ": unsupported symmetry '" + symmetry + "'",
                line_no);
  bool symmetric = symmetry == "symmetric";

  auto next_data_line = [&](std::vector<std::string>& toks) -> bool {
    while (std::getline(in, line)) {
      ++line_no;
      if (!line.empty() && line[0] == '%') continue;
      toks = detail::split_ws(line);
      if (toks.empty()) continue;
      return true;
    }
    return false;
  };

  std::vector<std::string> toks;
  if (!next_data_line(toks))
    throw Error(ErrorCode::ParseError, path + ": missing size line", line_no);

  MatrixMarketData out;
  out.symmetric = symmetric;
  if (layout == "coordinate") {
    if (toks.size() != 3)
      throw Error(ErrorCode::ParseError, path + ": coordinate size line needs rows cols nnz",
                  line_no);
    long rows = detail::parse_index(toks[0], path, line_no);
    long cols = detail::parse_index(toks[1], path, line_no);
    long nnz = detail::parse_index(toks[2], path, line_no);
    if (rows <= 0 || cols <= 0)
      throw Error(ErrorCode::ParseError, path + ": nonpositive dimensions", line_no);
    if (symmetric && rows != cols)
      throw Error(ErrorCode::ParseError, path + ": symmetric matrix must be square", line_no);
    out.values = Matrix::Zero(rows, cols);
    for (long e = 0; e < nnz; ++e) {
      if (!next_data_line(toks))
        throw Error(ErrorCode::ParseError, path + ": fewer entries than declared", line_no);
      if (toks.size() != 3)
        throw Error(ErrorCode::ParseError, path + ": entry needs i j value", line_no);
      long i = detail::parse_index(toks[0], path, line_no) - 1;
      long j = detail::parse_index(toks[1], path, line_no) - 1;
      double v = detail::parse_double(toks[2], path, line_no);
      if (i < 0 || i >= rows || j < 0 || j >= cols)
        throw Error(ErrorCode::ParseError, path + ": entry index out of range", line_no);
      out.values(i, j) += v;
      if (symmetric && i != j) out.values(j, i) += v;
    }
    if (next_data_line(toks))
      throw Error(ErrorCode::ParseError, path + ": more entries than declared", line_no);
  } else {
    if (toks.size() != 2)
      throw Error(ErrorCode::ParseError, path + ": array size line needs rows cols", line_no);
    long rows = detail::parse_index(toks[0], path, line_no);
    long cols = detail::parse_index(toks[1], path, line_no);
    if (rows <= 0 || cols <= 0)
      throw Error(ErrorCode::ParseError, path + ": nonpositive dimensions", line_no);
    if (symmetric && rows != cols)
      throw Error(ErrorCode::ParseError, path + ": symmetric matrix must be square", line_no);
    out.values = Matrix::Zero(rows, cols);
    // Array layout is column-major; symmetric files pack the lower triangle.
    std::vector<double> vals;
    while (next_data_line(toks))
      for (const auto& t : toks) vals.push_back(detail::parse_double(t, path, line_no));
    long expected = symmetric ? rows * (rows + 1) / 2 : rows * cols;
    if (static_cast<long>(vals.size()) != expected)
      throw Error(ErrorCode::ParseError,
                  path + ": expected " + std::to_string(expected) + " array values, got " +
                      std::to_string(vals.size()),
                  line_no);
    long p = 0;
    if (symmetric) {
      for (long j = 0; j < cols; ++j)
        for (long i = j; i < rows; ++i) {
          out.values(i, j) = vals[p];
          out.values(j, i) = vals[p];
          ++p;
        }
    } else {
      for (long j = 0; j < cols; ++j)
        for (long i = 0; i < rows; ++i) out.values(i, j) = vals[p++];
    }
  }
  return out;
}

// Dense CSV matrix: one row per line, comma-separated values. An optional
// first line "n,k" (two bare integers) declares the shape; with the header
// absent the shape is inferred, requiring every row to have equal length.
// A digits-only first line with exactly two fields is always treated as the
// header, so all-integer 1x2 data needs the explicit header form.
inline Matrix read_dense_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open '" + path + "'");

  std::vector<std::vector<std::string>> rows;
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    if (line[0] == '#') continue;
    rows.push_back(detail::split_csv(line));
  }
  if (rows.empty()) throw Error(ErrorCode::ParseError, path + ": no data rows");

  long declared_n = -1, declared_k = -1;
  std::size_t first = 0;
  if (rows[0].size() == 2 && detail::is_digits(rows[0][0]) && detail::is_digits(rows[0][1])) {
    declared_n = detail::parse_index(rows[0][0], path, 1);
    declared_k = detail::parse_index(rows[0][1], path, 1);
    first = 1;
  }
  std::size_t data_rows = rows.size() - first;
  if (data_rows == 0) throw Error(ErrorCode::ParseError, path + ": header but no data rows");
  std::size_t width = rows[first].size();
  if (declared_n >= 0) {
    if (static_cast<long>(data_rows) != declared_n)
      throw Error(ErrorCode::ParseError,
                  path + ": header declares " + std::to_string(declared_n) + " rows, found " +
                      std::to_string(data_rows));
    if (static_cast<long>(width) != declared_k)
      throw Error(ErrorCode::ParseError,
                  path + ": header declares " + std::to_string(declared_k) + " columns, found " +
                      std::to_string(width));
  }

  Matrix m(static_cast<long>(data_rows), static_cast<long>(width));
  for (std::size_t r = 0; r < data_rows; ++r) {
    const auto& cells = rows[first + r];
    if (cells.size() != width)
      throw Error(ErrorCode::ParseError,
                  path + ": ragged row " + std::to_string(r + first + 1) + " (" +
                      std::to_string(cells.size()) + " vs " + std::to_string(width) + " cells)");
    for (std::size_t c = 0; c < width; ++c)
      m(static_cast<long>(r), static_cast<long>(c)) =
          detail::parse_double(cells[c], path, static_cast<long>(r + first + 1));
  }
  return m;
}

// Route by extension: .mtx and .mm as Matrix Market, everything else as CSV.
inline Matrix read_matrix_any(const std::string& path) {
  auto dot = path.find_last_of('.');
  std::string ext = dot == std::string::npos ? "" : detail::lower(path.substr(dot + 1));
  if (ext == "mtx" || ext == "mm") return read_matrix_market(path).values;
  return read_dense_csv(path);
}

// Load a square input as a SymmetricProblem. Matrix Market files declared
// symmetric are trusted by construction; anything else must be numerically
// symmetric to working precision relative to its magnitude.
inline SymmetricProblem read_symmetric_problem(const std::string& path) {
  auto dot = path.find_last_of('.');
  std::string ext = dot == std::string::npos ? "" : detail::lower(path.substr(dot + 1));
  Matrix a;
  bool declared_symmetric = false;
  if (ext == "mtx" || ext == "mm") {
    MatrixMarketData mm = read_matrix_market(path);
    a = std::move(mm.values);
    declared_symmetric = mm.symmetric;
  } else {
    a = read_dense_csv(path);
  }
  if (a.rows() != a.cols())
    throw Error(ErrorCode::ParseError, path + ": matrix must be square", a.rows());
  if (!declared_symmetric) {
    double scale = a.cwiseAbs().maxCoeff();
    double skew = (a - a.transpose()).cwiseAbs().maxCoeff();
    if (skew > 1e-12 * std::max(scale, 1.0))
      throw Error(ErrorCode::ParseError, path + ": matrix is not symmetric");
    a = 0.5 * (a + a.transpose());
  }
  return SymmetricProblem::dense(std::move(a));
}

// Line-oriented text sink with unix newlines regardless of platform.
class TextFile {
 public:
  explicit TextFile(const std::string& path) : out_(path, std::ios::binary) {
    if (!out_) throw Error(ErrorCode::ParseError, "cannot write '" + path + "'");
  }
  void line(const std::string& s) { out_ << s << '\n'; }

 private:
  std::ofstream out_;
};

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Ritz pair dump: two sections so values and residual norms stay aligned by
// pair index without guessing at column meaning.
inline void write_rr_dump(const std::string& path, const RitzDecomposition& d) {
  TextFile f(path);
  f.line("RITZ_VALUES");
  f.line("i,value");
  for (int i = 0; i < d.k; ++i)
    f.line(csv_join({std::to_string(i), format_g17(d.ritz_values(i))}));
  f.line("RESIDUAL_NORMS");
  f.line("i,value");
  for (int i = 0; i < d.k; ++i)
    f.line(csv_join({std::to_string(i), format_g17(d.residual_norms(i))}));
}

inline const char* gap_mode_name(GapMode m) {
  return m == GapMode::Exact ? "exact" : "estimated";
}

inline std::string gap_cell(double g) {
  return std::isfinite(g) ? format_g17(g) : std::string("inf");
}

inline constexpr const char* kGapCsvHeader = "mode,i,gap,Gap,gap_c";

// One gap-model row. The classical gap needs exact eigenvalues, so the cell
// is blank in estimated mode.
inline std::string gap_row(const GapData& g) {
  return csv_join({gap_mode_name(g.mode), std::to_string(g.target_index), gap_cell(g.gap),
                   gap_cell(g.Gap),
                   g.mode == GapMode::Exact ? gap_cell(g.gap_c) : std::string()});
}

inline constexpr const char* kBoundCsvHeader = "name,i,value,applicable,slack,gap,Gap,mode";

// One bound-report row. Inapplicable bounds leave the value blank rather
// than printing the infinity sentinel.
inline std::string bound_row(const BoundReport& b, int i, const GapData& g) {
  return csv_join({b.name, std::to_string(i),
                   b.applicable ? format_g17(b.value) : std::string(),
                   b.applicable ? "1" : "0", format_g17(b.assumption_slack), gap_cell(g.gap),
                   gap_cell(g.Gap), gap_mode_name(g.mode)});
}

}  // namespace ritz
