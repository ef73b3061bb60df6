#include "csvd/matrix_market.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

#include "csvd/matrix.hpp"

namespace csvd {

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return s;
}

std::vector<std::string> tokens_of(const std::string& line) {
  std::istringstream is(line);
  std::vector<std::string> toks;
  std::string t;
  while (is >> t) toks.push_back(t);
  return toks;
}

bool is_comment_or_blank(const std::string& line) {
  for (char c : line) {
    if (c == '%') return true;
    if (!std::isspace(static_cast<unsigned char>(c))) return false;
  }
  return true;  // blank
}

// Whitespace token stream over the value region, tracking line numbers.
class TokenReader {
 public:
  TokenReader(std::istream& in, long& lineno) : in_(in), lineno_(lineno) {}

  bool next(std::string& out) {
    for (;;) {
      if (line_stream_ >> out) return true;
      std::string line;
      if (!std::getline(in_, line)) return false;
      ++lineno_;
      if (is_comment_or_blank(line)) {
        line_stream_.clear();
        line_stream_.str("");
        continue;
      }
      line_stream_.clear();
      line_stream_.str(line);
    }
  }

 private:
  std::istream& in_;
  long& lineno_;
  std::istringstream line_stream_;
};

double parse_value(const std::string& tok, long lineno) {
  const char* begin = tok.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (end != begin + tok.size()) {
    throw ParseError("matrix market: invalid number '" + tok + "' at line " +
                         std::to_string(lineno),
                     lineno);
  }
  if (!std::isfinite(v)) {
    throw ParseError("matrix market: non-finite value '" + tok + "' at line " +
                         std::to_string(lineno),
                     lineno);
  }
  return v;
}

}  // namespace

ComplexDense read_matrix(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open '" + path + "' for reading");
  }
  long lineno = 0;

  std::string header;
  if (!std::getline(in, header)) {
    throw ParseError("matrix market: empty file '" + path + "'", 1);
  }
  ++lineno;
  const std::vector<std::string> head = tokens_of(header);
  if (head.size() < 5 || lower(head[0]) != "%%matrixmarket") {
    throw ParseError("matrix market: malformed header line in '" + path +
                         "', expected '%%MatrixMarket matrix array "
                         "<field> general'",
                     1);
  }
  const std::string object = lower(head[1]);
  const std::string format = lower(head[2]);
  const std::string field = lower(head[3]);
  const std::string symmetry = lower(head[4]);
  if (object != "matrix" || format != "array") {
    throw ParseError("matrix market: unsupported format '" + object + " " +
                         format + "', only dense 'matrix array' is accepted",
                     1);
  }
  const bool complex_field = field == "complex";
  if (!complex_field && field != "real" && field != "integer") {
    throw ParseError("matrix market: unsupported field '" + field +
                         "', expected real, integer, or complex",
                     1);
  }
  if (symmetry != "general") {
    throw ParseError("matrix market: unsupported symmetry '" + symmetry +
                         "', only general is accepted",
                     1);
  }

  // Size line, after optional comments.
  Index rows = 0, cols = 0;
  for (;;) {
    std::string line;
    if (!std::getline(in, line)) {
      throw ParseError("matrix market: missing size line in '" + path + "'",
                       lineno);
    }
    ++lineno;
    if (is_comment_or_blank(line)) continue;
    std::istringstream is(line);
    std::string extra;
    if (!(is >> rows >> cols) || (is >> extra)) {
      throw ParseError("matrix market: malformed size line '" + line +
                           "' at line " + std::to_string(lineno),
                       lineno);
    }
    break;
  }
  if (rows < 1 || cols < 1) {
    throw ParseError("matrix market: dimensions must be positive, got " +
                         std::to_string(rows) + " " + std::to_string(cols),
                     lineno);
  }

  const Index total = rows * cols;
  ComplexDense a(rows, cols);
  TokenReader reader(in, lineno);
  std::string tok;
  for (Index count = 0; count < total; ++count) {
    if (!reader.next(tok)) {
      throw ParseError("matrix market: expected " + std::to_string(total) +
                           " values, found " + std::to_string(count) +
                           " (line " + std::to_string(lineno) + ")",
                       lineno);
    }
    const double re = parse_value(tok, lineno);
    double im = 0.0;
    if (complex_field) {
      if (!reader.next(tok)) {
        throw ParseError(
            "matrix market: value " + std::to_string(count + 1) +
                " is missing its imaginary part (line " +
                std::to_string(lineno) + ")",
            lineno);
      }
      im = parse_value(tok, lineno);
    }
    a(count % rows, count / rows) = Complex(re, im);  // column-major stream
  }
  if (reader.next(tok)) {
    throw ParseError("matrix market: expected " + std::to_string(total) +
                         " values but found extra data '" + tok + "' at line " +
                         std::to_string(lineno),
                     lineno);
  }
  return a;
}

void write_matrix(const std::string& path, const ComplexDense& a) {
  detail::require_nonempty(a, "write_matrix");
  std::ofstream out(path);
  if (!out) {
    throw IoError("cannot open '" + path + "' for writing");
  }
  out << "%%MatrixMarket matrix array complex general\n";
  out << a.rows() << " " << a.cols() << "\n";
  char buf[80];
  for (Index j = 0; j < a.cols(); ++j) {
    for (Index i = 0; i < a.rows(); ++i) {
      std::snprintf(buf, sizeof buf, "%.17g %.17g\n", a(i, j).real(),
                    a(i, j).imag());
      out << buf;
    }
  }
  out.flush();
  if (!out) {
    throw IoError("write failure on '" + path + "'");
  }
}

}  // namespace csvd
