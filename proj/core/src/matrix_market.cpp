#include "schwarz/linalg/matrix_market.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

namespace schwarz {

namespace {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

}  // namespace

void write_matrix_market(std::ostream& os, const SparseMatrix& a) {
  os << "%%MatrixMarket matrix coordinate real general\n";
  os << a.nrows() << ' ' << a.ncols() << ' ' << a.nnz() << '\n';
  for (Index i = 0; i < a.nrows(); ++i) {
    auto cols = a.row_cols(i);
    auto vals = a.row_values(i);
    for (std::size_t p = 0; p < cols.size(); ++p)
      os << i + 1 << ' ' << cols[p] + 1 << ' ' << fmt17(vals[p]) << '\n';
  }
}

void write_matrix_market(const std::string& path, const SparseMatrix& a) {
  std::ofstream os(path);
  if (!os) throw Error("cannot open " + path + " for writing");
  write_matrix_market(os, a);
  if (!os) throw Error("write failed: " + path);
}

SparseMatrix read_matrix_market(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw Error("matrix market: empty input");
  std::istringstream header(line);
  std::string banner, object, format, field, symmetry;
  header >> banner >> object >> format >> field >> symmetry;
  if (banner != "%%MatrixMarket" || lower(object) != "matrix" || lower(format) != "coordinate")
    throw Error("matrix market: only coordinate matrices are supported");
  field = lower(field);
  symmetry = lower(symmetry);
  if (field != "real" && field != "integer")
    throw Error("matrix market: unsupported field " + field);
  const bool symmetric = symmetry == "symmetric";
  if (!symmetric && symmetry != "general")
    throw Error("matrix market: unsupported symmetry " + symmetry);
  while (std::getline(is, line))
    if (!line.empty() && line[0] != '%') break;
  long long nrows = 0, ncols = 0, nnz = 0;
  if (!(std::istringstream(line) >> nrows >> ncols >> nnz))
    throw Error("matrix market: bad size line");
  std::vector<Triplet> t;
  t.reserve(static_cast<std::size_t>(symmetric ? 2 * nnz : nnz));
  for (long long k = 0; k < nnz; ++k) {
    long long i = 0, j = 0;
    double v = 0.0;
    if (!(is >> i >> j >> v)) throw Error("matrix market: truncated entry list");
    if (i < 1 || i > nrows || j < 1 || j > ncols) throw Error("matrix market: index out of range");
    t.push_back({static_cast<Index>(i - 1), static_cast<Index>(j - 1), v});
    if (symmetric && i != j) t.push_back({static_cast<Index>(j - 1), static_cast<Index>(i - 1), v});
  }
  return SparseMatrix::from_triplets(static_cast<Index>(nrows), static_cast<Index>(ncols),
                                     std::move(t), symmetric);
}

SparseMatrix read_matrix_market(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw Error("cannot open " + path);
  return read_matrix_market(is);
}

void write_matrix_market_vector(const std::string& path, std::span<const double> v) {
  std::ofstream os(path);
  if (!os) throw Error("cannot open " + path + " for writing");
  os << "%%MatrixMarket matrix array real general\n" << v.size() << " 1\n";
  for (double x : v) os << fmt17(x) << '\n';
  if (!os) throw Error("write failed: " + path);
}

}  // namespace schwarz
