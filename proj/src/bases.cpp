#include "condlab/bases.hpp"

#include <fstream>
#include <sstream>

#include "condlab/errors.hpp"

namespace condlab {

Basis make_basis(const NormSpec& space, const RationalMatrix& vectors) {
  if (vectors.rows() != vectors.cols())
    throw DimensionMismatch("basis matrix must be square");
  if (vectors.rows() != space.dim())
    throw DimensionMismatch("basis matrix does not match the space dimension");
  auto inv = inverse(vectors);
  if (!inv) throw NotABasis("basis vectors are linearly dependent");
  return Basis(space, vectors, std::move(*inv));
}

Basis canonical_basis(const NormSpec& space) {
  return make_basis(space, RationalMatrix::identity(space.dim()));
}

Basis summing_basis(const NormSpec& space) {
  const std::size_t n = space.dim();
  RationalMatrix m(n, n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i <= j; ++i) m(i, j) = 1;
  return make_basis(space, m);
}

RationalMatrix projection_matrix(const Basis& b, const std::vector<std::size_t>& subset) {
  const std::size_t n = b.dim();
  const RationalMatrix& x = b.vectors();
  const RationalMatrix& d = b.biorthogonals();
  RationalMatrix p(n, n);
  for (std::size_t a : subset) {
    if (a >= n) throw InvalidArgument("projection index out of range");
    for (std::size_t i = 0; i < n; ++i) {
      if (sgn(x(i, a)) == 0) continue;
      for (std::size_t j = 0; j < n; ++j)
        if (sgn(d(a, j)) != 0) p(i, j) += x(i, a) * d(a, j);
    }
  }
  return p;
}

RationalMatrix partial_sum_matrix(const Basis& b, std::size_t m) {
  if (m > b.dim()) throw InvalidArgument("partial sum index out of range");
  std::vector<std::size_t> first(m);
  for (std::size_t k = 0; k < m; ++k) first[k] = k;
  return projection_matrix(b, first);
}

RationalVector coordinate_projection(const Basis& b, const std::vector<std::size_t>& subset,
                                     const RationalVector& f) {
  if (f.size() != b.dim()) throw DimensionMismatch("vector length differs from basis dimension");
  const RationalVector c = b.coefficients(f);
  RationalVector kept(b.dim(), Rational(0));
  for (std::size_t a : subset) {
    if (a >= b.dim()) throw InvalidArgument("projection index out of range");
    kept[a] = c[a];
  }
  return b.synthesize(kept);
}

namespace {

Certification weaker(Certification a, Certification b) {
  return static_cast<int>(a) >= static_cast<int>(b) ? a : b;
}

}  // namespace

OperatorNormResult basis_constant(const Basis& b, const OperatorNormOptions& options) {
  OperatorNormResult best{Scalar(0), Certification::CertifiedExact, {}};
  for (std::size_t m = 1; m <= b.dim(); ++m) {
    auto r = operator_norm(partial_sum_matrix(b, m), b.space(), b.space(), options);
    const Certification flag = weaker(best.flag, r.flag);
    if (m == 1 || r.value > best.value) best = std::move(r);
    best.flag = flag;
  }
  return best;
}

OperatorNormResult functional_norm(const RationalVector& phi, const NormSpec& space,
                                   const OperatorNormOptions& options) {
  RationalMatrix row(1, phi.size());
  for (std::size_t j = 0; j < phi.size(); ++j) row(0, j) = phi[j];
  const NormSpec target = NormSpec::lp(1, 1);
  if (options.mode == Mode::Exact) {
    try {
      return operator_norm(row, space, target, options);
    } catch (const NotSupported&) {
      // no dual description (interpolated spaces): sample instead
    }
  }
  OperatorNormOptions sampled = options;
  sampled.mode = Mode::Heuristic;
  return operator_norm(row, space, target, sampled);
}

SeminormBounds seminorm_bounds(const Basis& b, const OperatorNormOptions& options) {
  SeminormBounds out;
  for (std::size_t k = 0; k < b.dim(); ++k) {
    const Scalar v = norm(b.vector(k), b.space());
    const auto d = functional_norm(b.functional(k), b.space(), options);
    if (k == 0) {
      out.lower = out.upper = v;
      out.dual_upper = d.value;
    } else {
      if (v < out.lower) out.lower = v;
      if (v > out.upper) out.upper = v;
      if (d.value > out.dual_upper) out.dual_upper = d.value;
    }
    out.dual_flag = weaker(out.dual_flag, d.flag);
  }
  return out;
}

Scalar type_p_constant(const Basis& b) {
  RationalVector sum(b.dim(), Rational(0));
  Scalar best(0);
  for (std::size_t m = 0; m < b.dim(); ++m) {
    const RationalVector x = b.vector(m);
    for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += x[i];
    const Scalar v = norm(sum, b.space());
    if (m == 0 || v > best) best = v;
  }
  return best;
}

OperatorNormResult type_p_star_constant(const Basis& b, const OperatorNormOptions& options) {
  RationalVector phi(b.dim(), Rational(0));
  for (std::size_t k = 0; k < b.dim(); ++k) {
    const RationalVector row = b.functional(k);
    for (std::size_t j = 0; j < phi.size(); ++j) phi[j] += row[j];
  }
  return functional_norm(phi, b.space(), options);
}

BasisReport basis_report(const Basis& b, const OperatorNormOptions& options) {
  return {basis_constant(b, options), seminorm_bounds(b, options), type_p_constant(b),
          type_p_star_constant(b, options)};
}

Basis transform_partial_sums(const Basis& b) {
  const std::size_t n = b.dim();
  RationalMatrix y(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    Rational run = 0;
    for (std::size_t j = 0; j < n; ++j) {
      run += b.vectors()(i, j);
      y(i, j) = run;
    }
  }
  return make_basis(b.space(), y);
}

Basis transform_differences(const Basis& b) {
  const std::size_t n = b.dim();
  RationalMatrix y(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      y(i, j) = j == 0 ? b.vectors()(i, 0) : Rational(b.vectors()(i, j) - b.vectors()(i, j - 1));
  return make_basis(b.space(), y);
}

Basis twist(const Basis& b) {
  const std::size_t n = b.dim();
  if (n % 2 != 0) throw InvalidArgument("twist needs an even dimension");
  RationalMatrix y(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; j += 2) {
      const Rational& a = b.vectors()(i, j);
      const Rational& c = b.vectors()(i, j + 1);
      y(i, j) = a + c;
      y(i, j + 1) = a - c;
    }
  return make_basis(b.space(), y);
}

Basis diamond(const Basis& x, const Basis& y) {
  if (x.dim() != y.dim()) throw DimensionMismatch("diamond needs bases of equal length");
  const std::size_t n = x.dim();
  RationalMatrix z(2 * n, 2 * n);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i) {
      z(i, 2 * k) = z(i, 2 * k + 1) = x.vectors()(i, k);
      z(n + i, 2 * k) = y.vectors()(i, k);
      z(n + i, 2 * k + 1) = -y.vectors()(i, k);
    }
  return make_basis(NormSpec::direct_sum_max(x.space(), y.space()), z);
}

BlockIndex block_index(std::size_t n) {
  if (n == 0) throw InvalidArgument("block indices start at 1");
  unsigned j = 1;
  while ((std::size_t{2} << j) - 2 < n) ++j;
  const std::size_t offset = n - ((std::size_t{1} << j) - 1);
  return {j, offset / 2 + 1, offset % 2 == 0};
}

unsigned block_count(std::size_t dim) {
  for (unsigned j = 1; j < 40; ++j) {
    const std::size_t end = (std::size_t{2} << j) - 2;
    if (end == dim) return j;
    if (end > dim) break;
  }
  throw InvalidArgument("dimension " + std::to_string(dim) +
                        " is not 2^(J+1) - 2 for any number of blocks J");
}

BlockConstruction block_construction(const Basis& b) {
  const std::size_t n = b.dim();
  const unsigned blocks = block_count(n);
  const RationalMatrix& x = b.vectors();

  // Columns are 0-based; block j covers 1-based indices 2^j - 1 .. 2^(j+1) - 2.
  RationalMatrix y(n, n);
  for (unsigned j = 1; j <= blocks; ++j) {
    const std::size_t start = (std::size_t{1} << j) - 1;
    const std::size_t second = 3 * (std::size_t{1} << (j - 1)) - 1;
    const std::size_t end = (std::size_t{2} << j) - 2;
    for (std::size_t c = start; c < second; ++c)
      for (std::size_t i = 0; i < n; ++i) y(i, c - 1) = x(i, c - 1);
    for (std::size_t i = 0; i < n; ++i) {
      Rational run = 0;
      for (std::size_t c = second; c <= end; ++c) {
        run += x(i, c - 1);
        y(i, c - 1) = run;
      }
    }
  }

  RationalMatrix z(n, n);
  for (std::size_t c = 1; c <= n; ++c) {
    const BlockIndex at = block_index(c);
    const std::size_t first = (std::size_t{1} << at.j) - 2 + at.k;
    const std::size_t paired = 3 * (std::size_t{1} << (at.j - 1)) - 2 + at.k;
    for (std::size_t i = 0; i < n; ++i)
      z(i, c - 1) = at.odd ? Rational(y(i, first - 1) + y(i, paired - 1))
                           : Rational(y(i, first - 1) - y(i, paired - 1));
  }
  return {make_basis(b.space(), y), make_basis(b.space(), z), blocks};
}

std::string basis_to_text(const Basis& b) {
  std::ostringstream out;
  out << "{\n  \"format_version\": 1,\n  \"dim\": " << b.dim() << ",\n  \"space\": "
      << to_json(b.space()).dump() << ",\n  \"vectors\": [\n";
  for (std::size_t i = 0; i < b.dim(); ++i) {
    out << "    [";
    for (std::size_t j = 0; j < b.dim(); ++j)
      out << (j ? ", " : "") << '"' << format_rational(b.vectors()(i, j)) << '"';
    out << (i + 1 < b.dim() ? "],\n" : "]\n");
  }
  out << "  ]\n}\n";
  return out.str();
}

namespace {

std::pair<std::size_t, std::size_t> line_column(const std::string& text, std::size_t offset) {
  std::size_t line = 1, column = 1;
  for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return {line, column};
}

/// Offset of the opening quote of the index-th string literal inside the
/// "vectors" array, or npos.
std::size_t locate_cell(const std::string& text, std::size_t index) {
  std::size_t pos = text.find("\"vectors\"");
  if (pos == std::string::npos) return pos;
  pos = text.find('[', pos);
  std::size_t seen = 0;
  while (pos != std::string::npos && pos < text.size()) {
    pos = text.find('"', pos + 1);
    if (pos == std::string::npos) return pos;
    if (seen++ == index) return pos;
    pos = text.find('"', pos + 1);
  }
  return std::string::npos;
}

[[noreturn]] void cell_error(const std::string& text, std::size_t row, std::size_t col,
                             std::size_t dim, const std::string& what) {
  const std::size_t at = locate_cell(text, row * dim + col);
  const std::string msg = "vectors[" + std::to_string(row) + "][" + std::to_string(col) +
                          "]: " + what;
  if (at == std::string::npos) throw ParseError(msg);
  const auto [line, column] = line_column(text, at);
  throw ParseError(msg, line, column);
}

}  // namespace

Basis basis_from_text(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    const std::size_t offset = e.byte > 0 ? e.byte - 1 : 0;
    const auto [line, column] = line_column(text, offset);
    throw ParseError("malformed basis file", line, column);
  }
  if (!doc.is_object()) throw ParseError("basis file must hold an object");
  if (!doc.contains("format_version") || doc["format_version"] != 1)
    throw ParseError("unsupported or missing format_version (expected 1)");
  if (!doc.contains("dim") || !doc["dim"].is_number_unsigned() || doc["dim"].get<std::size_t>() == 0)
    throw ParseError("basis file 'dim' must be a positive integer");
  const std::size_t n = doc["dim"].get<std::size_t>();
  if (!doc.contains("space")) throw ParseError("basis file is missing 'space'");
  const NormSpec space = norm_spec_from_json(doc["space"]);
  if (space.dim() != n) throw ParseError("space dimension differs from 'dim'");
  if (!doc.contains("vectors") || !doc["vectors"].is_array())
    throw ParseError("basis file 'vectors' must be an array");

  // Accept nested rows or one flat row-major list.
  const auto& v = doc["vectors"];
  std::vector<const nlohmann::json*> cells;
  if (v.size() == n && !v.empty() && v[0].is_array()) {
    for (std::size_t i = 0; i < n; ++i) {
      if (!v[i].is_array() || v[i].size() != n)
        throw ParseError("vectors row " + std::to_string(i) + " must hold " + std::to_string(n) +
                         " entries");
      for (const auto& c : v[i]) cells.push_back(&c);
    }
  } else if (v.size() == n * n) {
    for (const auto& c : v) cells.push_back(&c);
  } else {
    throw ParseError("'vectors' must be " + std::to_string(n) + " rows of " + std::to_string(n) +
                     " entries");
  }

  RationalMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const auto& c = *cells[i * n + j];
      if (!c.is_string()) cell_error(text, i, j, n, "entries must be \"p/q\" strings");
      try {
        m(i, j) = parse_rational(c.get<std::string>());
      } catch (const ParseError& e) {
        cell_error(text, i, j, n, e.what());
      }
    }
  return make_basis(space, m);
}

Basis read_basis_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidArgument("cannot open basis file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return basis_from_text(buf.str());
}

void write_basis_file(const std::string& path, const Basis& b) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidArgument("cannot write basis file '" + path + "'");
  out << basis_to_text(b);
}

}  // namespace condlab
