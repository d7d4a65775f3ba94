// SPDX-License-Identifier: Apache-2.0

#include "kep/matrix_market.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>
#include "kep/errors.hpp"

namespace kep
{

namespace
{

std::string Lower(std::string s)
{
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

bool Blank(const std::string &line)
{
  return std::all_of(line.begin(), line.end(),
                     [](unsigned char c) { return std::isspace(c); });
}

using Kind = ParseError::Kind;

}  // namespace

SparseSymmetric ReadMatrixMarket(std::istream &in)
{
  std::string line;
  if (!std::getline(in, line))
  {
    throw ParseError(Kind::MalformedHeader, "empty Matrix Market stream");
  }
  std::istringstream header(line);
  std::string banner, object, format, field, symmetry;
  header >> banner >> object >> format >> field >> symmetry;
  if (banner != "%%MatrixMarket" || Lower(object) != "matrix")
  {
    throw ParseError(Kind::MalformedHeader, "missing '%%MatrixMarket matrix' banner");
  }
  format = Lower(format);
  field = Lower(field);
  symmetry = Lower(symmetry);
  if (format != "coordinate")
  {
    throw ParseError(Kind::MalformedHeader,
                     "only the coordinate format is supported, got '" + format + "'");
  }
  if (field == "complex")
  {
    throw ParseError(Kind::UnsupportedField, "complex matrices are not supported");
  }
  if (field != "real" && field != "integer" && field != "double")
  {
    throw ParseError(Kind::UnsupportedField, "unsupported field '" + field + "'");
  }
  if (symmetry != "symmetric" && symmetry != "general")
  {
    throw ParseError(Kind::UnsupportedField, "unsupported symmetry '" + symmetry + "'");
  }

  // Skip comments to the size line.
  do
  {
    if (!std::getline(in, line))
    {
      throw ParseError(Kind::MalformedHeader, "missing size line");
    }
  } while (!line.empty() && line[0] == '%');
  while (Blank(line))
  {
    if (!std::getline(in, line))
    {
      throw ParseError(Kind::MalformedHeader, "missing size line");
    }
  }
  long long rows = 0, cols = 0, nnz = 0;
  {
    std::istringstream sz(line);
    if (!(sz >> rows >> cols >> nnz) || rows < 0 || cols < 0 || nnz < 0)
    {
      throw ParseError(Kind::MalformedHeader, "malformed size line '" + line + "'");
    }
  }
  if (rows != cols)
  {
    throw ParseError(Kind::NonSquare, "matrix is " + std::to_string(rows) + "x" +
                                          std::to_string(cols) + ", expected square");
  }

  std::vector<Triplet> entries;
  entries.reserve(static_cast<std::size_t>(nnz));
  long long read = 0;
  while (read < nnz && std::getline(in, line))
  {
    if (line.empty() || line[0] == '%' || Blank(line))
    {
      continue;
    }
    const char *p = line.data();
    const char *end = p + line.size();
    auto skip = [&]
    {
      while (p < end && std::isspace(static_cast<unsigned char>(*p)))
      {
        p++;
      }
    };
    long long r = 0, c = 0;
    double v = 0.0;
    skip();
    auto res = std::from_chars(p, end, r);
    if (res.ec != std::errc())
    {
      throw ParseError(Kind::MalformedEntry, "malformed entry line '" + line + "'");
    }
    p = res.ptr;
    skip();
    res = std::from_chars(p, end, c);
    if (res.ec != std::errc())
    {
      throw ParseError(Kind::MalformedEntry, "malformed entry line '" + line + "'");
    }
    p = res.ptr;
    skip();
    auto vres = std::from_chars(p, end, v);
    if (vres.ec != std::errc())
    {
      throw ParseError(Kind::MalformedEntry, "malformed entry line '" + line + "'");
    }
    if (r < 1 || c < 1 || r > rows || c > cols)
    {
      throw ParseError(Kind::IndexOutOfRange, "entry (" + std::to_string(r) + ", " +
                                                  std::to_string(c) + ") outside a " +
                                                  std::to_string(rows) + "x" +
                                                  std::to_string(cols) + " matrix");
    }
    entries.push_back({r - 1, c - 1, v});
    read++;
  }
  if (read < nnz)
  {
    throw ParseError(Kind::MalformedEntry, "expected " + std::to_string(nnz) +
                                               " entries, found " + std::to_string(read));
  }

  if (symmetry == "symmetric")
  {
    for (const auto &t : entries)
    {
      if (t.row < t.col)
      {
        throw ParseError(Kind::MalformedEntry,
                         "symmetric file stores an upper-triangular entry (" +
                             std::to_string(t.row + 1) + ", " + std::to_string(t.col + 1) + ")");
      }
    }
    return SparseSymmetric::FromTriplets(rows, entries);
  }

  // General storage: sum duplicates per coordinate, then require an exactly symmetric set.
  std::map<std::pair<Index, Index>, double> sums;
  for (const auto &t : entries)
  {
    sums[{t.row, t.col}] += t.value;
  }
  std::vector<Triplet> lower;
  for (const auto &[rc, v] : sums)
  {
    const auto [r, c] = rc;
    auto mirror = sums.find({c, r});
    if (mirror == sums.end() || mirror->second != v)
    {
      throw ParseError(Kind::NotSymmetric, "general matrix is not symmetric at (" +
                                               std::to_string(r + 1) + ", " +
                                               std::to_string(c + 1) + ")");
    }
    if (r >= c)
    {
      lower.push_back({r, c, v});
    }
  }
  return SparseSymmetric::FromTriplets(rows, lower);
}

SparseSymmetric ReadMatrixMarket(const std::filesystem::path &path)
{
  std::ifstream in(path);
  if (!in)
  {
    throw Error("cannot open " + path.string());
  }
  return ReadMatrixMarket(in);
}

void WriteMatrixMarket(std::ostream &out, const SparseSymmetric &S)
{
  out << "%%MatrixMarket matrix coordinate real symmetric\n";
  out << S.Size() << ' ' << S.Size() << ' ' << S.NumNonzeros() << '\n';
  char buf[64];
  for (const auto &t : S.Triplets())
  {
    std::snprintf(buf, sizeof(buf), "%.17g", t.value);
    out << t.row + 1 << ' ' << t.col + 1 << ' ' << buf << '\n';
  }
}

}  // namespace kep
