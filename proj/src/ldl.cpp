// SPDX-License-Identifier: Apache-2.0

// Right-looking sparse LDL^T in fill-reducing order. Each active column keeps its full
// symmetric adjacency (rows above and below the diagonal) so the Bunch-Kaufman search over
// a column and its partner column is a linear scan. Updates are merged structurally:
// entries that cancel to zero remain stored.

#include "kep/ldl.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <string>
#include "kep/errors.hpp"

namespace kep
{

namespace
{

struct Entry
{
  Index row;
  double value;
};

using Column = std::vector<Entry>;

// Bunch-Kaufman growth parameter (1 + sqrt(17)) / 8.
constexpr double kBunchKaufmanAlpha = 0.6403882032022076;

// col := (col without rows skip1, skip2) + update. Both inputs are sorted by row.
void MergeUpdate(Column &col, const Column &update, Index skip1, Index skip2, Column &scratch)
{
  scratch.clear();
  scratch.reserve(col.size() + update.size());
  auto a = col.begin();
  auto b = update.begin();
  while (a != col.end() || b != update.end())
  {
    if (a != col.end() && (a->row == skip1 || a->row == skip2))
    {
      ++a;
    }
    else if (b == update.end() || (a != col.end() && a->row < b->row))
    {
      scratch.push_back(*a++);
    }
    else if (a == col.end() || b->row < a->row)
    {
      scratch.push_back(*b++);
    }
    else
    {
      scratch.push_back({a->row, a->value + b->value});
      ++a;
      ++b;
    }
  }
  col.swap(scratch);
}

double ValueAt(const Column &col, Index row)
{
  auto it = std::lower_bound(col.begin(), col.end(), row,
                             [](const Entry &e, Index r) { return e.row < r; });
  return (it != col.end() && it->row == row) ? it->value : 0.0;
}

// Largest magnitude off-diagonal entry; ties resolve to the smallest row.
std::pair<double, Index> MaxOffDiagonal(const Column &col)
{
  double best = 0.0;
  Index arg = -1;
  for (const auto &e : col)
  {
    const double a = std::abs(e.value);
    if (a > best)
    {
      best = a;
      arg = e.row;
    }
  }
  return {best, arg};
}

class Eliminator
{
public:
  Eliminator(const SparseSymmetric &S, const Permutation &Q, const LdlOptions &options)
    : n_(S.Size()), cols_(n_), diag_(n_, 0.0), eliminated_(n_, 0), lcols_(n_),
      eps_(options.breakdown_factor * S.MaxAbs()), pivoting_(options.pivoting)
  {
    const auto pinv = Q.Inverse();
    const auto cp = S.ColPtr();
    const auto ri = S.RowIdx();
    const auto v = S.Values();
    for (Index j = 0; j < n_; j++)
    {
      for (Index p = cp[j]; p < cp[j + 1]; p++)
      {
        const Index a = pinv[ri[p]], b = pinv[j];
        if (a == b)
        {
          diag_[a] = v[p];
        }
        else
        {
          cols_[a].push_back({b, v[p]});
          cols_[b].push_back({a, v[p]});
        }
      }
    }
    for (auto &c : cols_)
    {
      std::sort(c.begin(), c.end(), [](const Entry &x, const Entry &y) { return x.row < y.row; });
    }
  }

  void Run()
  {
    for (Index p = 0; p < n_; p++)
    {
      while (!eliminated_[p])
      {
        Step(p);
      }
    }
  }

  Index n_;
  std::vector<Column> cols_;
  std::vector<double> diag_;
  std::vector<char> eliminated_;
  std::vector<Column> lcols_;  // by Q position, rows in Q positions
  std::vector<Index> sequence_;
  std::vector<int> block_;
  std::vector<double> d_diag_, d_off_;
  Inertia inertia_;
  Index two_by_two_ = 0;

private:
  double eps_;
  bool pivoting_;
  Column update_, scratch_;

  void Step(Index k)
  {
    const double akk = diag_[k];
    if (!pivoting_)
    {
      Pivot1(k);
      return;
    }
    const auto [lambda, r] = MaxOffDiagonal(cols_[k]);
    if (std::max(std::abs(akk), lambda) <= eps_)
    {
      throw ExactSingularity(sequence_.size(), akk);
    }
    if (std::abs(akk) >= kBunchKaufmanAlpha * lambda)
    {
      Pivot1(k);
      return;
    }
    const double sigma_r = MaxOffDiagonal(cols_[r]).first;
    if (std::abs(akk) * sigma_r >= kBunchKaufmanAlpha * lambda * lambda)
    {
      Pivot1(k);
    }
    else if (std::abs(diag_[r]) >= kBunchKaufmanAlpha * sigma_r)
    {
      Pivot1(r);
    }
    else
    {
      Pivot2(k, r);
    }
  }

  void Pivot1(Index c)
  {
    const double d = diag_[c];
    if (std::abs(d) <= eps_)
    {
      throw ExactSingularity(sequence_.size(), d);
    }
    Column pivot_col = std::move(cols_[c]);
    cols_[c].clear();
    for (const auto &[j, ajc] : pivot_col)
    {
      const double f = ajc / d;
      diag_[j] -= ajc * f;
      update_.clear();
      for (const auto &[i, aic] : pivot_col)
      {
        if (i != j)
        {
          update_.push_back({i, -aic * f});
        }
      }
      MergeUpdate(cols_[j], update_, c, -1, scratch_);
    }
    for (auto &e : pivot_col)
    {
      e.value /= d;
    }
    lcols_[c] = std::move(pivot_col);
    eliminated_[c] = 1;
    sequence_.push_back(c);
    block_.push_back(1);
    d_diag_.push_back(d);
    d_off_.push_back(0.0);
    (d < 0.0 ? inertia_.negative : inertia_.positive)++;
  }

  void Pivot2(Index k, Index r)
  {
    const double akk = diag_[k], arr = diag_[r];
    const double akr = ValueAt(cols_[k], r);
    const double det = akk * arr - akr * akr;
    // Eigenvalues of the 2x2 block.
    const double mean = 0.5 * (akk + arr);
    const double rad = std::hypot(0.5 * (akk - arr), akr);
    const double small = std::min(std::abs(mean - rad), std::abs(mean + rad));
    if (small <= eps_)
    {
      throw ExactSingularity(sequence_.size(), small);
    }

    // Union of both columns without k and r: rows with (a_ik, a_ir).
    struct Coupled
    {
      Index row;
      double ak, ar;
    };
    std::vector<Coupled> coupled;
    {
      const Column &ck = cols_[k];
      const Column &cr = cols_[r];
      auto a = ck.begin();
      auto b = cr.begin();
      while (a != ck.end() || b != cr.end())
      {
        if (a != ck.end() && (a->row == r))
        {
          ++a;
          continue;
        }
        if (b != cr.end() && (b->row == k))
        {
          ++b;
          continue;
        }
        if (b == cr.end() || (a != ck.end() && a->row < b->row))
        {
          coupled.push_back({a->row, a->value, 0.0});
          ++a;
        }
        else if (a == ck.end() || b->row < a->row)
        {
          coupled.push_back({b->row, 0.0, b->value});
          ++b;
        }
        else
        {
          coupled.push_back({a->row, a->value, b->value});
          ++a;
          ++b;
        }
      }
    }
    cols_[k].clear();
    cols_[r].clear();

    // l_i = c_i E^{-1}
    std::vector<double> lk(coupled.size()), lr(coupled.size());
    for (std::size_t t = 0; t < coupled.size(); t++)
    {
      lk[t] = (coupled[t].ak * arr - coupled[t].ar * akr) / det;
      lr[t] = (coupled[t].ar * akk - coupled[t].ak * akr) / det;
    }
    for (std::size_t s = 0; s < coupled.size(); s++)
    {
      const Index j = coupled[s].row;
      const double ajk = coupled[s].ak, ajr = coupled[s].ar;
      diag_[j] -= lk[s] * ajk + lr[s] * ajr;
      update_.clear();
      for (std::size_t t = 0; t < coupled.size(); t++)
      {
        if (t != s)
        {
          update_.push_back({coupled[t].row, -(lk[t] * ajk + lr[t] * ajr)});
        }
      }
      MergeUpdate(cols_[j], update_, k, r, scratch_);
    }
    Column colk, colr;
    colk.reserve(coupled.size());
    colr.reserve(coupled.size());
    for (std::size_t t = 0; t < coupled.size(); t++)
    {
      colk.push_back({coupled[t].row, lk[t]});
      colr.push_back({coupled[t].row, lr[t]});
    }
    lcols_[k] = std::move(colk);
    lcols_[r] = std::move(colr);
    eliminated_[k] = eliminated_[r] = 1;
    sequence_.push_back(k);
    sequence_.push_back(r);
    block_.push_back(2);
    block_.push_back(0);
    d_diag_.push_back(akk);
    d_diag_.push_back(arr);
    d_off_.push_back(akr);
    d_off_.push_back(0.0);
    two_by_two_++;
    if (det < 0.0)
    {
      inertia_.negative++;
      inertia_.positive++;
    }
    else if (mean > 0.0)
    {
      inertia_.positive += 2;
    }
    else
    {
      inertia_.negative += 2;
    }
  }
};

}  // namespace

std::size_t LdlFactorization::NumFactorNonzeros() const
{
  return l_row_idx_.size() + static_cast<std::size_t>(n_) +
         static_cast<std::size_t>(num_two_by_two_);
}

LdlFactorization NumericFactorize(const SparseSymmetric &shifted,
                                  const SymbolicFactorization &symbolic,
                                  const LdlOptions &options)
{
  if (shifted.PatternId() != symbolic.pattern_id || shifted.Size() != symbolic.n)
  {
    throw PatternMismatch("symbolic factorization belongs to a different sparsity pattern");
  }
  Eliminator elim(shifted, symbolic.ordering, options);
  elim.Run();

  const Index n = elim.n_;
  LdlFactorization F;
  F.n_ = n;
  F.inertia_ = elim.inertia_;
  F.fill_ = symbolic.ordering;
  F.pivot_ = Permutation(elim.sequence_, Permutation::Role::Stability);
  F.order_.resize(n);
  std::vector<Index> position(n);
  for (Index t = 0; t < n; t++)
  {
    F.order_[t] = symbolic.ordering[elim.sequence_[t]];
    position[elim.sequence_[t]] = t;
  }
  F.l_col_ptr_.assign(n + 1, 0);
  for (Index t = 0; t < n; t++)
  {
    auto &col = elim.lcols_[elim.sequence_[t]];
    for (auto &e : col)
    {
      e.row = position[e.row];
    }
    std::sort(col.begin(), col.end(), [](const Entry &a, const Entry &b) { return a.row < b.row; });
    for (const auto &e : col)
    {
      F.l_row_idx_.push_back(e.row);
      F.l_values_.push_back(e.value);
    }
    F.l_col_ptr_[t + 1] = static_cast<Index>(F.l_row_idx_.size());
  }
  F.block_size_ = std::move(elim.block_);
  F.d_diag_ = std::move(elim.d_diag_);
  F.d_offdiag_ = std::move(elim.d_off_);
  F.num_two_by_two_ = elim.two_by_two_;
  return F;
}

void LdlFactorization::Solve(std::span<const double> rhs, std::span<double> x) const
{
  if (static_cast<Index>(rhs.size()) != n_ || static_cast<Index>(x.size()) != n_)
  {
    throw DimensionMismatch("right-hand side of length " + std::to_string(rhs.size()) +
                            " for a factorization of size " + std::to_string(n_));
  }
  if (inertia_.zero > 0)
  {
    throw SingularFactor("factorization has zero pivots");
  }
  std::vector<double> y(n_);
  for (Index t = 0; t < n_; t++)
  {
    y[t] = rhs[order_[t]];
  }
  for (Index t = 0; t < n_; t++)
  {
    const double yt = y[t];
    if (yt != 0.0)
    {
      for (Index p = l_col_ptr_[t]; p < l_col_ptr_[t + 1]; p++)
      {
        y[l_row_idx_[p]] -= l_values_[p] * yt;
      }
    }
  }
  for (Index t = 0; t < n_; t++)
  {
    if (block_size_[t] == 1)
    {
      y[t] /= d_diag_[t];
    }
    else if (block_size_[t] == 2)
    {
      const double a = d_diag_[t], b = d_offdiag_[t], c = d_diag_[t + 1];
      const double det = a * c - b * b;
      const double y0 = y[t], y1 = y[t + 1];
      y[t] = (c * y0 - b * y1) / det;
      y[t + 1] = (a * y1 - b * y0) / det;
    }
  }
  for (Index t = n_ - 1; t >= 0; t--)
  {
    double acc = y[t];
    for (Index p = l_col_ptr_[t]; p < l_col_ptr_[t + 1]; p++)
    {
      acc -= l_values_[p] * y[l_row_idx_[p]];
    }
    y[t] = acc;
  }
  for (Index t = 0; t < n_; t++)
  {
    x[order_[t]] = y[t];
  }
}

std::vector<double> LdlFactorization::Solve(std::span<const double> rhs) const
{
  std::vector<double> x(rhs.size());
  Solve(rhs, x);
  return x;
}

Index InertiaBelow(const SparseSymmetric &A, const SparseSymmetric &B, double sigma,
                   const SymbolicFactorization &symbolic)
{
  return NumericFactorize(ShiftedCombine(A, B, sigma), symbolic).GetInertia().negative;
}

ShiftedPencil::ShiftedPencil(const SparseSymmetric &A, const SparseSymmetric &B,
                             const SymbolicFactorization &symbolic, LdlOptions options)
  : A_(A), B_(B), symbolic_(symbolic), options_(options)
{
  if (A.Size() != B.Size() || A.Size() != symbolic.n)
  {
    throw DimensionMismatch("pencil and symbolic factorization sizes differ");
  }
}

LdlFactorization ShiftedPencil::Factorize(double sigma)
{
  const auto start = std::chrono::steady_clock::now();
  const auto elapsed = [&start]
  { return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count(); };
  try
  {
    auto F = NumericFactorize(ShiftedCombine(A_, B_, sigma), symbolic_, options_);
    factorizations_++;
    total_nzf_ += F.NumFactorNonzeros();
    seconds_ += elapsed();
    return F;
  }
  catch (const ExactSingularity &)
  {
    failures_++;
    seconds_ += elapsed();
    throw;
  }
}

}  // namespace kep
