// SPDX-License-Identifier: Apache-2.0

// Minimum-degree ordering on the explicit elimination graph. Eliminating a vertex turns
// its neighbourhood into a clique; degrees are exact, not approximated.

#include <algorithm>
#include <iterator>
#include <set>
#include <tuple>
#include "kep/errors.hpp"
#include "kep/symbolic.hpp"

namespace kep
{

std::vector<std::vector<Index>> Adjacency(const SparseSymmetric &pattern)
{
  const Index n = pattern.Size();
  const auto cp = pattern.ColPtr();
  const auto ri = pattern.RowIdx();
  std::vector<std::vector<Index>> adj(n);
  for (Index j = 0; j < n; j++)
  {
    for (Index p = cp[j]; p < cp[j + 1]; p++)
    {
      const Index i = ri[p];
      if (i != j)
      {
        adj[i].push_back(j);
        adj[j].push_back(i);
      }
    }
  }
  for (auto &a : adj)
  {
    std::sort(a.begin(), a.end());
  }
  return adj;
}

Permutation ComputeOrdering(const SparseSymmetric &pattern)
{
  const Index n = pattern.Size();
  auto adj = Adjacency(pattern);
  std::vector<Index> original_degree(n);
  for (Index v = 0; v < n; v++)
  {
    original_degree[v] = static_cast<Index>(adj[v].size());
  }

  using Key = std::tuple<Index, Index, Index>;  // (degree, original degree, vertex)
  std::set<Key> queue;
  for (Index v = 0; v < n; v++)
  {
    queue.emplace(static_cast<Index>(adj[v].size()), original_degree[v], v);
  }

  std::vector<Index> order;
  order.reserve(n);
  std::vector<Index> merged;
  std::vector<Index> clique;
  while (!queue.empty())
  {
    const auto [deg, odeg, v] = *queue.begin();
    queue.erase(queue.begin());
    order.push_back(v);

    clique = std::move(adj[v]);
    adj[v].clear();
    for (Index u : clique)
    {
      queue.erase({static_cast<Index>(adj[u].size()), original_degree[u], u});
      // adj[u] := (adj[u] ∪ clique) \ {u, v}
      merged.clear();
      std::set_union(adj[u].begin(), adj[u].end(), clique.begin(), clique.end(),
                     std::back_inserter(merged));
      auto &out = adj[u];
      out.clear();
      for (Index w : merged)
      {
        if (w != u && w != v)
        {
          out.push_back(w);
        }
      }
      queue.emplace(static_cast<Index>(out.size()), original_degree[u], u);
    }
  }
  return Permutation(std::move(order), Permutation::Role::FillReducing);
}

}  // namespace kep
