#pragma once
// Local graph surgeries: edge contraction and spanning-forest enumeration.
// Contraction returns a raw labeled graph; all reordering signs are produced
// later by canonicalize. Term signs of differentials live with the
// differentials themselves.

#include <functional>
#include <optional>

#include "gcx/graph.hpp"

namespace gcx {

// merges the higher endpoint of edge k into the lower one and closes the
// label gap; nullopt encodes ZERO (the contraction leaves the family)
inline std::optional<HairyGraph> contract_edge(const HairyGraph& g, int k) {
  g.check_valid();
  if (k < 0 || k >= (int)g.edges.size())
    throw std::runtime_error("edge index out of range: " + std::to_string(k));
  const Edge a = g.edges[k];
  if (a.t >= g.v || a.h >= g.v) throw std::runtime_error("hair edges cannot be contracted");
  if (a.ty == EType::CROSSED) throw std::runtime_error("crossed edges cannot be contracted");
  if (a.t == a.h) throw std::runtime_error("tadpole edges are never contracted");

  int x = std::min(a.t, a.h), y = std::max(a.t, a.h);
  auto m = [&](int z) {
    if (z >= g.v) return z - 1;  // externals shift down with the vertex count
    if (z == y) return x;
    return z > y ? z - 1 : z;
  };
  HairyGraph r = g;
  r.v = g.v - 1;
  r.edges.clear();
  for (int i = 0; i < (int)g.edges.size(); i++) {
    if (i == k) continue;
    Edge e = g.edges[i];
    e.t = m(e.t);
    e.h = m(e.h);
    r.edges.push_back(e);
  }
  for (auto& h : r.hairs) h.vx = m(h.vx);
  if (!g.genus.empty()) {
    r.genus.clear();
    for (int z = 0; z < g.v; z++)
      if (z != y) r.genus.push_back(g.genus[z]);
    r.genus[x] += g.genus[y];
  }
  if (g.directed_family()) {
    if (!is_directed_acyclic(r)) return std::nullopt;
    if (r.valence(x) == 2 && r.indeg(x) == 1 && r.outdeg(x) == 1) return std::nullopt;
  }
  return r;
}

// Forests spanning all internal and external vertices with exactly one
// external vertex per component. Members are indices into the combined list
// edges ++ hairs; subsets are emitted in lexicographic order.
// valence rules are deliberately not enforced here: the forest sum is used on
// intermediate shapes as well
inline vector<vector<int>> spanning_forests(const HairyGraph& g) {
  if (g.directed_family()) throw std::runtime_error("spanning forests need an undirected family");
  struct Item {
    int a, b;
  };
  vector<Item> items;
  for (auto& e : g.edges) items.push_back({e.t, e.h});
  for (auto& h : g.hairs) items.push_back({h.vx, g.v + h.label - 1});
  if (g.s == 0) throw std::runtime_error("no hairs, no spanning forest");
  int N = g.v + g.s;
  // each component holds exactly one of the s externals, so |T| = N - s = v
  // a set of v acyclic edges never joining two externals has s components
  // with one external each, so it is exactly a valid forest
  vector<vector<int>> out;
  vector<int> pick;
  std::function<void(int, vector<int>)> rec = [&](int from, vector<int> uf) {
    auto find = [&](int z) {
      while (uf[z] != z) z = uf[z];
      return z;
    };
    if ((int)pick.size() == g.v) {
      out.push_back(pick);
      return;
    }
    int need = g.v - (int)pick.size();
    for (int i = from; (int)items.size() - i >= need; i++) {
      int ra = find(items[i].a), rb = find(items[i].b);
      if (ra == rb) continue;  // cycle
      bool ea = false, eb = false;
      for (int z = g.v; z < N; z++) {
        if (find(z) == ra) ea = true;
        if (find(z) == rb) eb = true;
      }
      if (ea && eb) continue;  // would join two externals
      auto uf2 = uf;
      uf2[ra] = rb;
      pick.push_back(i);
      rec(i + 1, uf2);
      pick.pop_back();
    }
  };
  vector<int> uf(N);
  for (int z = 0; z < N; z++) uf[z] = z;
  rec(0, uf);
  return out;
}

}  // namespace gcx
