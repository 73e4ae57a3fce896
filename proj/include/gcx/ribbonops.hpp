#pragma once
// Properadic structure on ribbon graphs: the two generators, composition by
// dissolving a vertex into a boundary, and the substitution that sends a
// directed hairy graph with (2,1)/(1,2) vertex profiles to a sum of ribbon
// graphs. Inputs sit on vertices, outputs on boundaries.

#include <functional>

#include "gcx/graph.hpp"
#include "gcx/ribbon.hpp"

namespace gcx {

// two leaves joined by one edge: inputs are the vertices, the single
// boundary is the output
inline RibbonGraph bracket_ribbon() {
  RibbonGraph g;
  g.sigma = {0, 1};
  g.edges = {{0, 1}};
  g.labels = {1};
  return g;
}

// one vertex with a tadpole: one input vertex, two output boundaries
inline RibbonGraph cobracket_ribbon() {
  RibbonGraph g;
  g.sigma = {1, 0};
  g.edges = {{0, 1}};
  g.labels = {1, 2};
  return g;
}

// every way to dissolve the vertex through xh into the boundary through bh:
// cut the k-stub rotation at one of its k stubs and distribute the stubs, in
// rotation order, over the c corners of the boundary. Half-edge ids and the
// edge order survive unchanged, so every placement carries sign +1.
inline vector<RibbonGraph> glue_vertex_into_boundary(const RibbonGraph& m, int bh, int xh) {
  auto faces = trace_boundaries(m);
  vector<int> F;
  for (auto& f : faces)
    if (std::find(f.begin(), f.end(), bh) != f.end()) F = f;
  if (F.empty() || bh >= m.he()) throw std::runtime_error("no boundary through that half-edge");
  vector<int> X{xh};
  for (int h = m.sigma[xh]; h != xh; h = m.sigma[h]) X.push_back(h);
  auto al = m.alpha();
  vector<int> corners;
  for (int h : F) corners.push_back(al[h]);
  for (int u : corners)
    for (int y : X)
      if (u == y || al[u] == y)
        throw std::runtime_error("boundary passes through the vertex");
  int k = (int)X.size(), c = (int)corners.size();
  vector<RibbonGraph> out;
  if (c == 0) return out;
  vector<int> sizes(c, 0);
  for (int s = 0; s < k; s++) {
    auto emit = [&]() {
      RibbonGraph r = m;
      int pos = 0;
      for (int t = 0; t < c; t++) {
        int at = corners[t];
        int tail = m.sigma[corners[t]];
        for (int i = 0; i < sizes[t]; i++) {
          int stub = X[(s + pos) % k];
          pos++;
          r.sigma[at] = stub;
          at = stub;
        }
        r.sigma[at] = tail;
      }
      out.push_back(r);
    };
    // compositions of k into c nonnegative parts
    std::function<void(int, int)> rec = [&](int t, int left) {
      if (t == c - 1) {
        sizes[t] = left;
        emit();
        return;
      }
      for (int n = 0; n <= left; n++) {
        sizes[t] = n;
        rec(t + 1, left - n);
      }
    };
    rec(0, k);
  }
  return out;
}

// glue boundary b of g1 to vertex x of g2; the composite edge order is g1's
// edges then g2's
inline vector<RibbonGraph> ribbon_compose(const RibbonGraph& g1, int b, const RibbonGraph& g2,
                                          int x) {
  if (!g1.labels.empty() || !g2.labels.empty())
    throw std::runtime_error("compose works on unlabeled maps");
  g1.check_valid();
  g2.check_valid();
  auto f1 = trace_boundaries(g1);
  if (b < 0 || b >= (int)f1.size()) throw std::runtime_error("boundary index out of range");
  if (f1[b].empty()) return {};
  auto vc2 = g2.vertex_cycles();
  if (x < 0 || x >= (int)vc2.size()) throw std::runtime_error("vertex index out of range");
  int off = g1.he();
  RibbonGraph u = g1;
  u.sigma.resize(off + g2.he());
  for (int h = 0; h < g2.he(); h++) u.sigma[off + h] = off + g2.sigma[h];
  for (auto& [p, q] : g2.edges) u.edges.push_back({off + p, off + q});
  return glue_vertex_into_boundary(u, f1[b][0], off + vc2[x][0]);
}

// substitution: vertices with in/out profile (2,1) become brackets, (1,2)
// become cobrackets, anything else kills the graph. Internal edges are glued
// in topological order, in-hairs leave their input vertex in place, and
// out-hair labels become boundary labels. Returns encoding -> coefficient.
inline std::map<string, long long> ribbon_substitution(const HairyGraph& g,
                                                       const vector<int>* order = nullptr) {
  g.check_valid();
  if (g.family != Family::HOGC && g.family != Family::HHOGC)
    throw std::runtime_error("substitution expects a directed hairy family");
  vector<int> ins(g.v, 0), outs(g.v, 0);
  vector<vector<int>> inc(g.v), outg(g.v);
  for (int i = 0; i < (int)g.edges.size(); i++) {
    outs[g.edges[i].t]++;
    ins[g.edges[i].h]++;
    outg[g.edges[i].t].push_back(i);
    inc[g.edges[i].h].push_back(i);
  }
  vector<vector<int>> outlabels(g.v);
  for (auto& h : g.hairs)
    if (h.in)
      ins[h.vx]++;
    else {
      outs[h.vx]++;
      outlabels[h.vx].push_back(h.label);
    }
  for (int x = 0; x < g.v; x++) {
    bool br = ins[x] == 2 && outs[x] == 1, cb = ins[x] == 1 && outs[x] == 2;
    if (!br && !cb) return {};
  }
  vector<int> ord;
  if (order) {
    ord = *order;
    vector<int> pos(g.v, -1);
    for (int i = 0; i < (int)ord.size(); i++) pos[ord[i]] = i;
    for (int x = 0; x < g.v; x++)
      if (pos[x] < 0) throw std::runtime_error("order must cover every vertex");
    for (auto& e : g.edges)
      if (pos[e.t] > pos[e.h]) throw std::runtime_error("order must be topological");
  } else {
    vector<int> deg(g.v, 0);
    for (auto& e : g.edges) deg[e.h]++;
    vector<char> done(g.v, 0);
    while ((int)ord.size() < g.v)
      for (int x = 0; x < g.v; x++)
        if (!done[x] && deg[x] == 0) {
          done[x] = 1;
          ord.push_back(x);
          for (int i : outg[x]) deg[g.edges[i].h]--;
          break;
        }
  }
  struct SubTerm {
    RibbonGraph m;
    std::map<int, int> eport;  // hairy edge index -> half-edge on its pending face
    std::map<int, int> hport;  // out-hair label -> half-edge on its pending face
  };
  vector<SubTerm> terms(1);
  for (int w : ord) {
    bool br = ins[w] == 2;
    vector<SubTerm> next;
    for (auto& t : terms) {
      int off = t.m.he();
      SubTerm base = t;
      base.m.sigma.push_back(br ? off : off + 1);
      base.m.sigma.push_back(br ? off + 1 : off);
      base.m.edges.push_back({off, off + 1});
      vector<int> slots = br ? vector<int>{off, off + 1} : vector<int>{off};
      vector<int> outf = br ? vector<int>{off} : vector<int>{off, off + 1};
      vector<SubTerm> wave{base};
      int si = 0;
      for (int eidx : inc[w]) {
        int slot = slots[si++];
        vector<SubTerm> nw;
        for (auto& cur : wave) {
          int fr = cur.eport.at(eidx);
          for (auto& glued : glue_vertex_into_boundary(cur.m, fr, slot)) {
            SubTerm nt = cur;
            nt.m = glued;
            nt.eport.erase(eidx);
            nw.push_back(std::move(nt));
          }
        }
        wave = std::move(nw);
      }
      for (auto& cur : wave) {
        int oi = 0;
        for (int eidx : outg[w]) cur.eport[eidx] = outf[oi++];
        for (int lb : outlabels[w]) cur.hport[lb] = outf[oi++];
        next.push_back(std::move(cur));
      }
    }
    terms = std::move(next);
  }
  // each vertex contributes exactly one generator edge; the composite edge
  // order follows the vertex index so the result cannot see the fold order
  vector<int> inv_ord(g.v);
  for (int p = 0; p < g.v; p++) inv_ord[ord[p]] = p;
  std::map<string, long long> coeff;
  for (auto& t : terms) {
    vector<std::pair<int, int>> re(g.v);
    for (int w = 0; w < g.v; w++) re[w] = t.m.edges[inv_ord[w]];
    t.m.edges = std::move(re);
    auto faces = trace_boundaries(t.m);
    if ((int)faces.size() != (int)t.hport.size())
      throw std::runtime_error("pending boundaries do not match out-hairs");
    for (auto& f : faces) {
      int lb = 0;
      for (auto& [l, rep] : t.hport)
        if (std::find(f.begin(), f.end(), rep) != f.end()) {
          if (lb) throw std::runtime_error("two out-hairs on one boundary");
          lb = l;
        }
      if (!lb) throw std::runtime_error("boundary without an out-hair");
      t.m.labels.push_back(lb);
    }
    auto c = canonicalize(t.m);
    if (!c.zero) coeff[c.rep.encode()] += c.sign;
  }
  for (auto it = coeff.begin(); it != coeff.end();)
    it = it->second == 0 ? coeff.erase(it) : std::next(it);
  return coeff;
}

}  // namespace gcx
