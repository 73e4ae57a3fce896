#pragma once
// Ribbon graphs as combinatorial maps. sigma rotates the half-edges at each
// vertex, the ordered pair list alpha forms the edges, and that list order is
// the orientation datum: relabelings act on elements by the sign of the edge
// permutation only. Boundaries are the cycles of sigma composed after alpha.
// The vertexless "point" map (he=0) is the legal result of contracting the
// two-vertex one-edge graph; by convention it has V=1, B=1, genus 0.

#include <algorithm>
#include <map>
#include <optional>
#include <sstream>

#include "gcx/common.hpp"

namespace gcx {

struct RibbonGraph {
  vector<int> sigma;                // permutation of 0..he-1
  vector<std::pair<int, int>> edges;  // ordered pairing; list position = edge order
  vector<int> labels;               // boundary labels by boundary (min half-edge order); empty = unlabeled

  bool operator==(const RibbonGraph&) const = default;

  int he() const { return (int)sigma.size(); }
  int edge_count() const { return (int)edges.size(); }

  vector<int> alpha() const {
    vector<int> a(he(), -1);
    for (auto& [x, y] : edges) {
      a[x] = y;
      a[y] = x;
    }
    return a;
  }

  // cycles begin at their minimum and are listed by minimum
  static vector<vector<int>> cycles_of(const vector<int>& p) {
    vector<vector<int>> cs;
    vector<char> seen(p.size(), 0);
    for (int s = 0; s < (int)p.size(); s++) {
      if (seen[s]) continue;
      vector<int> c;
      int x = s;
      while (!seen[x]) {
        seen[x] = 1;
        c.push_back(x);
        x = p[x];
      }
      cs.push_back(c);
    }
    return cs;
  }

  vector<vector<int>> vertex_cycles() const { return cycles_of(sigma); }
  int vertex_count() const { return he() == 0 ? 1 : (int)vertex_cycles().size(); }

  string encode() const {
    std::ostringstream o;
    o << "ribbon;he=" << he() << ";sigma=";
    for (auto& c : vertex_cycles()) {
      o << "(";
      for (size_t i = 0; i < c.size(); i++) o << (i ? "," : "") << c[i];
      o << ")";
    }
    o << ";alpha=";
    for (auto& [x, y] : edges) o << "(" << x << "," << y << ")";
    o << ";labels=[";
    for (size_t i = 0; i < labels.size(); i++) o << (i ? "," : "") << labels[i];
    o << "]";
    return o.str();
  }

  static RibbonGraph parse(const string& enc);
  void check_valid() const;
};

inline vector<vector<int>> trace_boundaries(const RibbonGraph& g) {
  if (g.he() == 0) return {vector<int>{}};  // the point has one empty boundary
  auto al = g.alpha();
  vector<int> f(g.he());
  for (int h = 0; h < g.he(); h++) f[h] = g.sigma[al[h]];
  return RibbonGraph::cycles_of(f);
}

inline int boundary_count(const RibbonGraph& g) { return (int)trace_boundaries(g).size(); }

inline void RibbonGraph::check_valid() const {
  auto bad = [&](const string& rule) {
    throw std::runtime_error("bad ribbon (" + rule + "): " + encode());
  };
  int N = he();
  {
    vector<char> seen(N, 0);
    for (int x : sigma) {
      if (x < 0 || x >= N || seen[x]) bad("sigma is not a permutation");
      seen[x] = 1;
    }
  }
  {
    vector<char> seen(N, 0);
    for (auto& [x, y] : edges) {
      if (x < 0 || y < 0 || x >= N || y >= N) bad("alpha pair out of range");
      if (x == y) bad("alpha must be fixed-point-free");
      if (seen[x] || seen[y]) bad("alpha pairs overlap");
      seen[x] = seen[y] = 1;
    }
    for (char c : seen)
      if (!c) bad("alpha must cover every half-edge");
  }
  if (N > 0) {
    auto al = alpha();
    vector<char> seen(N, 0);
    vector<int> st{0};
    seen[0] = 1;
    int cnt = 1;
    while (!st.empty()) {
      int h = st.back();
      st.pop_back();
      for (int nb : {sigma[h], al[h]})
        if (!seen[nb]) {
          seen[nb] = 1;
          cnt++;
          st.push_back(nb);
        }
    }
    if (cnt != N) bad("graph must be connected");
  }
  if (!labels.empty()) {
    int B = boundary_count(*this);
    if ((int)labels.size() != B) bad("one label per boundary");
    auto l = labels;
    std::sort(l.begin(), l.end());
    for (int i = 0; i < B; i++)
      if (l[i] != i + 1) bad("labels must be a bijection onto 1..B");
  }
}

inline RibbonGraph RibbonGraph::parse(const string& enc) {
  size_t p = 0;
  auto fail = [&](const string& why) {
    throw std::runtime_error("bad ribbon encoding (" + why + "): " + enc);
  };
  auto lit = [&](const string& l) {
    if (enc.compare(p, l.size(), l) != 0) fail("expected '" + l + "'");
    p += l.size();
  };
  auto num = [&]() {
    size_t q = p;
    while (q < enc.size() && (isdigit(enc[q]) || enc[q] == '-')) q++;
    if (q == p) fail("expected integer");
    int x = std::stoi(enc.substr(p, q - p));
    p = q;
    return x;
  };
  lit("ribbon;he=");
  int N = num();
  if (N < 0) fail("negative half-edge count");
  RibbonGraph g;
  g.sigma.assign(N, -1);
  lit(";sigma=");
  while (p < enc.size() && enc[p] == '(') {
    p++;
    vector<int> c;
    while (true) {
      c.push_back(num());
      if (p < enc.size() && enc[p] == ',') {
        p++;
        continue;
      }
      break;
    }
    lit(")");
    for (size_t i = 0; i < c.size(); i++) {
      int h = c[i];
      if (h < 0 || h >= N) fail("half-edge out of range");
      if (g.sigma[h] != -1) fail("half-edge repeated in sigma");
      g.sigma[h] = c[(i + 1) % c.size()];
    }
  }
  for (int h = 0; h < N; h++)
    if (g.sigma[h] == -1) fail("sigma misses a half-edge");
  lit(";alpha=");
  while (p < enc.size() && enc[p] == '(') {
    p++;
    int x = num();
    lit(",");
    int y = num();
    lit(")");
    g.edges.push_back({x, y});
  }
  lit(";labels=[");
  if (p < enc.size() && enc[p] != ']')
    while (true) {
      g.labels.push_back(num());
      if (p < enc.size() && enc[p] == ',') {
        p++;
        continue;
      }
      break;
    }
  lit("]");
  if (p != enc.size()) fail("trailing characters");
  return g;
}

inline int ribbon_genus(const RibbonGraph& g) {
  int V = g.vertex_count(), E = g.edge_count(), B = boundary_count(g);
  int chi = V - E + B;
  if (chi % 2 != 0 || chi > 2) throw std::runtime_error("corrupt map: bad Euler characteristic");
  return (2 - chi) / 2;
}

struct RibbonClass {
  bool zero = false;
  RibbonGraph rep;
  int sign = 0;
};

// minimal traversal encoding over all root half-edges; equal-encoding roots
// are automorphisms and their edge-permutation signs detect zero classes
inline RibbonClass canonicalize(const RibbonGraph& g) {
  g.check_valid();
  RibbonClass out;
  if (g.he() == 0) {
    out.rep = g;
    out.sign = 1;
    return out;
  }
  int N = g.he();
  auto al = g.alpha();
  auto faces = trace_boundaries(g);
  vector<int> best, best_nid;
  int first_sign = 0;
  bool zero = false;
  for (int root = 0; root < N; root++) {
    vector<int> nid(N, -1), byn;
    nid[root] = 0;
    byn.push_back(root);
    for (int t = 0; t < (int)byn.size(); t++) {
      int h = byn[t];
      for (int nb : {g.sigma[h], al[h]})
        if (nid[nb] < 0) {
          nid[nb] = (int)byn.size();
          byn.push_back(nb);
        }
    }
    vector<int> enc;
    enc.reserve(2 * N + g.labels.size());
    for (int t = 0; t < N; t++) {
      enc.push_back(nid[g.sigma[byn[t]]]);
      enc.push_back(nid[al[byn[t]]]);
    }
    if (!g.labels.empty()) {
      vector<std::pair<int, int>> fl;
      for (size_t i = 0; i < faces.size(); i++) {
        int mn = N;
        for (int h : faces[i]) mn = std::min(mn, nid[h]);
        fl.push_back({mn, g.labels[i]});
      }
      std::sort(fl.begin(), fl.end());
      for (auto& [mn, lb] : fl) enc.push_back(lb);
    }
    if (!best.empty() && enc > best) continue;
    // sign of the permutation sorting the edge list into the new order
    vector<std::pair<int, int>> keys;
    for (int k = 0; k < g.edge_count(); k++)
      keys.push_back({std::min(nid[g.edges[k].first], nid[g.edges[k].second]), k});
    std::sort(keys.begin(), keys.end());
    vector<int> perm;
    for (auto& [mn, k] : keys) perm.push_back(k);
    int sg = perm_sign(perm);
    if (best.empty() || enc < best) {
      best = enc;
      best_nid = nid;
      first_sign = sg;
    } else if (sg != first_sign)
      zero = true;
  }
  // the representative is still filled for zero classes: enumeration dedupes
  // on it even though the class itself vanishes
  RibbonGraph r;
  r.sigma.assign(N, -1);
  for (int h = 0; h < N; h++) r.sigma[best_nid[h]] = best_nid[g.sigma[h]];
  vector<std::pair<int, int>> es;
  for (auto& [x, y] : g.edges) {
    int a = best_nid[x], b = best_nid[y];
    es.push_back({std::min(a, b), std::max(a, b)});
  }
  std::sort(es.begin(), es.end());
  r.edges = es;
  if (!g.labels.empty()) {
    vector<std::pair<int, int>> fl;
    for (size_t i = 0; i < faces.size(); i++) {
      int mn = N;
      for (int h : faces[i]) mn = std::min(mn, best_nid[h]);
      fl.push_back({mn, g.labels[i]});
    }
    std::sort(fl.begin(), fl.end());
    for (auto& [mn, lb] : fl) r.labels.push_back(lb);
  }
  out.rep = r;
  out.zero = zero;
  out.sign = zero ? 0 : first_sign;
  return out;
}

// merges the two rotations at the contracted corner; boundary labels ride
// along unchanged since contraction preserves the boundaries
inline RibbonGraph contract_ribbon_edge(const RibbonGraph& g, int k) {
  g.check_valid();
  if (k < 0 || k >= g.edge_count())
    throw std::runtime_error("edge index out of range: " + std::to_string(k));
  auto [h1, h2] = g.edges[k];
  // tadpole test: walk the sigma cycle of h1
  for (int x = g.sigma[h1]; ; x = g.sigma[x]) {
    if (x == h2) throw std::runtime_error("tadpole edges are never contracted");
    if (x == h1) break;
  }
  int N = g.he();
  vector<int> s = g.sigma;
  auto prev = [&](int h) {
    int x = h;
    while (s[x] != h) x = s[x];
    return x;
  };
  int p1 = prev(h1), p2 = prev(h2);
  if (p1 == h1 && p2 == h2) {
    // both endpoints are leaves: the point remains
    RibbonGraph r;
    r.labels = g.labels.empty() ? vector<int>{} : vector<int>{1};
    return r;
  }
  if (p1 == h1)
    s[p2] = s[h2];
  else if (p2 == h2)
    s[p1] = s[h1];
  else {
    int t1 = s[h1], t2 = s[h2];
    s[p1] = t2;
    s[p2] = t1;
  }
  vector<int> m(N, -1);
  int next = 0;
  for (int h = 0; h < N; h++)
    if (h != h1 && h != h2) m[h] = next++;
  RibbonGraph r;
  r.sigma.assign(next, -1);
  for (int h = 0; h < N; h++)
    if (m[h] >= 0) r.sigma[m[h]] = m[s[h]];
  for (int i = 0; i < g.edge_count(); i++) {
    if (i == k) continue;
    auto [x, y] = g.edges[i];
    r.edges.push_back({m[x], m[y]});
  }
  if (!g.labels.empty()) {
    auto of = trace_boundaries(g);
    vector<int> lab_of(N, 0);
    for (size_t i = 0; i < of.size(); i++)
      for (int h : of[i]) lab_of[h] = g.labels[i];
    for (auto& nf : trace_boundaries(r)) {
      int h = -1;
      for (int z = 0; z < N; z++)
        if (m[z] == nf[0]) h = z;
      r.labels.push_back(lab_of[h]);
    }
  }
  return r;
}

// splices edge k out of the rotations; vertices keep their remaining
// half-edges in cyclic order. The caller decides whether the result is still
// admissible (connected, no emptied vertex).
inline RibbonGraph remove_ribbon_edge(const RibbonGraph& g, int k) {
  if (k < 0 || k >= g.edge_count())
    throw std::runtime_error("edge index out of range: " + std::to_string(k));
  auto [a, b] = g.edges[k];
  int N = g.he();
  auto nxt = [&](int p) {
    int q = g.sigma[p];
    while (q == a || q == b) q = g.sigma[q];
    return q;
  };
  vector<int> m(N, -1);
  int next = 0;
  for (int h = 0; h < N; h++)
    if (h != a && h != b) m[h] = next++;
  RibbonGraph r;
  r.sigma.assign(next, -1);
  for (int h = 0; h < N; h++)
    if (m[h] >= 0) r.sigma[m[h]] = m[nxt(h)];
  for (int i = 0; i < g.edge_count(); i++) {
    if (i == k) continue;
    auto [x, y] = g.edges[i];
    r.edges.push_back({m[x], m[y]});
  }
  return r;
}

// adds one chord across a boundary: corner t of a traced boundary cycle sits
// between alpha(face[t]) and its sigma successor. The two new half-edges are
// he and he+1 and the new edge is appended last. i == j nests the chord
// inside a single gap.
inline RibbonGraph add_chord(const RibbonGraph& g, const vector<int>& face, int i, int j) {
  if (!g.labels.empty()) throw std::runtime_error("chords are for unlabeled boundaries");
  int N = g.he();
  RibbonGraph r = g;
  r.sigma.resize(N + 2);
  int a = N, b = N + 1;
  auto al = g.alpha();
  if (i == j) {
    int u = al[face[i]];
    r.sigma[b] = r.sigma[u];
    r.sigma[a] = b;
    r.sigma[u] = a;
  } else {
    int u = al[face[i]], w = al[face[j]];
    r.sigma[a] = r.sigma[u];
    r.sigma[u] = a;
    r.sigma[b] = r.sigma[w];
    r.sigma[w] = b;
  }
  r.edges.push_back({a, b});
  return r;
}

}  // namespace gcx
