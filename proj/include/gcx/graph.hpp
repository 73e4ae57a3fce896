#pragma once
// Data model for all vertex-graph families. Internal vertices are 0..v-1,
// labeled external vertices are v..v+s-1 (label = index-v+1). Hair edges to
// labeled externals live in `hairs`, except in the SKELETON family where every
// edge (internal or hair) lives in `edges` so that it can carry a type.
// Unlabeled input hairs (HHOGC) are hairs with label 0 and in=true.
// The stored order of edges and hairs is the orientation datum.

#include <map>
#include <sstream>

#include "gcx/common.hpp"

namespace gcx {

enum class Family : uint8_t { GC, HGC, HGC_MOD, OGC, HOGC, HHOGC, SKELETON };

inline const char* family_tag(Family f) {
  switch (f) {
    case Family::GC: return "gc";
    case Family::HGC: return "hgc";
    case Family::HGC_MOD: return "hgc_mod";
    case Family::OGC: return "ogc";
    case Family::HOGC: return "hogc";
    case Family::HHOGC: return "hhogc";
    case Family::SKELETON: return "skeleton";
  }
  throw std::runtime_error("unknown family");
}

inline Family parse_family(const string& t) {
  for (Family f : {Family::GC, Family::HGC, Family::HGC_MOD, Family::OGC, Family::HOGC,
                   Family::HHOGC, Family::SKELETON})
    if (t == family_tag(f)) return f;
  throw std::runtime_error("unknown family tag: " + t);
}

enum class EType : uint8_t { PLAIN, CROSSED };

struct Edge {
  int t = 0, h = 0;  // undirected/crossed edges are stored t<=h; plain directed: tail->head
  EType ty = EType::PLAIN;
  auto operator<=>(const Edge&) const = default;
};

struct Hair {
  int vx = 0;
  int label = 0;  // 0 = unlabeled (input hairs)
  bool in = false;
  auto operator<=>(const Hair&) const = default;
};

struct HairyGraph {
  Family family = Family::GC;
  int n = 0;  // convention parameter; only its parity enters signs
  int v = 0;
  int s = 0;
  vector<Edge> edges;
  vector<Hair> hairs;
  vector<int> genus;  // per-vertex decorations, HGC_MOD only

  bool operator==(const HairyGraph&) const = default;
  bool operator<(const HairyGraph& o) const { return encode() < o.encode(); }

  bool directed_family() const {
    return family == Family::OGC || family == Family::HOGC || family == Family::HHOGC ||
           family == Family::SKELETON;
  }
  bool undirected_family() const { return !directed_family(); }

  int edge_count() const { return (int)(edges.size() + hairs.size()); }
  int crossed_count() const {
    int x = 0;
    for (auto& e : edges) x += e.ty == EType::CROSSED;
    return x;
  }
  int in_hair_total() const {
    int k = 0;
    for (auto& h : hairs) k += h.in;
    return k;
  }
  int in_hair_count(int x) const {
    int k = 0;
    for (auto& h : hairs) k += h.in && h.vx == x;
    return k;
  }

  // first Betti number of the whole graph, external vertices included
  int loop_order() const {
    int verts = v + s + in_hair_total();
    return edge_count() - verts + 1;
  }

  int degree() const {
    int e = edge_count();
    switch (family) {
      case Family::GC:
      case Family::OGC: return (n - 1) * e - n * v + n;
      case Family::SKELETON: return (n - 1) * e - n * v - crossed_count();
      default: return (n - 1) * e - n * v;  // HGC, HGC_MOD, HOGC, HHOGC
    }
  }

  // valence counts every incident edge end (tadpoles twice, hairs once)
  int valence(int x) const {
    int k = 0;
    for (auto& e : edges) k += (e.t == x) + (e.h == x);
    for (auto& h : hairs) k += h.vx == x;
    return k;
  }
  // in/out degree along plain directed edges; hairs count for directed families
  int outdeg(int x) const {
    int k = 0;
    for (auto& e : edges) k += e.ty == EType::PLAIN && e.t == x;
    for (auto& h : hairs) k += !h.in && h.vx == x;
    return k;
  }
  int indeg(int x) const {
    int k = 0;
    for (auto& e : edges) k += e.ty == EType::PLAIN && e.h == x;
    for (auto& h : hairs) k += h.in && h.vx == x;
    return k;
  }

  string encode() const {
    std::ostringstream o;
    o << "family=" << family_tag(family) << ";n=" << n << ";v=" << v << ";E=[";
    for (size_t i = 0; i < edges.size(); i++) {
      if (i) o << ",";
      o << "(" << edges[i].t << "," << edges[i].h << ","
        << (edges[i].ty == EType::CROSSED ? "X" : "P") << ")";
    }
    o << "];H=[";
    for (size_t i = 0; i < hairs.size(); i++) {
      if (i) o << ",";
      o << "(" << hairs[i].vx << ",";
      if (hairs[i].label)
        o << hairs[i].label;
      else
        o << "_";
      o << "," << (hairs[i].in ? "I" : "O") << ")";
    }
    o << "]";
    if (family == Family::HGC_MOD) {
      o << ";G=[";
      for (size_t i = 0; i < genus.size(); i++) {
        if (i) o << ",";
        o << genus[i];
      }
      o << "]";
    }
    return o.str();
  }

  static HairyGraph parse(const string& enc);

  void check_valid() const;
};

namespace detail {

struct Scanner {
  const string& s;
  size_t p = 0;
  explicit Scanner(const string& str) : s(str) {}
  [[noreturn]] void fail(const string& why) const {
    throw std::runtime_error("bad graph encoding (" + why + "): " + s);
  }
  void expect(const string& lit) {
    if (s.compare(p, lit.size(), lit) != 0) fail("expected '" + lit + "'");
    p += lit.size();
  }
  bool peek(char c) const { return p < s.size() && s[p] == c; }
  bool take(char c) {
    if (!peek(c)) return false;
    p++;
    return true;
  }
  int integer() {
    size_t q = p;
    if (q < s.size() && (s[q] == '-' || s[q] == '+')) q++;
    size_t d = q;
    while (d < s.size() && isdigit((unsigned char)s[d])) d++;
    if (d == q) fail("expected integer");
    int val = std::stoi(s.substr(p, d - p));
    p = d;
    return val;
  }
  string ident() {
    size_t d = p;
    while (d < s.size() && (isalnum((unsigned char)s[d]) || s[d] == '_')) d++;
    if (d == p) fail("expected identifier");
    string r = s.substr(p, d - p);
    p = d;
    return r;
  }
};

}  // namespace detail

inline HairyGraph HairyGraph::parse(const string& enc) {
  detail::Scanner sc(enc);
  HairyGraph g;
  sc.expect("family=");
  g.family = parse_family(sc.ident());
  sc.expect(";n=");
  g.n = sc.integer();
  sc.expect(";v=");
  g.v = sc.integer();
  sc.expect(";E=[");
  while (!sc.take(']')) {
    if (!g.edges.empty()) sc.expect(",");
    sc.expect("(");
    Edge e;
    e.t = sc.integer();
    sc.expect(",");
    e.h = sc.integer();
    sc.expect(",");
    if (sc.take('X'))
      e.ty = EType::CROSSED;
    else if (sc.take('P'))
      e.ty = EType::PLAIN;
    else
      sc.fail("edge type must be P or X");
    sc.expect(")");
    g.edges.push_back(e);
  }
  sc.expect(";H=[");
  while (!sc.take(']')) {
    if (!g.hairs.empty()) sc.expect(",");
    sc.expect("(");
    Hair h;
    h.vx = sc.integer();
    sc.expect(",");
    if (sc.take('_'))
      h.label = 0;
    else
      h.label = sc.integer();
    sc.expect(",");
    if (sc.take('I'))
      h.in = true;
    else if (sc.take('O'))
      h.in = false;
    else
      sc.fail("hair direction must be O or I");
    sc.expect(")");
    g.hairs.push_back(h);
  }
  if (g.family == Family::HGC_MOD) {
    sc.expect(";G=[");
    bool first = true;
    while (!sc.take(']')) {
      if (!first) sc.expect(",");
      first = false;
      g.genus.push_back(sc.integer());
    }
  }
  if (sc.p != enc.size()) sc.fail("trailing characters");
  // externals are referenced by edge endpoints >= v and by hair labels
  int smax = 0;
  for (auto& e : g.edges) smax = std::max({smax, e.t - g.v + 1, e.h - g.v + 1});
  for (auto& h : g.hairs) smax = std::max(smax, h.label);
  g.s = smax;
  return g;
}

inline void HairyGraph::check_valid() const {
  auto bad = [&](const string& rule) {
    throw std::runtime_error("invalid graph (" + rule + "): " + encode());
  };
  if (v < 0 || s < 0) bad("negative vertex count");
  if (v == 0 && edges.empty()) bad("empty graph");
  if ((family == Family::GC || family == Family::OGC) && s != 0)
    bad("family has no external vertices");
  const bool skel = family == Family::SKELETON;

  for (auto& e : edges) {
    if (e.t < 0 || e.h < 0 || e.t >= v + s || e.h >= v + s) bad("edge endpoint out of range");
    if (e.ty == EType::CROSSED && !skel) bad("crossed edges are skeleton-only");
    // only the SKELETON family and the vertexless single-edge graphs keep
    // external endpoints in the edge list
    if (!skel && v > 0 && (e.t >= v || e.h >= v)) bad("hair edges belong in the hair list");
    if (!skel && directed_family() && (e.t >= v || e.h >= v))
      bad("hair edges belong in the hair list");
  }
  for (auto& h : hairs) {
    if (h.vx < 0 || h.vx >= v) bad("hair vertex out of range");
    if (skel) bad("skeleton stores hair edges in the edge list");
    if (h.in && h.label != 0) bad("input hairs are unlabeled");
    if (!h.in && h.label <= 0) bad("output hairs need a label");
    if (h.in && family != Family::HHOGC) bad("input hairs are HHOGC-only");
    if (family == Family::GC || family == Family::OGC) bad("family has no hairs");
  }
  // each labeled external vertex is used exactly once
  {
    vector<int> used(s, 0);
    for (auto& e : edges) {
      if (e.t >= v) used[e.t - v]++;
      if (e.h >= v) used[e.h - v]++;
    }
    for (auto& h : hairs)
      if (!h.in) used[h.label - 1]++;
    for (int l = 0; l < s; l++)
      if (used[l] != 1) bad("external labels must be used exactly once");
  }
  if (family == Family::HGC_MOD) {
    if ((int)genus.size() != v) bad("genus decorations must cover all internal vertices");
    for (int gx : genus)
      if (gx < 0) bad("negative genus decoration");
  } else if (!genus.empty())
    bad("genus decorations are HGC_MOD-only");
  if (family == Family::HHOGC) {
    if (n % 2 == 0) bad("input-hair family is implemented for odd n only");
    if (in_hair_total() < 1) bad("needs at least one input hair");
  }

  // connectivity across internal and labeled external vertices
  {
    int N = v + s;
    vector<vector<int>> adj(N);
    for (auto& e : edges)
      if (e.t != e.h) {
        adj[e.t].push_back(e.h);
        adj[e.h].push_back(e.t);
      }
    for (auto& h : hairs)
      if (!h.in) {
        adj[h.vx].push_back(v + h.label - 1);
        adj[v + h.label - 1].push_back(h.vx);
      }
    if (N > 0) {
      vector<char> seen(N, 0);
      vector<int> stack{0};
      seen[0] = 1;
      int cnt = 1;
      while (!stack.empty()) {
        int x = stack.back();
        stack.pop_back();
        for (int y : adj[x])
          if (!seen[y]) {
            seen[y] = 1;
            cnt++;
            stack.push_back(y);
          }
      }
      if (cnt != N) bad("graph must be connected");
    }
  }

  // family valence rules (valence counts hairs; tadpoles count twice)
  for (int x = 0; x < v; x++) {
    int val = valence(x);
    switch (family) {
      case Family::GC:
      case Family::HGC:
        if (val < 3) bad("internal vertices must be at least 3-valent");
        break;
      case Family::HGC_MOD:
        if (2 * genus[x] + val < 3) bad("needs 2*g_x + valence >= 3");
        break;
      case Family::OGC:
      case Family::HOGC:
      case Family::HHOGC: {
        if (val < 2) bad("internal vertices must be at least 2-valent");
        int in = indeg(x), out = outdeg(x);
        if (val == 2 && in == 1 && out == 1) bad("passing vertices are forbidden");
        if (family != Family::OGC && out == 0) bad("internal target vertices are forbidden");
        if (family == Family::HHOGC && in == 0) bad("source vertices are forbidden");
        break;
      }
      case Family::SKELETON: {
        if (val < 3) bad("internal vertices must be at least 3-valent");
        bool outplain = false;
        for (auto& e : edges) outplain |= e.ty == EType::PLAIN && e.t == x;
        if (!outplain) bad("every internal vertex needs an outgoing plain edge");
        break;
      }
    }
  }
  if (skel)
    for (auto& e : edges)
      if (e.ty == EType::PLAIN && e.t >= v) bad("external vertices must be type-targets");

  // no directed cycles along plain edges (oriented families; skeleton type directions)
  if (directed_family()) {
    vector<int> indeg_int(v, 0);
    vector<vector<int>> out(v);
    for (auto& e : edges)
      if (e.ty == EType::PLAIN && e.t < v && e.h < v) {
        if (e.t == e.h) bad("directed cycles are forbidden");
        out[e.t].push_back(e.h);
        indeg_int[e.h]++;
      }
    vector<int> q;
    for (int x = 0; x < v; x++)
      if (indeg_int[x] == 0) q.push_back(x);
    int done = 0;
    while (!q.empty()) {
      int x = q.back();
      q.pop_back();
      done++;
      for (int y : out[x])
        if (--indeg_int[y] == 0) q.push_back(y);
    }
    if (done != v) bad("directed cycles are forbidden");
  }
}

// true iff there is no directed cycle along plain edges
inline bool is_directed_acyclic(const HairyGraph& g) {
  vector<int> indeg(g.v, 0);
  vector<vector<int>> out(g.v);
  for (auto& e : g.edges)
    if (e.ty == EType::PLAIN && e.t < g.v && e.h < g.v) {
      if (e.t == e.h) return false;
      out[e.t].push_back(e.h);
      indeg[e.h]++;
    }
  vector<int> q;
  for (int x = 0; x < g.v; x++)
    if (indeg[x] == 0) q.push_back(x);
  int done = 0;
  while (!q.empty()) {
    int x = q.back();
    q.pop_back();
    done++;
    for (int y : out[x])
      if (--indeg[y] == 0) q.push_back(y);
  }
  return done == g.v;
}

}  // namespace gcx
