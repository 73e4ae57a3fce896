#pragma once
// Canonical labeling with signs. A basis element is a graph in canonical
// storage; canonicalizing an arbitrary labeling returns the canonical
// representative together with the character of the relating group element
// (vertex permutation x edge permutation x edge flips), or ZERO when the
// graph admits an automorphism of character -1.

#include "gcx/graph.hpp"

namespace gcx {

struct SignConvention {
  // Koszul rule: a record class is ordered (anticommutes) iff its degree is
  // odd. Plain edges and hairs have degree n-1, internal vertices -n. A
  // crossed edge stands for a two-edge zigzag with a 2-valent middle vertex,
  // so its parity is opposite to a plain edge's.
  bool plain_order = true;     // plain edge records anticommute (n even)
  bool crossed_order = false;  // crossed edge records anticommute (skeleton, n odd)
  bool hair_order = true;      // hair records anticommute (n even)
  bool vertex_sign = false;    // sgn of the vertex permutation (n odd)
  int flip_sign = 1;           // factor per stored-orientation flip of a flippable edge
  bool flip_plain = false;     // plain edges are unoriented and may flip (undirected families)
  bool flip_crossed = false;   // crossed edges may flip (skeleton)

  static SignConvention of(Family f, int n) {
    SignConvention c;
    bool even = n % 2 == 0;
    c.plain_order = even;
    c.crossed_order = even;
    c.hair_order = even;
    c.vertex_sign = !even;
    switch (f) {
      case Family::GC:
      case Family::HGC:
      case Family::HGC_MOD:
        c.flip_plain = true;
        c.flip_sign = even ? 1 : -1;
        break;
      case Family::SKELETON:
        // flipping a crossed edge swaps its zigzag halves: cost -(-1)^n
        c.crossed_order = !even;
        c.flip_crossed = true;
        c.flip_sign = even ? -1 : 1;
        break;
      default:
        break;  // oriented families: all directions intrinsic
    }
    return c;
  }

  bool flippable(EType ty) const { return ty == EType::CROSSED ? flip_crossed : flip_plain; }
  bool any_record_order() const { return plain_order || crossed_order || hair_order; }
};

inline SignConvention sign_convention(const HairyGraph& g) {
  return SignConvention::of(g.family, g.n);
}

// brings edges/hairs into canonical storage order in place; returns the character
inline int normalize_with_sign(HairyGraph& g, const SignConvention& conv) {
  int flips = 0;
  for (auto& e : g.edges)
    if (conv.flippable(e.ty) && e.t > e.h) {
      std::swap(e.t, e.h);
      flips++;
    }
  int sg = (conv.flip_sign == -1 && flips % 2) ? -1 : 1;
  auto ekey = [](const Edge& e) {
    return std::tuple(std::min(e.t, e.h), std::max(e.t, e.h), (int)e.ty, e.t > e.h ? 1 : 0);
  };
  auto hkey = [](const Hair& h) { return std::tuple(h.in ? 1 : 0, h.label, h.vx); };
  // each anticommuting record class carries its own order sign; classes that
  // commute contribute nothing, including their interleaving with the others
  vector<std::tuple<int, int, int, int>> ep, ex;
  for (auto& e : g.edges) (e.ty == EType::CROSSED ? ex : ep).push_back(ekey(e));
  vector<std::tuple<int, int, int>> hk;
  hk.reserve(g.hairs.size());
  for (auto& h : g.hairs) hk.push_back(hkey(h));
  if (conv.plain_order) sg *= sort_sign(ep);
  if (conv.crossed_order) sg *= sort_sign(ex);
  if (conv.hair_order) sg *= sort_sign(hk);
  std::stable_sort(g.edges.begin(), g.edges.end(),
                   [&](const Edge& a, const Edge& b) { return ekey(a) < ekey(b); });
  std::stable_sort(g.hairs.begin(), g.hairs.end(),
                   [&](const Hair& a, const Hair& b) { return hkey(a) < hkey(b); });
  return sg;
}

// relabels internal vertices by x -> p[x], normalizes storage, returns the character
inline std::pair<HairyGraph, int> relabel_with_sign(const HairyGraph& g, const vector<int>& p,
                                                    const SignConvention& conv) {
  HairyGraph r = g;
  auto m = [&](int x) { return x < g.v ? p[x] : x; };
  for (auto& e : r.edges) {
    e.t = m(e.t);
    e.h = m(e.h);
  }
  for (auto& h : r.hairs) h.vx = p[h.vx];
  if (!g.genus.empty())
    for (int x = 0; x < g.v; x++) r.genus[p[x]] = g.genus[x];
  int sg = conv.vertex_sign ? perm_sign(p) : 1;
  sg *= normalize_with_sign(r, conv);
  return {r, sg};
}

struct CanonicalClass {
  bool zero = false;
  HairyGraph rep;
  int sign = 0;  // input element = sign * representative
};

namespace detail {

// relative direction of an edge end: 0 unoriented, 1 outgoing, 2 incoming
inline int end_dir(const HairyGraph& g, const Edge& e, bool at_tail) {
  if (e.ty == EType::CROSSED || g.undirected_family()) return 0;
  return at_tail ? 1 : 2;
}

struct CanonSearch {
  const HairyGraph& g;
  const SignConvention& conv;
  int v;
  struct Inc {
    int other;  // internal neighbor, or >=v for externals, or -1 for tadpole
    int ty;
    int dir;
  };
  vector<vector<Inc>> inc;       // all incidences per internal vertex
  vector<vector<int>> ext_part;  // flattened constant items (externals + tadpoles)
  vector<int> col;
  vector<int> pos_class;               // color class serving canonical position k
  vector<vector<int>> class_members;   // input vertices per color class
  vector<int> canon;                   // input -> canonical position, -1 unassigned
  vector<int> slot;                    // canonical position -> input vertex
  vector<vector<int>> cur_rows, best_rows;
  vector<vector<int>> best_assignments;
  bool smaller = false;

  CanonSearch(const HairyGraph& graph, const SignConvention& c) : g(graph), conv(c), v(graph.v) {
    build_incidences();
    refine_colors();
  }

  void build_incidences() {
    inc.assign(v, {});
    ext_part.assign(v, {});
    for (auto& e : g.edges) {
      if (e.t < v && e.t == e.h) {
        inc[e.t].push_back({-1, (int)e.ty, 3});
        continue;
      }
      if (e.t < v) inc[e.t].push_back({e.h, (int)e.ty, end_dir(g, e, true)});
      if (e.h < v) inc[e.h].push_back({e.t, (int)e.ty, end_dir(g, e, false)});
    }
    for (auto& h : g.hairs)
      if (!h.in) inc[h.vx].push_back({v + h.label - 1, 0, g.undirected_family() ? 0 : 1});
    for (int x = 0; x < v; x++) {
      vector<std::array<int, 3>> items;
      for (auto& i : inc[x])
        if (i.other < 0)
          items.push_back({v + g.s, i.ty, i.dir});  // tadpole sentinel
        else if (i.other >= v)
          items.push_back({i.other, i.ty, i.dir});
      std::sort(items.begin(), items.end());
      auto& f = ext_part[x];
      f.push_back(g.genus.empty() ? 0 : g.genus[x]);
      f.push_back(g.in_hair_count(x));
      for (auto& it : items) {
        f.push_back(it[0]);
        f.push_back(it[1]);
        f.push_back(it[2]);
      }
    }
  }

  void refine_colors() {
    // initial colors from the constant per-vertex data, refined by neighbor colors
    col.assign(v, 0);
    {
      std::map<vector<int>, vector<int>> byk;
      for (int x = 0; x < v; x++) byk[ext_part[x]].push_back(x);
      int c = 0;
      for (auto& [k, xs] : byk) {
        for (int x : xs) col[x] = c;
        c++;
      }
    }
    int classes = 0;
    while (true) {
      std::map<std::pair<int, vector<std::array<int, 3>>>, vector<int>> byk;
      for (int x = 0; x < v; x++) {
        vector<std::array<int, 3>> key;
        for (auto& i : inc[x])
          if (i.other >= 0 && i.other < v) key.push_back({i.ty, i.dir, col[i.other]});
        std::sort(key.begin(), key.end());
        byk[{col[x], key}].push_back(x);
      }
      int c = 0;
      for (auto& [k, xs] : byk) {
        for (int x : xs) col[x] = c;
        c++;
      }
      if (c == classes) break;
      classes = c;
    }
    class_members.assign(classes, {});
    for (int x = 0; x < v; x++) class_members[col[x]].push_back(x);
    pos_class.clear();
    for (int c = 0; c < classes; c++)
      for (size_t i = 0; i < class_members[c].size(); i++) pos_class.push_back(c);
  }

  vector<int> row_of(int x) const {
    vector<int> r = ext_part[x];
    vector<std::array<int, 3>> items;
    for (auto& i : inc[x])
      if (i.other >= 0 && i.other < v && canon[i.other] >= 0)
        items.push_back({canon[i.other], i.ty, i.dir});
    std::sort(items.begin(), items.end());
    r.push_back((int)items.size());
    for (auto& it : items) {
      r.push_back(it[0]);
      r.push_back(it[1]);
      r.push_back(it[2]);
    }
    return r;
  }

  bool zero_found = false;
  int first_sign = 0;

  void leaf() {
    vector<int> p = canon;  // input -> canonical index
    if (best_rows.empty() || smaller) {
      if (!best_rows.empty() && cur_rows >= best_rows) {
        if (cur_rows == best_rows) record_sign(p);
        return;
      }
      best_rows = cur_rows;
      best_assignments.clear();
      best_assignments.push_back(p);
      first_sign = 0;
      record_sign(p);
    } else
      record_sign(p);
  }

  void record_sign(const vector<int>& p) {
    int sg = relabel_with_sign(g, p, conv).second;
    if (first_sign == 0)
      first_sign = sg;
    else if (sg != first_sign)
      zero_found = true;
  }

  void dfs(int k, bool tight) {
    if (zero_found) return;
    if (k == v) {
      leaf();
      return;
    }
    auto& cands = class_members[pos_class[k]];
    vector<std::pair<vector<int>, int>> rows;
    for (int x : cands)
      if (canon[x] < 0) rows.push_back({row_of(x), x});
    const vector<int>* mn = &rows[0].first;
    for (auto& r : rows)
      if (r.first < *mn) mn = &r.first;
    bool was_smaller = smaller;
    for (auto& r : rows) {
      if (r.first != *mn) continue;
      bool t2 = tight;
      smaller = was_smaller;
      if (tight && !best_rows.empty()) {
        if (r.first > best_rows[k]) continue;
        if (r.first < best_rows[k]) {
          smaller = true;
          t2 = false;
        }
      }
      int x = r.second;
      canon[x] = k;
      cur_rows.push_back(r.first);
      dfs(k + 1, t2);
      cur_rows.pop_back();
      canon[x] = -1;
      if (zero_found) return;
    }
    smaller = was_smaller;
  }

  CanonicalClass run() {
    canon.assign(v, -1);
    cur_rows.clear();
    best_rows.clear();
    best_assignments.clear();
    dfs(0, true);
    CanonicalClass out;
    if (zero_found) {
      out.zero = true;
      return out;
    }
    auto [rep, sg] = relabel_with_sign(g, best_assignments[0], conv);
    out.rep = rep;
    out.sign = sg;
    return out;
  }
};

}  // namespace detail

inline CanonicalClass canonicalize(const HairyGraph& g, const SignConvention& conv) {
  g.check_valid();
  CanonicalClass out;
  // tadpole flips and swaps of identical edges are automorphisms that never
  // show up as vertex relabelings; handle them up front
  if (conv.flip_sign == -1)
    for (auto& e : g.edges)
      if (e.t == e.h && conv.flippable(e.ty)) {
        out.zero = true;
        return out;
      }
  if (conv.any_record_order()) {
    HairyGraph t = g;
    normalize_with_sign(t, conv);
    auto has_dup = [](auto recs) {
      std::sort(recs.begin(), recs.end());
      for (size_t i = 0; i + 1 < recs.size(); i++)
        if (recs[i] == recs[i + 1]) return true;
      return false;
    };
    vector<Edge> ep, ex;
    for (auto& e : t.edges) (e.ty == EType::CROSSED ? ex : ep).push_back(e);
    if ((conv.plain_order && has_dup(ep)) || (conv.crossed_order && has_dup(ex)) ||
        (conv.hair_order && has_dup(t.hairs))) {
      out.zero = true;
      return out;
    }
  }
  if (g.v == 0) {
    HairyGraph r = g;
    int sg = normalize_with_sign(r, conv);
    out.rep = r;
    out.sign = sg;
    return out;
  }
  detail::CanonSearch search(g, conv);
  return search.run();
}

inline CanonicalClass canonicalize(const HairyGraph& g) {
  return canonicalize(g, sign_convention(g));
}

}  // namespace gcx
