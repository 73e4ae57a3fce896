#pragma once
// Chain maps between the families, one column at a time, and their
// slice-against-slice matrices. Sign rule used by the orientation maps: the
// map is defined on a model numbering where the record leaving vertex x sits
// in slot x of the record word and runs toward its root; an arbitrary input
// is brought to a model first, and the character of that move in the source
// convention multiplies the canonicalized image. Coefficients are exact
// rationals; the integer maps simply have integer entries.

#include "gcx/differentials.hpp"

namespace gcx {

struct MapTerm {
  string enc;
  rat c;
};

namespace detail {

inline void add_map_term(std::map<string, rat>& acc, const CanonicalClass& cl, const rat& w) {
  if (cl.zero || w == 0) return;
  acc[cl.rep.encode()] += w * cl.sign;
}

inline vector<MapTerm> pack_map(std::map<string, rat>& acc) {
  vector<MapTerm> out;
  for (auto& [e, c] : acc)
    if (c != 0) out.push_back({e, c});
  return out;
}

// endpoints of record i in the combined edges ++ hairs word; a hair record
// runs from its vertex to its external vertex
inline std::pair<int, int> record_ends(const HairyGraph& g, int i) {
  if (i < (int)g.edges.size()) return {g.edges[i].t, g.edges[i].h};
  auto& h = g.hairs[i - (int)g.edges.size()];
  return {h.vx, g.v + h.label - 1};
}

// parent direction of every internal vertex in a rooted spanning selection
struct Rooting {
  vector<int> parent, rec;  // per internal vertex; rec points toward the root
};

inline Rooting root_records(const HairyGraph& g, const vector<int>& members,
                            const vector<int>& roots) {
  int N = g.v + g.s;
  vector<vector<std::pair<int, int>>> adj(N);
  for (int i : members) {
    auto [a, b] = record_ends(g, i);
    adj[a].push_back({b, i});
    adj[b].push_back({a, i});
  }
  Rooting r;
  r.parent.assign(g.v, -1);
  r.rec.assign(g.v, -1);
  vector<char> seen(N, 0);
  vector<int> queue;
  for (int x : roots) {
    seen[x] = 1;
    queue.push_back(x);
  }
  for (size_t q = 0; q < queue.size(); q++)
    for (auto [y, i] : adj[queue[q]])
      if (!seen[y]) {
        seen[y] = 1;
        r.parent[y] = queue[q];
        r.rec[y] = i;
        queue.push_back(y);
      }
  for (int x = 0; x < g.v; x++)
    if (!seen[x]) throw std::runtime_error("selection does not span the graph");
  return r;
}

// character of bringing the stored record word to model order: the records in
// `front` move to the head in that order (an order sign at even n), and at
// odd n each front record whose stored tail is not the prescribed one is
// flipped against its stored direction
inline int model_sign(const HairyGraph& g, const vector<int>& front, const vector<int>& tails) {
  int E = (int)(g.edges.size() + g.hairs.size());
  if (g.n % 2 == 0) {
    vector<char> used(E, 0);
    for (int i : front) used[i] = 1;
    vector<int> q = front;
    for (int i = 0; i < E; i++)
      if (!used[i]) q.push_back(i);
    return perm_sign(q);
  }
  int flips = 0;
  for (size_t j = 0; j < front.size(); j++)
    flips += record_ends(g, front[j]).first != tails[j];
  return flips % 2 ? -1 : 1;
}

// spanning trees of a non-hairy graph as edge index sets, lexicographic
inline vector<vector<int>> spanning_trees(const HairyGraph& g) {
  vector<vector<int>> out;
  vector<int> pick;
  int E = (int)g.edges.size();
  std::function<void(int, vector<int>)> rec = [&](int from, vector<int> uf) {
    auto find = [&](int z) {
      while (uf[z] != z) z = uf[z];
      return z;
    };
    if ((int)pick.size() == g.v - 1) {
      out.push_back(pick);
      return;
    }
    int need = g.v - 1 - (int)pick.size();
    for (int i = from; E - i >= need; i++) {
      int ra = find(g.edges[i].t), rb = find(g.edges[i].h);
      if (ra == rb) continue;
      auto uf2 = uf;
      uf2[ra] = rb;
      pick.push_back(i);
      rec(i + 1, uf2);
      pick.pop_back();
    }
  };
  vector<int> uf(g.v);
  for (int z = 0; z < g.v; z++) uf[z] = z;
  rec(0, uf);
  return out;
}

}  // namespace detail

// ---- forest orientation and its relatives --------------------------------

// one spanning forest summand: forest records run toward the external vertex
// of their component and stay plain, every other record becomes crossed
inline CanonicalClass phi_forest_class(const HairyGraph& g, const vector<int>& forest) {
  vector<int> roots;
  for (int l = 0; l < g.s; l++) roots.push_back(g.v + l);
  auto R = detail::root_records(g, forest, roots);
  vector<int> front(g.v), tails(g.v);
  for (int x = 0; x < g.v; x++) {
    front[x] = R.rec[x];
    tails[x] = x;
  }
  int sg = detail::model_sign(g, front, tails);
  int E = (int)(g.edges.size() + g.hairs.size());
  vector<char> used(E, 0);
  for (int i : front) used[i] = 1;
  HairyGraph t;
  t.family = Family::SKELETON;
  t.n = g.n + 1;
  t.v = g.v;
  t.s = g.s;
  for (int x = 0; x < g.v; x++) t.edges.push_back({x, R.parent[x], EType::PLAIN});
  for (int i = 0; i < E; i++)
    if (!used[i]) {
      auto [a, b] = detail::record_ends(g, i);
      t.edges.push_back({a, b, EType::CROSSED});
    }
  auto c = canonicalize(t);
  c.sign *= sg;
  return c;
}

inline vector<MapTerm> phi_terms(const HairyGraph& g) {
  std::map<string, rat> acc;
  for (auto& f : spanning_forests(g)) detail::add_map_term(acc, phi_forest_class(g, f), 1);
  return detail::pack_map(acc);
}

// expands every crossed edge into two fresh records leaving a new 2-valent
// source; the pair enters the word at the crossed record's slot, middles
// append in crossed-record order, and records splitting off into the hair
// block cross the later edge records. At odd n the lift of a z-crossing
// graph carries (-1)^{z(z+1)/2}: contracting a middle leg must reproduce the
// crossed-part weight (-1)^{n deg} of the skeleton differential, which fixes
// the ratio of consecutive prefactors to (-1)^z
inline CanonicalClass kappa_inv_of(const HairyGraph& sk) {
  if (sk.family != Family::SKELETON)
    throw std::runtime_error("expansion acts on skeleton graphs");
  HairyGraph t;
  t.family = Family::HOGC;
  t.n = sk.n;
  t.s = sk.s;
  t.v = sk.v + sk.crossed_count();
  const int zc = sk.crossed_count();
  int sg = (sk.n % 2 && (zc * (zc + 1) / 2) % 2) ? -1 : 1;
  int hairs_seen = 0;
  const bool even = sk.n % 2 == 0;
  auto emit = [&](int tail, int head) {
    if (head >= sk.v) {
      t.hairs.push_back({tail, head - sk.v + 1, false});
      hairs_seen++;
    } else {
      t.edges.push_back({tail, head, EType::PLAIN});
      if (even && hairs_seen % 2) sg = -sg;
    }
  };
  for (auto& e : sk.edges)
    if (e.ty == EType::PLAIN) emit(e.t, e.h);
  int z = sk.v;
  for (auto& e : sk.edges)
    if (e.ty == EType::CROSSED) {
      emit(z, e.t);
      emit(z, e.h);
      z++;
    }
  auto c = canonicalize(t);
  c.sign *= sg;
  return c;
}

// collapses every 2-valent source into a crossed edge between its two
// targets; the sign is fixed through the expansion, which inverts it class
// by class
inline CanonicalClass kappa_of(const HairyGraph& g) {
  if (g.family != Family::HOGC) throw std::runtime_error("collapse acts on directed hairy graphs");
  auto c0 = canonicalize(g);
  if (c0.zero) return c0;
  const HairyGraph& h = c0.rep;
  vector<char> mid(h.v, 0);
  for (int x = 0; x < h.v; x++) mid[x] = h.valence(x) == 2 && h.indeg(x) == 0;
  vector<int> m(h.v + h.s, -1);
  int v2 = 0;
  for (int x = 0; x < h.v; x++)
    if (!mid[x]) m[x] = v2++;
  for (int l = 0; l < h.s; l++) m[h.v + l] = v2 + l;
  vector<vector<int>> outs(h.v);
  for (auto& e : h.edges) outs[e.t].push_back(e.h);
  for (auto& hh : h.hairs) outs[hh.vx].push_back(h.v + hh.label - 1);
  HairyGraph t;
  t.family = Family::SKELETON;
  t.n = h.n;
  t.v = v2;
  t.s = h.s;
  for (auto& e : h.edges)
    if (!mid[e.t]) t.edges.push_back({m[e.t], m[e.h], EType::PLAIN});
  for (auto& hh : h.hairs)
    if (!mid[hh.vx]) t.edges.push_back({m[hh.vx], v2 + hh.label - 1, EType::PLAIN});
  for (int x = 0; x < h.v; x++)
    if (mid[x]) t.edges.push_back({m[outs[x][0]], m[outs[x][1]], EType::CROSSED});
  auto cs = canonicalize(t);
  if (cs.zero) throw std::runtime_error("collapse of a nonzero class vanished: " + h.encode());
  auto back = kappa_inv_of(cs.rep);
  if (back.zero || !(back.rep == h))
    throw std::runtime_error("expansion does not invert the collapse: " + h.encode());
  CanonicalClass out;
  out.rep = cs.rep;
  out.sign = c0.sign * back.sign;
  return out;
}

// the dual of the forest sum: zero unless after collapsing every at least
// 3-valent vertex keeps exactly one outgoing edge; the surviving coefficient
// is read off the transposed forest column, so forests related by a symmetry
// of the undirected shape count with their multiplicity
inline vector<MapTerm> dual_phi_terms(const HairyGraph& g) {
  std::map<string, rat> acc;
  auto kc = kappa_of(g);
  if (kc.zero) return {};
  const HairyGraph& sk = kc.rep;
  for (int x = 0; x < sk.v; x++)
    if (sk.outdeg(x) != 1) return {};
  HairyGraph u;
  u.family = Family::HGC;
  u.n = sk.n - 1;
  u.v = sk.v;
  u.s = sk.s;
  for (auto& e : sk.edges) {
    int a = std::min(e.t, e.h), b = std::max(e.t, e.h);
    if (b >= sk.v && a < sk.v)
      u.hairs.push_back({a, b - sk.v + 1, false});
    else
      u.edges.push_back({a, b, EType::PLAIN});
  }
  auto cu = canonicalize(u);
  if (cu.zero) return {};
  const string want = sk.encode();
  for (auto& t : phi_terms(cu.rep))
    if (t.enc == want) acc[cu.rep.encode()] += rat(kc.sign) * t.c;
  return detail::pack_map(acc);
}

// the plain-directed image of the forest sum, by expanding every crossed edge
inline vector<MapTerm> phi_hog_terms(const HairyGraph& g) {
  std::map<string, rat> acc;
  for (auto& t : phi_terms(g))
    detail::add_map_term(acc, kappa_inv_of(HairyGraph::parse(t.enc)), t.c);
  return detail::pack_map(acc);
}

// ---- the orientation map on non-hairy graphs -----------------------------

// one root and spanning tree: tree records run toward the root, every other
// edge is replaced by a fresh 2-valent source aimed at its old endpoints; the
// model puts the root last in the vertex order
inline CanonicalClass h_tree_class(const HairyGraph& g, const vector<int>& tree, int x) {
  auto R = detail::root_records(g, tree, {x});
  auto pos = [&](int y) { return y < x ? y : (y == x ? g.v - 1 : y - 1); };
  vector<int> front(g.v - 1), tails(g.v - 1);
  for (int j = 0; j < g.v - 1; j++) {
    int y = j < x ? j : j + 1;
    front[j] = R.rec[y];
    tails[j] = y;
  }
  int sg = detail::model_sign(g, front, tails);
  if (g.n % 2 && (g.v - 1 - x) % 2) sg = -sg;
  vector<char> used(g.edges.size(), 0);
  for (int i : front) used[i] = 1;
  HairyGraph t;
  t.family = Family::OGC;
  t.n = g.n + 1;
  for (int j = 0; j < g.v - 1; j++) {
    int y = j < x ? j : j + 1;
    t.edges.push_back({j, pos(R.parent[y]), EType::PLAIN});
  }
  int z = g.v;
  for (int i = 0; i < (int)g.edges.size(); i++)
    if (!used[i]) {
      t.edges.push_back({z, pos(g.edges[i].t), EType::PLAIN});
      t.edges.push_back({z, pos(g.edges[i].h), EType::PLAIN});
      z++;
    }
  t.v = z;
  auto c = canonicalize(t);
  c.sign *= sg;
  return c;
}

inline vector<MapTerm> h_terms(const HairyGraph& g) {
  if (g.family != Family::GC) throw std::runtime_error("the orientation sum acts on plain graphs");
  int loops = g.loop_order();
  if (loops < 1) throw std::runtime_error("the orientation sum needs loop order at least 1");
  std::map<string, rat> acc;
  auto trees = detail::spanning_trees(g);
  for (int x = 0; x < g.v; x++) {
    int w = g.valence(x) - 2;
    if (w == 0) continue;
    for (auto& tr : trees) detail::add_map_term(acc, h_tree_class(g, tr, x), rat(w, 2 * loops));
  }
  return detail::pack_map(acc);
}

// ---- hair attachment and retraction --------------------------------------

// a single labeled hair on every vertex; the new record goes last in its
// block, which costs nothing
inline vector<MapTerm> attach_one_terms(const HairyGraph& g) {
  std::map<string, rat> acc;
  for (int x = 0; x < g.v; x++) {
    HairyGraph r = g;
    r.family = Family::HGC;
    r.s = 1;
    r.hairs.push_back({x, 1, false});
    detail::add_map_term(acc, canonicalize(r), 1);
  }
  return detail::pack_map(acc);
}

// k labeled output hairs in all placements, weight 1/k!; placements keeping a
// sink are dropped by the validity check
inline vector<MapTerm> attach_hairs_terms(const HairyGraph& g, int k) {
  if (k < 1) throw std::runtime_error("need at least one hair to attach");
  std::map<string, rat> acc;
  const rat w = rat(1) / rat(factorial(k));
  vector<int> at(k, 0);
  for (bool more = true; more;) {
    HairyGraph r = g;
    r.family = Family::HOGC;
    r.s = k;
    for (int i = 0; i < k; i++) r.hairs.push_back({at[i], i + 1, false});
    try {
      r.check_valid();
      detail::add_map_term(acc, canonicalize(r), w);
    } catch (const std::runtime_error&) {
    }
    more = false;
    for (int i = 0; i < k; i++) {
      if (++at[i] < g.v) {
        more = true;
        break;
      }
      at[i] = 0;
    }
  }
  return detail::pack_map(acc);
}

// one-sided retraction against hair attachment: zero on two or more hairs and
// on a hair at a trivalent vertex, otherwise the hair is removed with weight
// (#distinct neighbors - 2)/(2g)
inline vector<MapTerm> retract_terms(const HairyGraph& g) {
  if (g.family != Family::HGC) throw std::runtime_error("the retraction acts on hairy graphs");
  if (g.hairs.size() != 1) return {};
  int w = g.hairs[0].vx;
  if (g.valence(w) == 3) return {};
  std::set<int> nb;
  for (auto& e : g.edges) {
    if (e.t == w && e.h != w) nb.insert(e.h);
    if (e.h == w && e.t != w) nb.insert(e.t);
  }
  int num = (int)nb.size() - 2;
  if (num == 0) return {};
  HairyGraph r = g;
  r.family = Family::GC;
  r.s = 0;
  r.hairs.clear();
  std::map<string, rat> acc;
  detail::add_map_term(acc, canonicalize(r), rat(num, 2 * g.loop_order()));
  return detail::pack_map(acc);
}

// ---- input hairs and decorations -----------------------------------------

// drops every input hair; the result is zero when a vertex falls below the
// valence rules of the plain directed family
inline vector<MapTerm> forget_input_terms(const HairyGraph& g) {
  HairyGraph r = g;
  r.family = Family::HOGC;
  r.hairs.erase(std::remove_if(r.hairs.begin(), r.hairs.end(), [](const Hair& h) { return h.in; }),
                r.hairs.end());
  std::map<string, rat> acc;
  try {
    r.check_valid();
    detail::add_map_term(acc, canonicalize(r), 1);
  } catch (const std::runtime_error&) {
  }
  return detail::pack_map(acc);
}

inline vector<MapTerm> mod_incl_terms(const HairyGraph& g) {
  HairyGraph r = g;
  r.family = Family::HGC_MOD;
  r.genus.assign(g.v, 0);
  std::map<string, rat> acc;
  detail::add_map_term(acc, canonicalize(r), 1);
  return detail::pack_map(acc);
}

// decorated vertices survive only as 1-valent genus-one stubs hanging off an
// internal vertex, where they collapse to a tadpole in place; anything
// heavier dies, as does the tadpole-with-leg shape with any decoration
inline vector<MapTerm> mod_proj_terms(const HairyGraph& g) {
  if (g.family != Family::HGC_MOD)
    throw std::runtime_error("the projection acts on decorated graphs");
  for (int x = 0; x < g.v; x++) {
    if (g.genus[x] >= 2) return {};
    if (g.genus[x] == 1 && g.valence(x) >= 2) return {};
  }
  if (g.v == 1 && g.edges.size() == 1 && g.edges[0].t == g.edges[0].h && g.hairs.size() == 1)
    return {};
  vector<char> stub(g.v, 0);
  for (int x = 0; x < g.v; x++) stub[x] = g.genus[x] == 1;
  for (auto& h : g.hairs)
    if (stub[h.vx]) return {};  // a stub with no internal neighbor
  for (auto& e : g.edges)
    if (stub[e.t] && stub[e.h]) return {};
  vector<int> m(g.v, -1);
  int v2 = 0;
  for (int x = 0; x < g.v; x++)
    if (!stub[x]) m[x] = v2++;
  HairyGraph r;
  r.family = Family::HGC;
  r.n = g.n;
  r.v = v2;
  r.s = g.s;
  for (auto& e : g.edges) {
    if (e.t >= g.v || e.h >= g.v) throw std::runtime_error("decorated graphs keep hairs as hairs");
    int a = stub[e.t] ? e.h : e.t, b = stub[e.t] || stub[e.h] ? a : e.h;
    r.edges.push_back({m[a], m[b], EType::PLAIN});
  }
  for (auto& h : g.hairs) r.hairs.push_back({m[h.vx], h.label, h.in});
  std::map<string, rat> acc;
  detail::add_map_term(acc, canonicalize(r), 1);
  return detail::pack_map(acc);
}

// ---- symmetrized hairs ----------------------------------------------------

// relabels external vertices by l -> p[l-1]+1 everywhere they appear
inline HairyGraph relabel_externals(const HairyGraph& g, const vector<int>& p) {
  HairyGraph r = g;
  for (auto& h : r.hairs)
    if (h.label) h.label = p[h.label - 1] + 1;
  for (auto& e : r.edges) {
    if (e.t >= g.v) e.t = g.v + p[e.t - g.v];
    if (e.h >= g.v) e.h = g.v + p[e.h - g.v];
  }
  return r;
}

// basis of the (anti-)invariants under hair relabeling: orbit representatives
// whose stabilizer characters are all +1; incl carries a representative to
// its signed orbit, project is the group average on the labeled basis
struct SymmetrizedSlice {
  ComplexSlice labeled;
  bool odd = false;
  vector<string> reps;
  SparseIntMatrix incl;     // labeled x reps
  SparseIntMatrix project;  // labeled x labeled, idempotent
};

inline SymmetrizedSlice symmetrize_slice(const ComplexSlice& s, bool odd_twist) {
  SymmetrizedSlice out;
  out.labeled = s;
  out.odd = odd_twist;
  int n = (int)s.basis.size(), ns = s.key.s;
  auto index_of = [&](const string& enc) {
    auto it = std::lower_bound(s.basis.begin(), s.basis.end(), enc);
    if (it == s.basis.end() || *it != enc)
      throw std::runtime_error("relabeling left the enumerated basis: " + enc);
    return (int)(it - s.basis.begin());
  };
  vector<int> perm(ns);
  for (int i = 0; i < ns; i++) perm[i] = i;
  vector<vector<std::pair<int, int>>> orbits(n);  // per element: (image index, character)
  do {
    int psg = odd_twist ? perm_sign(perm) : 1;
    for (int j = 0; j < n; j++) {
      auto c = canonicalize(relabel_externals(HairyGraph::parse(s.basis[j]), perm));
      if (c.zero) throw std::runtime_error("relabeling killed a basis class: " + s.basis[j]);
      orbits[j].push_back({index_of(c.rep.encode()), psg * c.sign});
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  bigint order = factorial(ns);
  out.project.rows = out.project.cols = n;
  for (int j = 0; j < n; j++)
    for (auto& [i, sg] : orbits[j]) out.project.add(i, j, rat(sg) / rat(order));
  vector<int> repcol(n, -1);
  for (int j = 0; j < n; j++) {
    if (repcol[j] >= 0) continue;
    bool killed = false;
    for (auto& [i, sg] : orbits[j])
      if (i == j && sg == -1) killed = true;
    if (killed) {
      repcol[j] = -2;
      for (auto& [i, sg] : orbits[j]) repcol[i] = -2;
      continue;
    }
    int r = (int)out.reps.size();
    out.reps.push_back(s.basis[j]);
    for (auto& [i, sg] : orbits[j]) repcol[i] = r;
    repcol[j] = r;
  }
  out.incl.rows = n;
  out.incl.cols = (int)out.reps.size();
  for (int j = 0; j < n; j++) {
    if (repcol[j] < 0) continue;
    // the character carrying the representative to element j, read off the
    // orbit of the representative
    int rj = repcol[j];
    auto rep_idx = index_of(out.reps[rj]);
    std::map<int, int> seen;
    for (auto& [i, sg] : orbits[rep_idx])
      if (!seen.count(i)) seen[i] = sg;
    out.incl.add(j, rj, seen.at(j));
  }
  return out;
}

// extractor picking the representative coordinates back out of a symmetric
// vector; with incl it composes to the identity on the symmetrized basis
inline SparseIntMatrix symmetrize_reduce(const SymmetrizedSlice& s) {
  SparseIntMatrix m;
  m.rows = (int)s.reps.size();
  m.cols = (int)s.labeled.basis.size();
  for (int r = 0; r < m.rows; r++) {
    auto it = std::lower_bound(s.labeled.basis.begin(), s.labeled.basis.end(), s.reps[r]);
    m.add(r, (int)(it - s.labeled.basis.begin()), 1);
  }
  return m;
}

// ---- named dispatch and slice assembly -----------------------------------

inline vector<MapTerm> map_column(const string& name, const HairyGraph& g, int arg = 0) {
  auto single = [](const CanonicalClass& c) {
    vector<MapTerm> out;
    if (!c.zero && c.sign) out.push_back({c.rep.encode(), rat(c.sign)});
    return out;
  };
  if (name == "Phi") return phi_terms(g);
  if (name == "kappa") return single(kappa_of(g));
  if (name == "kappa_inv") return single(kappa_inv_of(g));
  if (name == "F") return dual_phi_terms(g);
  if (name == "h") return h_terms(g);
  if (name == "attach_one") return attach_one_terms(g);
  if (name == "attach_all") return attach_hairs_terms(g, arg);
  if (name == "phi_retract") return retract_terms(g);
  if (name == "forget_inputs") return forget_input_terms(g);
  if (name == "mod_incl") return mod_incl_terms(g);
  if (name == "mod_proj") return mod_proj_terms(g);
  throw std::runtime_error("unknown map: " + name);
}

// true when the map commutes with the dual differentials (vertex splitting),
// so its chain identity is checked through the transposes
inline bool map_is_cochain(const string& name) {
  return name == "F" || name == "attach_one" || name == "attach_all" || name == "phi_retract" ||
         name == "mod_incl" || name == "mod_proj";
}

inline Family map_source_family(const string& name) {
  if (name == "Phi" || name == "phi_retract" || name == "mod_incl") return Family::HGC;
  if (name == "kappa" || name == "F") return Family::HOGC;
  if (name == "kappa_inv") return Family::SKELETON;
  if (name == "h" || name == "attach_one") return Family::GC;
  if (name == "attach_all") return Family::OGC;
  if (name == "forget_inputs") return Family::HHOGC;
  if (name == "mod_proj") return Family::HGC_MOD;
  throw std::runtime_error("unknown map: " + name);
}

inline vector<SliceKey> map_targets(const string& name, const SliceKey& k, int arg = 0) {
  vector<SliceKey> out;
  auto push = [&](SliceKey t) {
    if (t.v >= 0 && t.extra >= 0 && t.extra <= 12 && t.g >= 0) out.push_back(t);
  };
  if (name == "Phi") {
    push({Family::SKELETON, k.n + 1, k.s, k.g, k.v, k.g + k.s - 1});
  } else if (name == "kappa") {
    for (int z = 0; z <= k.v; z++) push({Family::SKELETON, k.n, k.s, k.g, k.v - z, z});
  } else if (name == "kappa_inv") {
    push({Family::HOGC, k.n, k.s, k.g, k.v + k.extra, 0});
  } else if (name == "F") {
    for (int z = 0; z <= k.v; z++) push({Family::HGC, k.n - 1, k.s, k.g, k.v - z, 0});
  } else if (name == "h") {
    push({Family::OGC, k.n + 1, 0, k.g, k.v + k.g, 0});
  } else if (name == "attach_one") {
    push({Family::HGC, k.n, 1, k.g, k.v, 0});
  } else if (name == "attach_all") {
    push({Family::HOGC, k.n, arg, k.g, k.v, 0});
  } else if (name == "phi_retract") {
    if (k.s == 1) push({Family::GC, k.n, 0, k.g, k.v, 0});
  } else if (name == "forget_inputs") {
    push({Family::HOGC, k.n, k.s, k.g, k.v, 0});
  } else if (name == "mod_incl") {
    push({Family::HGC_MOD, k.n, k.s, k.g, k.v, 0});
  } else if (name == "mod_proj") {
    push({Family::HGC, k.n, k.s, k.g, k.v - k.extra, 0});
  } else {
    throw std::runtime_error("unknown map: " + name);
  }
  return out;
}

struct ChainMapSlice {
  string name;
  ComplexSlice source, target;
  SparseIntMatrix mat;  // rows index target.basis, columns source.basis
  bool cochain = false;
};

// strict assembly: a term whose parameters match the target slice must be in
// the enumerated basis; terms for other slices belong to sibling blocks
inline ChainMapSlice map_slice(const string& name, const ComplexSlice& src,
                               const ComplexSlice& dst, int arg = 0) {
  SparseIntMatrix m;
  m.rows = (int)dst.basis.size();
  m.cols = (int)src.basis.size();
  for (int j = 0; j < m.cols; j++)
    for (auto& t : map_column(name, HairyGraph::parse(src.basis[j]), arg)) {
      auto it = std::lower_bound(dst.basis.begin(), dst.basis.end(), t.enc);
      if (it == dst.basis.end() || *it != t.enc) {
        if (key_of(HairyGraph::parse(t.enc)) == dst.key)
          throw std::runtime_error("map left the enumerated basis: " + t.enc);
        continue;
      }
      m.add((int)(it - dst.basis.begin()), j, t.c);
    }
  return {name, src, dst, std::move(m), map_is_cochain(name)};
}

inline vector<ChainMapSlice> map_slices(const string& name, const SliceKey& src, int arg = 0) {
  auto s = enumerate_basis_cached(src);
  vector<ChainMapSlice> out;
  for (auto& tk : map_targets(name, src, arg))
    out.push_back(map_slice(name, s, enumerate_basis_cached(tk), arg));
  return out;
}

// ---- export naming --------------------------------------------------------

inline string slice_param_tag(const SliceKey& k) {
  std::ostringstream o;
  o << family_tag(k.family) << "_n" << k.n << "_s" << k.s << "_g" << k.g << "_v" << k.v << "_x"
    << k.extra;
  return o.str();
}

inline string map_file_name(const string& name, const SliceKey& src, const SliceKey& dst) {
  return name + "__" + slice_param_tag(src) + "__" + slice_param_tag(dst) + ".sms";
}

}  // namespace gcx
