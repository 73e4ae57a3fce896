#pragma once
// The differentials, one column at a time, and their slice-against-slice
// matrices. Orientation bookkeeping: at even n an element carries its stored
// record order, at odd n its vertex numbering; each surgery contributes the
// parity of the deleted slot as base sign and canonicalize supplies the
// relabeling character on top. Terms leaving the family are zero.

#include "gcx/linalg.hpp"
#include "gcx/slices.hpp"
#include "gcx/surgery.hpp"

namespace gcx {

struct Term {
  string enc;
  long long c = 0;
  auto operator<=>(const Term&) const = default;
};

// slice parameters of a graph, for bucketing differential terms by target
inline SliceKey key_of(const HairyGraph& g) {
  int dec = 0;
  for (int d : g.genus) dec += d;
  int extra = 0;
  if (g.family == Family::HHOGC) extra = g.in_hair_total();
  if (g.family == Family::SKELETON) extra = g.crossed_count();
  if (g.family == Family::HGC_MOD) extra = dec;
  return {g.family, g.n, g.s, g.loop_order() + dec, g.v, extra};
}

namespace detail {

inline void add_term(std::map<string, long long>& acc, const CanonicalClass& cl,
                     long long base) {
  if (cl.zero) return;
  acc[cl.rep.encode()] += base * cl.sign;
}

inline vector<Term> pack(std::map<string, long long>& acc) {
  vector<Term> out;
  for (auto& [e, c] : acc)
    if (c) out.push_back({e, c});
  return out;
}

// even n: deleting edge record k, counting anticommuting (plain) records
// only. Odd n: bring tail then head to the front of the vertex order, merge
// there, and move the merged vertex back to the lower slot, which is where
// contract_edge puts it; the net sign is (-1)^{max} times an extra flip when
// the record points from the lower to the higher slot.
inline int contract_base_sign(const HairyGraph& g, int k) {
  int p = 0;
  if (g.n % 2 == 0) {
    for (int j = 0; j < k; j++) p += g.edges[j].ty == EType::PLAIN;
  } else {
    auto& e = g.edges[k];
    p = std::max(e.t, e.h) + (e.t < e.h ? 1 : 0);
  }
  return p % 2 ? -1 : 1;
}

}  // namespace detail

inline vector<Term> d_contract_terms(const HairyGraph& g) {
  std::map<string, long long> acc;
  for (int k = 0; k < (int)g.edges.size(); k++) {
    auto& e = g.edges[k];
    if (e.t == e.h || e.ty == EType::CROSSED || e.t >= g.v || e.h >= g.v) continue;
    auto r = contract_edge(g, k);
    if (!r) continue;
    detail::add_term(acc, canonicalize(*r), detail::contract_base_sign(g, k));
  }
  return detail::pack(acc);
}

// contraction minus removal of the two special vertex shapes: a vertex with
// one ingoing edge and one output hair loses the vertex and hands the hair
// label to the edge's tail; a vertex with one outgoing edge and no output
// turns that edge into an input hair at its head. Input hairs at the removed
// vertex vanish with it.
inline vector<Term> d_hhog_terms(const HairyGraph& g) {
  std::map<string, long long> acc;
  for (int k = 0; k < (int)g.edges.size(); k++) {
    if (g.edges[k].t == g.edges[k].h) continue;
    auto r = contract_edge(g, k);
    if (!r) continue;
    detail::add_term(acc, canonicalize(*r), detail::contract_base_sign(g, k));
  }
  for (int w = 0; w < g.v; w++) {
    int ein = 0, eout = 0, hout = 0, outlabel = 0;
    Edge conn;
    for (auto& e : g.edges) {
      if (e.t == w) {
        eout++;
        conn = e;
      }
      if (e.h == w) {
        ein++;
        conn = e;
      }
    }
    for (auto& h : g.hairs)
      if (h.vx == w && !h.in) {
        hout++;
        outlabel = h.label;
      }
    bool shape1 = ein == 1 && eout == 0 && hout == 1;
    bool shape2 = ein == 0 && eout == 1 && hout == 0;
    if (!shape1 && !shape2) continue;
    auto m = [&](int z) { return z > w ? z - 1 : z; };
    HairyGraph r;
    r.family = g.family;
    r.n = g.n;
    r.v = g.v - 1;
    r.s = g.s;
    for (auto& e : g.edges)
      if (e.t != w && e.h != w) r.edges.push_back({m(e.t), m(e.h), e.ty});
    for (auto& h : g.hairs)
      if (h.vx != w) r.hairs.push_back({m(h.vx), h.label, h.in});
    if (shape1)
      r.hairs.push_back({m(conn.t), outlabel, false});
    else
      r.hairs.push_back({m(conn.h), 0, true});
    try {
      r.check_valid();
    } catch (const std::runtime_error&) {
      continue;
    }
    // removal from vertex slot w costs (-1)^w at odd n; the relative sign of
    // the two special shapes is the residual freedom, pinned by d^2 = 0
    int p = g.n % 2 ? w + hout : 0;
    detail::add_term(acc, canonicalize(r), p % 2 ? 1 : -1);
  }
  return detail::pack(acc);
}

// one crossed edge resolved into its two directed readings, x -> fwd minus
// (-1)^n bwd; readings that leave the family (a directed cycle, or a plain
// edge out of an external vertex) are zero. The base sign is the position of
// the resolved record among the anticommuting class it leaves (odd n) or
// joins (even n), which makes resolutions of distinct edges anticommute.
inline vector<Term> d_skeleton_edge_terms(const HairyGraph& g) {
  std::map<string, long long> acc;
  const bool even = g.n % 2 == 0;
  const int rel = even ? -1 : 1;
  for (int k = 0; k < (int)g.edges.size(); k++) {
    const Edge e = g.edges[k];
    if (e.ty != EType::CROSSED) continue;
    int p = 0;
    for (int j = 0; j < k; j++)
      p += even ? g.edges[j].ty == EType::PLAIN : g.edges[j].ty == EType::CROSSED;
    const int base = p % 2 ? -1 : 1;
    for (int variant = 0; variant < 2; variant++) {
      HairyGraph r = g;
      r.edges[k] = variant ? Edge{e.h, e.t, EType::PLAIN} : Edge{e.t, e.h, EType::PLAIN};
      try {
        r.check_valid();
      } catch (const std::runtime_error&) {
        continue;
      }
      detail::add_term(acc, canonicalize(r), variant ? rel * base : base);
    }
  }
  return detail::pack(acc);
}

// total skeleton differential d_C + (-1)^{n deg} d_E; slices are degree
// homogeneous so the scalar is constant per column
inline vector<Term> d_skeleton_terms(const HairyGraph& g) {
  std::map<string, long long> acc;
  for (auto& t : d_contract_terms(g)) acc[t.enc] += t.c;
  long long eps = ((long long)g.n * g.degree()) % 2 ? -1 : 1;
  for (auto& t : d_skeleton_edge_terms(g)) acc[t.enc] += eps * t.c;
  return detail::pack(acc);
}

// homology-side differential on decorated graphs: contraction plus tadpole
// removal raising the decoration at the tadpole vertex
inline vector<Term> d_mod_terms(const HairyGraph& g) {
  std::map<string, long long> acc;
  for (int k = 0; k < (int)g.edges.size(); k++) {
    auto& e = g.edges[k];
    if (e.t != e.h) {
      auto r = contract_edge(g, k);
      if (!r) continue;
      detail::add_term(acc, canonicalize(*r), detail::contract_base_sign(g, k));
      continue;
    }
    HairyGraph r = g;
    r.edges.erase(r.edges.begin() + k);
    r.genus[e.t] += 1;
    int base = g.n % 2 == 0 ? (k % 2 ? -1 : 1) : 1;
    detail::add_term(acc, canonicalize(r), base);
  }
  return detail::pack(acc);
}

// ribbon contraction of non-tadpole edges; edge order is the only sign datum
inline vector<Term> ribbon_d_terms(const RibbonGraph& m) {
  std::map<string, long long> acc;
  for (int k = 0; k < m.edge_count(); k++) {
    auto [h1, h2] = m.edges[k];
    bool tadpole = false;
    for (int x = m.sigma[h1];; x = m.sigma[x]) {
      if (x == h2) {
        tadpole = true;
        break;
      }
      if (x == h1) break;
    }
    if (tadpole) continue;
    auto c = canonicalize(contract_ribbon_edge(m, k));
    if (c.zero) continue;
    acc[c.rep.encode()] += (k % 2 ? -1 : 1) * c.sign;
  }
  return detail::pack(acc);
}

// splits one boundary in two: a new chord across every unordered pair of
// corners of every boundary; the appended edge sits last in the edge order
inline vector<Term> boundary_chord_terms(const RibbonGraph& m) {
  if (!m.labels.empty())
    throw std::runtime_error("boundary splitting acts on unlabeled ribbon graphs");
  std::map<string, long long> acc;
  auto faces = trace_boundaries(m);
  // the chord goes last in the edge order; appending past e anticommuting
  // records costs (-1)^e, and with it {d, chord insertion} = 0
  const int base = m.edge_count() % 2 ? -1 : 1;
  for (int f = 0; f < (int)faces.size(); f++) {
    int L = (int)faces[f].size();
    for (int i = 0; i < L; i++)
      for (int j = i; j < L; j++) {
        auto c = canonicalize(add_chord(m, faces[f], i, j));
        if (c.zero) continue;
        acc[c.rep.encode()] += base * c.sign;
      }
  }
  return detail::pack(acc);
}

// chord removal, the homology-side counterpart of boundary splitting: drop
// edge k when that merges two boundaries and keeps the graph admissible.
// Deleting record k costs (-1)^k, matching the appended-chord convention.
inline vector<Term> ribbon_chord_removal_terms(const RibbonGraph& g) {
  std::map<string, long long> acc;
  int B = boundary_count(g);
  for (int k = 0; k < g.edge_count(); k++) {
    auto [a, b] = g.edges[k];
    auto emptied = [&](int h) {
      int x = h;
      do {
        if (x != a && x != b) return false;
        x = g.sigma[x];
      } while (x != h);
      return true;
    };
    if (emptied(a) || emptied(b)) continue;
    auto r = remove_ribbon_edge(g, k);
    try {
      r.check_valid();
    } catch (const std::runtime_error&) {
      continue;
    }
    if (boundary_count(r) != B - 1) continue;
    auto c = canonicalize(r);
    if (c.zero) continue;
    acc[c.rep.encode()] += (k % 2 ? -1 : 1) * c.sign;
  }
  return detail::pack(acc);
}

// ---- matrices ------------------------------------------------------------

struct DifferentialSlice {
  ComplexSlice src, dst;
  SparseIntMatrix mat;  // columns index src.basis, rows dst.basis
  string kind;
};

inline SparseIntMatrix assemble_matrix(const vector<string>& src, const vector<string>& dst,
                                       const std::function<vector<Term>(const string&)>& column) {
  SparseIntMatrix m;
  m.rows = (int)dst.size();
  m.cols = (int)src.size();
  for (int j = 0; j < (int)m.cols; j++)
    for (auto& t : column(src[j])) {
      auto it = std::lower_bound(dst.begin(), dst.end(), t.enc);
      if (it == dst.end() || *it != t.enc) continue;  // lands in another slice
      m.add((int)(it - dst.begin()), j, t.c);
    }
  return m;
}

inline vector<Term> hairy_column_terms(const string& kind, const HairyGraph& g) {
  if (kind == "d_contract") return d_contract_terms(g);
  if (kind == "d_hhog") return d_hhog_terms(g);
  if (kind == "d_skeleton_c") return d_contract_terms(g);
  if (kind == "d_skeleton_e") return d_skeleton_edge_terms(g);
  if (kind == "d_skeleton") return d_skeleton_terms(g);
  if (kind == "d_mod") return d_mod_terms(g);
  throw std::runtime_error("unknown differential kind: " + kind);
}

// strict assembly: a term whose parameters match the target slice must be in
// the enumerated basis, anything else would be a silent completeness bug
inline DifferentialSlice differential_slice(const string& kind, const ComplexSlice& src,
                                            const ComplexSlice& dst) {
  auto mat = assemble_matrix(src.basis, dst.basis, [&](const string& enc) {
    auto terms = hairy_column_terms(kind, HairyGraph::parse(enc));
    for (auto& t : terms)
      if (key_of(HairyGraph::parse(t.enc)) == dst.key &&
          !std::binary_search(dst.basis.begin(), dst.basis.end(), t.enc))
        throw std::runtime_error("differential left the enumerated basis: " + t.enc);
    return terms;
  });
  return {src, dst, std::move(mat), kind};
}

inline DifferentialSlice delta_transpose(const DifferentialSlice& d) {
  return {d.dst, d.src, transpose(d.mat), "delta(" + d.kind + ")"};
}

inline int sink_count(const HairyGraph& g) {
  int k = 0;
  for (int x = 0; x < g.v; x++) k += g.outdeg(x) == 0;
  return k;
}

// the part of the dual differential preserving the sink count: filter the
// contraction matrix from hi (v+1) to lo (v), then transpose
inline DifferentialSlice delta0_fixed_sink(const ComplexSlice& lo, const ComplexSlice& hi) {
  auto d = differential_slice("d_contract", hi, lo);
  vector<int> slo, shi;
  for (auto& e : lo.basis) slo.push_back(sink_count(HairyGraph::parse(e)));
  for (auto& e : hi.basis) shi.push_back(sink_count(HairyGraph::parse(e)));
  SparseIntMatrix f;
  f.rows = d.mat.rows;
  f.cols = d.mat.cols;
  for (auto& [rc, val] : d.mat.a)
    if (slo[rc.first] == shi[rc.second]) f.add(rc.first, rc.second, val);
  return {lo, hi, transpose(f), "delta0"};
}

// ribbon matrices are assembled over explicit bases (basis = sorted list of
// canonical encodings at fixed edge count)
inline SparseIntMatrix ribbon_d_matrix(const vector<string>& src, const vector<string>& dst) {
  return assemble_matrix(src, dst, [](const string& enc) {
    return ribbon_d_terms(RibbonGraph::parse(enc));
  });
}

inline SparseIntMatrix ribbon_delta_matrix(const vector<string>& src, const vector<string>& dst) {
  return transpose(ribbon_d_matrix(dst, src));
}

// like the delta matrix, the boundary-splitting matrix is the transpose of
// its homology-side counterpart; assembling placements directly would count
// automorphism orbits with the wrong weight and break (delta+Delta)^2 = 0
inline SparseIntMatrix ribbon_chord_matrix(const vector<string>& src, const vector<string>& dst) {
  return transpose(assemble_matrix(dst, src, [](const string& enc) {
    return ribbon_chord_removal_terms(RibbonGraph::parse(enc));
  }));
}

// all slice keys reachable in one step of the given differential; d_hhog can
// delete any number of ingoing hairs, so every lower extra value is a target
inline vector<SliceKey> step_keys(const string& kind, const SliceKey& k) {
  vector<SliceKey> out;
  auto push = [&](SliceKey t) {
    if (t.v >= 0 && t.extra >= 0 && t.extra <= 12) out.push_back(t);
  };
  if (kind == "d_contract" || kind == "d_skeleton_c") {
    auto t = k; t.v--; push(t);
  } else if (kind == "d_hhog") {
    for (int i = k.extra; i >= 0; i--) { auto t = k; t.v--; t.extra = i; push(t); }
  } else if (kind == "d_skeleton_e") {
    auto t = k; t.extra--; push(t);
  } else if (kind == "d_skeleton") {
    auto t = k; t.v--; push(t);
    t = k; t.extra--; push(t);
  } else if (kind == "d_mod") {
    auto t = k; t.v--; push(t);
    t = k; t.extra++; push(t);
  } else {
    throw std::runtime_error("unknown differential kind: " + kind);
  }
  return out;
}

// composite of two differential steps from src, grouped by final slice key;
// d^2 = 0 means every block vanishes
inline std::map<SliceKey, SparseIntMatrix> square_blocks(
    const string& kind, const SliceKey& src,
    const std::function<ComplexSlice(const SliceKey&)>& slice_of) {
  auto s0 = slice_of(src);
  std::map<SliceKey, SparseIntMatrix> out;
  for (auto& k1 : step_keys(kind, src)) {
    auto s1 = slice_of(k1);
    auto m1 = differential_slice(kind, s0, s1);
    for (auto& k2 : step_keys(kind, k1)) {
      auto s2 = slice_of(k2);
      auto m2 = differential_slice(kind, s1, s2);
      auto p = multiply(m2.mat, m1.mat);
      auto it = out.find(k2);
      if (it == out.end()) {
        out.emplace(k2, std::move(p));
      } else {
        for (auto& [rc, val] : p.a) it->second.add(rc.first, rc.second, val);
      }
    }
  }
  return out;
}

}  // namespace gcx
