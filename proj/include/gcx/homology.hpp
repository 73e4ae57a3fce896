#pragma once
// Cohomology dimension tables on level-graded chunks of the complexes,
// mapping cones, and the chain-map / quasi-isomorphism checkers. The chain
// level is the grading the family differential lowers by exactly one: v for
// the contraction families, v + crossed for skeletons (a crossed edge hides
// one middle vertex), v - decorations for the decorated family. Ranks go
// through the two-prime checked routine, so every dimension reported here is
// cross-checked.

#include "gcx/maps.hpp"

namespace gcx {

inline string family_diff_kind(Family f) {
  switch (f) {
    case Family::HHOGC:
      return "d_hhog";
    case Family::SKELETON:
      return "d_skeleton";
    case Family::HGC_MOD:
      return "d_mod";
    default:
      return "d_contract";
  }
}

inline int chain_level(const string& kind, const SliceKey& k) {
  if (kind == "d_skeleton") return k.v + k.extra;
  if (kind == "d_mod") return k.v - k.extra;
  return k.v;
}

// a finite chunk of one complex at fixed (family, n, s, g), sliced by key and
// grouped by chain level; empty slices are dropped
struct LeveledComplex {
  string kind;
  std::map<int, vector<SliceKey>> levels;
  std::map<string, ComplexSlice> cache;

  const ComplexSlice& slice(const SliceKey& k) {
    auto t = k.tag();
    auto it = cache.find(t);
    if (it == cache.end()) it = cache.emplace(t, enumerate_basis_cached(k)).first;
    return it->second;
  }

  int dim(int l) {
    auto it = levels.find(l);
    if (it == levels.end()) return 0;
    int d = 0;
    for (auto& k : it->second) d += (int)slice(k).basis.size();
    return d;
  }

  // column offset of key k inside the concatenated level l
  int offset(int l, const SliceKey& k) {
    int o = 0;
    for (auto& kk : levels.at(l)) {
      if (kk == k) return o;
      o += (int)slice(kk).basis.size();
    }
    throw std::runtime_error("key not present at its level: " + k.tag());
  }

  // boundary matrix from level l into level l-1, assembled blockwise
  SparseIntMatrix boundary(int l) {
    SparseIntMatrix b;
    b.rows = dim(l - 1);
    b.cols = dim(l);
    auto it = levels.find(l);
    if (it == levels.end() || b.rows == 0) return b;
    for (auto& k : it->second) {
      int co = offset(l, k);
      for (auto& k2 : step_keys(kind, k)) {
        auto lo = levels.find(l - 1);
        if (lo == levels.end()) continue;
        bool present = false;
        for (auto& kk : lo->second) present = present || kk == k2;
        if (!present) continue;
        int ro = offset(l - 1, k2);
        auto d = differential_slice(kind, slice(k), slice(k2));
        for (auto& [rc, val] : d.mat.a) b.add(ro + rc.first, co + rc.second, val);
      }
    }
    return b;
  }
};

inline LeveledComplex build_complex(Family f, int n, int s, int g, int vmax = -1, int xmax = -1) {
  LeveledComplex C;
  C.kind = family_diff_kind(f);
  if (vmax < 0) vmax = std::min(24, 2 * (g + s) + (f == Family::HHOGC ? 2 * (xmax < 0 ? 3 : xmax) : 0));
  int xlo = 0, xhi = 0;
  if (f == Family::SKELETON) xhi = g + s - 1;
  if (f == Family::HGC_MOD) xhi = g;
  if (f == Family::HHOGC) {
    xlo = 1;
    xhi = xmax < 0 ? 3 : xmax;
  }
  for (int v = 0; v <= vmax; v++)
    for (int x = xlo; x <= xhi; x++) {
      SliceKey k{f, n, s, g, v, x};
      if (!C.slice(k).basis.empty()) C.levels[chain_level(C.kind, k)].push_back(k);
    }
  return C;
}

// ---- dimension tables -----------------------------------------------------

struct CohomRow {
  int level = 0, dimC = 0, rank_out = 0, rank_in = 0, dimH = 0;
};

struct CohomTable {
  Family family = Family::GC;
  int n = 0, s = 0, g = 0;
  vector<CohomRow> rows;
  long long euler_chains = 0, euler_h = 0;
  bool euler_ok = true;

  int dimH_at(int level) const {
    for (auto& r : rows)
      if (r.level == level) return r.dimH;
    return 0;
  }

  string json() const {
    std::ostringstream o;
    o << "{\"family\":\"" << family_tag(family) << "\",\"n\":" << n << ",\"S\":" << s
      << ",\"g\":" << g << ",\"rows\":[";
    for (size_t i = 0; i < rows.size(); i++) {
      if (i) o << ",";
      o << "{\"v\":" << rows[i].level << ",\"dimC\":" << rows[i].dimC
        << ",\"rank_out\":" << rows[i].rank_out << ",\"rank_in\":" << rows[i].rank_in
        << ",\"dimH\":" << rows[i].dimH << "}";
    }
    o << "],\"euler\":{\"chains\":" << euler_chains << ",\"homology\":" << euler_h << "}}";
    return o.str();
  }
};

inline int level_sign(int l) { return ((l % 2) + 2) % 2 ? -1 : 1; }

inline CohomTable cohomology_table(LeveledComplex& C, Family f, int n, int s, int g) {
  CohomTable t;
  t.family = f;
  t.n = n;
  t.s = s;
  t.g = g;
  if (C.levels.empty()) return t;
  int lmin = C.levels.begin()->first, lmax = C.levels.rbegin()->first;
  std::map<int, int> rk;  // rank of boundary(l), computed once and shared
  for (int l = lmin; l <= lmax + 1; l++) rk[l] = rank_checked(C.boundary(l));
  for (int l = lmin; l <= lmax; l++) {
    CohomRow r;
    r.level = l;
    r.dimC = C.dim(l);
    r.rank_out = rk[l];
    r.rank_in = rk[l + 1];
    r.dimH = r.dimC - r.rank_out - r.rank_in;
    if (r.dimH < 0) throw std::runtime_error("negative cohomology dimension: rank bug");
    t.rows.push_back(r);
    t.euler_chains += level_sign(l) * r.dimC;
    t.euler_h += level_sign(l) * r.dimH;
  }
  t.euler_ok = t.euler_chains == t.euler_h;
  if (!t.euler_ok) throw std::runtime_error("Euler characteristic audit failed");
  return t;
}

inline CohomTable cohomology_table(Family f, int n, int s, int g) {
  auto C = build_complex(f, n, s, g);
  return cohomology_table(C, f, n, s, g);
}

// ---- chain-map verification ----------------------------------------------

struct ChainCheck {
  bool ok = false;
  int sign = 0;  // D_tgt M = sign * M D_src, in the map's own orientation
  string detail;
};

namespace detail {

inline void accumulate_block(std::map<SliceKey, SparseIntMatrix>& acc, const SliceKey& k,
                             SparseIntMatrix m) {
  auto it = acc.find(k);
  if (it == acc.end()) {
    acc.emplace(k, std::move(m));
    return;
  }
  if (it->second.rows != m.rows || it->second.cols != m.cols)
    throw std::runtime_error("block dimension mismatch at " + k.tag());
  for (auto& [rc, val] : m.a) it->second.add(rc.first, rc.second, val);
}

inline bool equals_scaled(const SparseIntMatrix& x, const SparseIntMatrix& y, int s) {
  if (x.rows != y.rows || x.cols != y.cols) return false;
  if (x.a.size() != y.a.size()) return false;
  for (auto& [rc, val] : x.a) {
    auto it = y.a.find(rc);
    if (it == y.a.end() || val != it->second * s) return false;
  }
  return true;
}

inline int match_sign(const vector<std::pair<SparseIntMatrix, SparseIntMatrix>>& pairs,
                      string& why) {
  bool plus = true, minus = true, any = false;
  for (auto& [x, y] : pairs) {
    any = any || !x.a.empty() || !y.a.empty();
    plus = plus && equals_scaled(x, y, 1);
    minus = minus && equals_scaled(x, y, -1);
  }
  if (!any) return 0;
  if (plus) return 1;
  if (minus) return -1;
  why = "no consistent sign";
  return -2;
}

}  // namespace detail

// exact identity D_tgt M = s M D_src across every step block anchored at one
// source slice; cochain maps check the transposed identity, which is the same
// map read as a chain map of the dual complexes
inline ChainCheck verify_chain_map(const string& name, const SliceKey& src, int arg = 0) {
  auto M0 = map_slices(name, src, arg);
  if (M0.empty()) return {true, 0, "no target slices"};
  const string ks = family_diff_kind(src.family);
  const string kt = family_diff_kind(M0[0].target.key.family);
  auto srcslice = enumerate_basis_cached(src);
  vector<std::pair<SparseIntMatrix, SparseIntMatrix>> pairs;
  if (!map_is_cochain(name)) {
    std::map<SliceKey, SparseIntMatrix> A, B;
    for (auto& blk : M0)
      for (auto& u : step_keys(kt, blk.target.key)) {
        auto us = enumerate_basis_cached(u);
        auto du = differential_slice(kt, blk.target, us);
        detail::accumulate_block(A, u, multiply(du.mat, blk.mat));
      }
    for (auto& k2 : step_keys(ks, src)) {
      auto s2 = enumerate_basis_cached(k2);
      auto d12 = differential_slice(ks, srcslice, s2);
      for (auto& blk2 : map_slices(name, k2, arg))
        detail::accumulate_block(B, blk2.target.key, multiply(blk2.mat, d12.mat));
    }
    std::set<SliceKey> keys;
    for (auto& [k, m] : A) keys.insert(k);
    for (auto& [k, m] : B) keys.insert(k);
    for (auto& k : keys) {
      auto zero = [&](int r, int c) {
        SparseIntMatrix z;
        z.rows = r;
        z.cols = c;
        return z;
      };
      int rows = (int)enumerate_basis_cached(k).basis.size();
      int cols = (int)srcslice.basis.size();
      auto ia = A.find(k);
      auto ib = B.find(k);
      pairs.push_back({ia == A.end() ? zero(rows, cols) : ia->second,
                       ib == B.end() ? zero(rows, cols) : ib->second});
    }
  } else {
    for (auto& k2 : step_keys(ks, src)) {
      auto s2 = enumerate_basis_cached(k2);
      auto d12t = transpose(differential_slice(ks, srcslice, s2).mat);
      auto M1 = map_slices(name, k2, arg);
      for (auto& blk : M0) {
        SparseIntMatrix lhs;
        lhs.rows = blk.mat.rows;
        lhs.cols = d12t.cols;
        for (auto& t2 : step_keys(kt, blk.target.key)) {
          const SparseIntMatrix* m1 = nullptr;
          for (auto& b1 : M1)
            if (b1.target.key == t2) m1 = &b1.mat;
          if (!m1) continue;
          auto dt = transpose(differential_slice(kt, blk.target, enumerate_basis_cached(t2)).mat);
          for (auto& [rc, val] : multiply(dt, *m1).a) lhs.add(rc.first, rc.second, val);
        }
        pairs.push_back({std::move(lhs), multiply(blk.mat, d12t)});
      }
    }
  }
  string why;
  int s = detail::match_sign(pairs, why);
  if (s == -2) return {false, 0, name + " at " + src.tag() + ": " + why};
  return {true, s, ""};
}

// the consistent sign over a whole box of source keys; 0 when everything was
// degenerate, throws on an inconsistent or failed slice
inline int chain_sign_over(const string& name, const vector<SliceKey>& keys, int arg = 0) {
  int sign = 0;
  for (auto& k : keys) {
    auto c = verify_chain_map(name, k, arg);
    if (!c.ok) throw std::runtime_error("chain identity failed: " + c.detail);
    if (c.sign == 0) continue;
    if (sign == 0) sign = c.sign;
    if (sign != c.sign)
      throw std::runtime_error("chain sign flips inside the box: " + name + " at " + k.tag());
  }
  return sign;
}

// ---- mapping cones and quasi-isomorphism ---------------------------------

struct ConeReport {
  vector<CohomRow> rows;
  bool acyclic = true;
  int sign = 0;
};

// homology-side mapping cone of a level-aligned named map over the whole
// (n, s, g) chunk; cochain maps are transposed first, which swaps the two
// complexes and leaves cone acyclicity unchanged
inline ConeReport mapping_cone_report(const string& name, int n, int s, int g, int arg = 0) {
  Family sf = map_source_family(name);
  LeveledComplex S = build_complex(sf, n, s, g);
  // target parameters come from any source key; the (n, s, g) of the target
  // are constant over the source chunk
  SliceKey sample{sf, n, s, g, 1, sf == Family::HHOGC ? 1 : 0};
  auto tk0 = map_targets(name, sample, arg);
  if (tk0.empty()) throw std::runtime_error("map has no targets here: " + name);
  LeveledComplex T = build_complex(tk0[0].family, tk0[0].n, tk0[0].s, tk0[0].g);
  // level shift of the map, constant by construction for the cone-checked maps
  int shift = chain_level(T.kind, tk0[0]) - chain_level(S.kind, sample);
  vector<SliceKey> allsrc;
  for (auto& [l, ks] : S.levels)
    for (auto& k : ks) allsrc.push_back(k);
  for (auto& k : allsrc)
    for (auto& t : map_targets(name, k, arg))
      if (chain_level(T.kind, t) - chain_level(S.kind, k) != shift)
        throw std::runtime_error("map is not level-aligned, no cone here: " + name);
  ConeReport rep;
  rep.sign = chain_sign_over(name, allsrc, arg);
  int eps = rep.sign ? rep.sign : 1;
  const bool co = map_is_cochain(name);
  // in the transposed reading the roles swap: rows of the map matrix live in
  // the original target complex
  LeveledComplex& TT = co ? S : T;  // cone target side
  LeveledComplex& SS = co ? T : S;  // cone source side
  int cshift = co ? -shift : shift;
  // full map matrix from SS level l (re-graded) into TT level l
  auto map_level = [&](int l) {
    SparseIntMatrix m;
    m.rows = TT.dim(l);
    m.cols = SS.dim(l - cshift);
    if (!co) {
      auto it = S.levels.find(l - cshift);
      if (it == S.levels.end()) return m;
      for (auto& k : it->second) {
        int cofs = S.offset(l - cshift, k);
        for (auto& blk : map_slices(name, k, arg)) {
          if (blk.mat.a.empty()) continue;
          int rofs = T.offset(l, blk.target.key);
          for (auto& [rc, val] : blk.mat.a) m.add(rofs + rc.first, cofs + rc.second, val);
        }
      }
    } else {
      auto it = S.levels.find(l);
      if (it == S.levels.end()) return m;
      for (auto& k : it->second) {
        int rofs = S.offset(l, k);
        for (auto& blk : map_slices(name, k, arg)) {
          if (blk.mat.a.empty()) continue;
          int cofs = T.offset(l - cshift, blk.target.key);
          for (auto& [rc, val] : blk.mat.a) m.add(rofs + rc.second, cofs + rc.first, val);
        }
      }
    }
    return m;
  };
  // cone level u = TT(u) + SS re-graded (u-1); boundary stacks
  // [B_T | M] over [0 | -eps B_S]
  std::set<int> levels;
  for (auto& [l, ks] : TT.levels) levels.insert(l);
  for (auto& [l, ks] : SS.levels) levels.insert(l + cshift + 1);
  if (levels.empty()) return rep;
  int lmin = *levels.begin(), lmax = *levels.rbegin();
  auto cone_dim = [&](int u) { return TT.dim(u) + SS.dim(u - 1 - cshift); };
  auto cone_boundary = [&](int u) {
    int tr = TT.dim(u - 1), sr = SS.dim(u - 2 - cshift);
    int tc = TT.dim(u), sc = SS.dim(u - 1 - cshift);
    SparseIntMatrix b;
    b.rows = tr + sr;
    b.cols = tc + sc;
    for (auto& [rc, val] : TT.boundary(u).a) b.add(rc.first, rc.second, val);
    for (auto& [rc, val] : map_level(u - 1).a) b.add(rc.first, tc + rc.second, val);
    for (auto& [rc, val] : SS.boundary(u - 1 - cshift).a)
      b.add(tr + rc.first, tc + rc.second, val * rat(-eps));
    return b;
  };
  std::map<int, int> rk;
  for (int u = lmin; u <= lmax + 2; u++) rk[u] = rank_checked(cone_boundary(u));
  for (int u = lmin; u <= lmax + 1; u++) {
    CohomRow r;
    r.level = u;
    r.dimC = cone_dim(u);
    r.rank_out = rk[u];
    r.rank_in = rk[u + 1];
    r.dimH = r.dimC - r.rank_out - r.rank_in;
    if (r.dimH < 0) throw std::runtime_error("negative cone cohomology: rank bug");
    if (r.dimC) rep.rows.push_back(r);
    rep.acyclic = rep.acyclic && r.dimH == 0;
  }
  return rep;
}

struct QuasiIsoReport {
  bool chain_ok = false, dims_ok = false, cone_ok = false;
  int sign = 0;
  string detail;
  bool ok() const { return chain_ok && dims_ok && cone_ok; }
};

// chain identity on every slice, equal cohomology dimensions level for level
// under the map's shift, and an acyclic cone
inline QuasiIsoReport verify_quasi_iso(const string& name, int n, int s, int g, int arg = 0) {
  QuasiIsoReport rep;
  Family sf = map_source_family(name);
  auto S = build_complex(sf, n, s, g);
  SliceKey sample{sf, n, s, g, 1, sf == Family::HHOGC ? 1 : 0};
  auto tk0 = map_targets(name, sample, arg);
  if (tk0.empty()) {
    rep.detail = "no target complex";
    return rep;
  }
  auto T = build_complex(tk0[0].family, tk0[0].n, tk0[0].s, tk0[0].g);
  int shift = chain_level(T.kind, tk0[0]) - chain_level(S.kind, sample);
  try {
    vector<SliceKey> allsrc;
    for (auto& [l, ks] : S.levels)
      for (auto& k : ks) allsrc.push_back(k);
    rep.sign = chain_sign_over(name, allsrc, arg);
    rep.chain_ok = true;
  } catch (const std::runtime_error& e) {
    rep.detail = e.what();
    return rep;
  }
  auto ts = cohomology_table(S, sf, n, s, g);
  auto tt = cohomology_table(T, tk0[0].family, tk0[0].n, tk0[0].s, tk0[0].g);
  rep.dims_ok = true;
  std::set<int> ls;
  for (auto& r : ts.rows) ls.insert(r.level);
  for (auto& r : tt.rows) ls.insert(r.level - shift);
  for (int l : ls)
    if (ts.dimH_at(l) != tt.dimH_at(l + shift)) {
      rep.dims_ok = false;
      rep.detail = "cohomology dimensions differ at level " + std::to_string(l);
    }
  auto cone = mapping_cone_report(name, n, s, g, arg);
  rep.cone_ok = cone.acyclic;
  if (!rep.cone_ok && rep.detail.empty()) rep.detail = "mapping cone is not acyclic";
  return rep;
}

}  // namespace gcx
