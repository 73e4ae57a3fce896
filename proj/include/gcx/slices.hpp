#pragma once
// Slice bases: every matrix in this library is indexed by the sorted list of
// canonical encodings with fixed parameters, enumerated here and cached on
// disk. Generation goes degree sequences -> edge multisets -> filter ->
// canonicalize-dedupe, which keeps an independent brute-force oracle cheap.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <set>

#include "gcx/canonical.hpp"
#include "gcx/ribbon.hpp"

namespace gcx {

// a slice fixes every grading the differentials move by at most one step;
// extra holds the family-specific side grading (input hairs, crossed edges,
// or the decoration sum) and stays 0 elsewhere
struct SliceKey {
  Family family = Family::GC;
  int n = 0;
  int s = 0;      // labeled external vertices
  int g = 0;      // loop order, plus the decoration sum for decorated graphs
  int v = 0;      // internal vertices
  int extra = 0;
  auto operator<=>(const SliceKey&) const = default;

  string tag() const {
    std::ostringstream o;
    o << family_tag(family) << ";n=" << n << ";s=" << s << ";g=" << g << ";v=" << v
      << ";x=" << extra;
    return o.str();
  }
};

struct ComplexSlice {
  SliceKey key;
  vector<string> basis;  // canonical encodings, lexicographically sorted
};

namespace detail {

// all sequences x_i >= lo_i summing to total
inline void int_sequences(const vector<int>& lo, int total,
                          const std::function<void(const vector<int>&)>& f) {
  int m = (int)lo.size();
  if (m == 0) {
    if (total == 0) f({});
    return;
  }
  vector<int> suffix(m + 1, 0);
  for (int i = m - 1; i >= 0; i--) suffix[i] = suffix[i + 1] + lo[i];
  vector<int> cur(m);
  std::function<void(int, int)> rec = [&](int i, int left) {
    if (i == m) {
      if (left == 0) f(cur);
      return;
    }
    for (int x = lo[i]; x <= left - suffix[i + 1]; x++) {
      cur[i] = x;
      rec(i + 1, left - x);
    }
  };
  rec(0, total);
}

// multiplicity vectors over the slot list realizing the endpoint degrees
// exactly; a slot (a,a) consumes two degree units per copy
inline void slot_multiplicities(const vector<std::pair<int, int>>& slots, vector<int> deg,
                                const std::function<void(const vector<int>&)>& f) {
  int m = (int)slots.size(), nv = (int)deg.size();
  vector<int> last(nv, -1);
  for (int p = 0; p < m; p++) {
    last[slots[p].first] = p;
    last[slots[p].second] = p;
  }
  vector<int> mult(m, 0);
  std::function<void(int)> rec = [&](int p) {
    // leftover degree on a vertex no later slot touches is a dead end
    for (int x = 0; x < nv; x++)
      if (deg[x] && last[x] < p) return;
    if (p == m) {
      f(mult);
      return;
    }
    auto [a, b] = slots[p];
    int cap = a == b ? deg[a] / 2 : std::min(deg[a], deg[b]);
    for (int k = 0; k <= cap; k++) {
      mult[p] = k;
      int da = a == b ? 2 * k : k;
      deg[a] -= da;
      if (a != b) deg[b] -= k;
      rec(p + 1);
      deg[a] += da;
      if (a != b) deg[b] += k;
    }
    mult[p] = 0;
  };
  rec(0);
}

// per-slot counts of copies oriented first->second; the rest run backwards
inline void orientation_splits(const vector<int>& mult,
                               const std::function<void(const vector<int>&)>& f) {
  int m = (int)mult.size();
  vector<int> fwd(m, 0);
  std::function<void(int)> rec = [&](int p) {
    if (p == m) {
      f(fwd);
      return;
    }
    for (int k = 0; k <= mult[p]; k++) {
      fwd[p] = k;
      rec(p + 1);
    }
  };
  rec(0);
}

inline void keep_if_class(std::set<string>& out, const HairyGraph& g) {
  try {
    g.check_valid();
  } catch (const std::runtime_error&) {
    return;
  }
  auto c = canonicalize(g);
  if (!c.zero) out.insert(c.rep.encode());
}

inline void hairy_slice(const SliceKey& k, std::set<string>& out) {
  const bool dir =
      k.family == Family::OGC || k.family == Family::HOGC || k.family == Family::HHOGC;
  const int dec = k.family == Family::HGC_MOD ? k.extra : 0;
  const int inh = k.family == Family::HHOGC ? k.extra : 0;
  const int loops = k.g - dec;
  if (loops < 0) return;
  if (k.v == 0) {
    // the only vertexless graph: the two externals joined by an edge
    if (k.s == 2 && k.g == 0 && k.extra == 0) {
      HairyGraph g;
      g.family = k.family;
      g.n = k.n;
      g.v = 0;
      g.s = 2;
      g.edges.push_back({0, 1, EType::PLAIN});
      keep_if_class(out, g);
    }
    return;
  }
  const int E = loops + k.v - 1;  // internal edges; hair edges are tree edges
  if (E < 0) return;

  int minval = 3;
  if (k.family == Family::OGC || k.family == Family::HOGC) minval = 2;
  if (k.family == Family::HGC_MOD) minval = 0;  // decorations may carry the rule

  vector<std::pair<int, int>> slots;  // directed tadpoles are directed cycles
  for (int a = 0; a < k.v; a++)
    for (int b = dir ? a + 1 : a; b < k.v; b++) slots.push_back({a, b});

  vector<int> ha(k.s, 0);  // label l+1 sits at vertex ha[l]
  for (bool more = true; more;) {
    int_sequences(vector<int>(k.v, 0), inh, [&](const vector<int>& ic) {
      vector<Hair> hairs;
      vector<int> hcnt(k.v, 0);
      for (int l = 0; l < k.s; l++) {
        hairs.push_back({ha[l], l + 1, false});
        hcnt[ha[l]]++;
      }
      for (int x = 0; x < k.v; x++) {
        hcnt[x] += ic[x];
        for (int t = 0; t < ic[x]; t++) hairs.push_back({x, 0, true});
      }
      vector<int> lo(k.v);
      for (int x = 0; x < k.v; x++) lo[x] = std::max(0, minval - hcnt[x]);
      int_sequences(lo, 2 * E, [&](const vector<int>& edeg) {
        slot_multiplicities(slots, edeg, [&](const vector<int>& mult) {
          HairyGraph base;
          base.family = k.family;
          base.n = k.n;
          base.v = k.v;
          base.s = k.s;
          base.hairs = hairs;
          if (!dir) {
            for (size_t p = 0; p < slots.size(); p++)
              for (int t = 0; t < mult[p]; t++)
                base.edges.push_back({slots[p].first, slots[p].second, EType::PLAIN});
            if (k.family != Family::HGC_MOD) {
              keep_if_class(out, base);
              return;
            }
            int_sequences(vector<int>(k.v, 0), dec, [&](const vector<int>& dc) {
              for (int x = 0; x < k.v; x++)
                if (2 * dc[x] + edeg[x] + hcnt[x] < 3) return;
              base.genus = dc;
              keep_if_class(out, base);
            });
            return;
          }
          orientation_splits(mult, [&](const vector<int>& fwd) {
            HairyGraph g = base;
            for (size_t p = 0; p < slots.size(); p++) {
              auto [a, b] = slots[p];
              for (int t = 0; t < fwd[p]; t++) g.edges.push_back({a, b, EType::PLAIN});
              for (int t = fwd[p]; t < mult[p]; t++) g.edges.push_back({b, a, EType::PLAIN});
            }
            keep_if_class(out, g);
          });
        });
      });
    });
    more = false;
    for (int i = 0; i < k.s; i++) {
      if (++ha[i] < k.v) {
        more = true;
        break;
      }
      ha[i] = 0;
    }
  }
}

inline void skeleton_slice(const SliceKey& k, std::set<string>& out) {
  const int xtot = k.extra;
  if (k.v == 0) {
    // the crossed external-external edge survives; the plain one is filtered
    if (k.s == 2 && k.g == 0 && xtot <= 1) {
      HairyGraph g;
      g.family = Family::SKELETON;
      g.n = k.n;
      g.v = 0;
      g.s = 2;
      g.edges.push_back({0, 1, xtot ? EType::CROSSED : EType::PLAIN});
      keep_if_class(out, g);
    }
    return;
  }
  const int E = k.g + k.v - 1;
  if (E < 0) return;

  // plain slots are directed and tadpole-free; crossed slots allow tadpoles
  vector<std::pair<int, int>> slots;
  int nplain = 0;
  for (int a = 0; a < k.v; a++)
    for (int b = a + 1; b < k.v; b++) slots.push_back({a, b}), nplain++;
  for (int a = 0; a < k.v; a++)
    for (int b = a; b < k.v; b++) slots.push_back({a, b});

  // every external attaches by one typed edge: value = vertex + type block
  vector<int> hq(k.s, 0);
  for (bool more = true; more;) {
    vector<Edge> hedges;
    vector<int> hcnt(k.v, 0);
    int hx = 0;  // crossed hair edges
    for (int l = 0; l < k.s; l++) {
      int u = hq[l] % k.v;
      bool crossed = hq[l] >= k.v;
      hedges.push_back({u, k.v + l, crossed ? EType::CROSSED : EType::PLAIN});
      hcnt[u]++;
      hx += crossed;
    }
    if (xtot - hx >= 0 && xtot - hx <= E) {
      vector<int> lo(k.v);
      for (int x = 0; x < k.v; x++) lo[x] = std::max(0, 3 - hcnt[x]);
      int_sequences(lo, 2 * E, [&](const vector<int>& edeg) {
        slot_multiplicities(slots, edeg, [&](const vector<int>& mult) {
          int mx = 0;
          for (size_t p = nplain; p < slots.size(); p++) mx += mult[p];
          if (mx != xtot - hx) return;
          vector<int> pm(mult.begin(), mult.begin() + nplain);
          orientation_splits(pm, [&](const vector<int>& fwd) {
            HairyGraph g;
            g.family = Family::SKELETON;
            g.n = k.n;
            g.v = k.v;
            g.s = k.s;
            g.edges = hedges;
            for (int p = 0; p < nplain; p++) {
              auto [a, b] = slots[p];
              for (int t = 0; t < fwd[p]; t++) g.edges.push_back({a, b, EType::PLAIN});
              for (int t = fwd[p]; t < mult[p]; t++) g.edges.push_back({b, a, EType::PLAIN});
            }
            for (size_t p = nplain; p < slots.size(); p++)
              for (int t = 0; t < mult[p]; t++)
                g.edges.push_back({slots[p].first, slots[p].second, EType::CROSSED});
            keep_if_class(out, g);
          });
        });
      });
    }
    more = false;
    for (int i = 0; i < k.s; i++) {
      if (++hq[i] < 2 * k.v) {
        more = true;
        break;
      }
      hq[i] = 0;
    }
  }
}

}  // namespace detail

inline ComplexSlice enumerate_basis(const SliceKey& k) {
  auto reject = [&](const string& why) {
    throw std::runtime_error("slice out of supported box (" + why + "): " + k.tag());
  };
  if (k.g < 0 || k.g > 6) reject("need 0 <= g <= 6");
  if (k.s < 0 || k.s > 6) reject("need 0 <= hairs <= 6");
  if (k.v < 0 || k.v > 24) reject("need 0 <= v <= 24");
  if (k.extra < 0 || k.extra > 12) reject("need 0 <= extra <= 12");
  if (k.extra > 0 && k.family != Family::HHOGC && k.family != Family::SKELETON &&
      k.family != Family::HGC_MOD)
    reject("family has no extra grading");
  std::set<string> res;
  if (k.family == Family::SKELETON)
    detail::skeleton_slice(k, res);
  else
    detail::hairy_slice(k, res);
  return {k, vector<string>(res.begin(), res.end())};
}

// all connected combinatorial maps with e edges and every rotation at least
// min_valence long, alive under the orientation; labels_r > 0 instead keeps
// maps with exactly labels_r boundaries and expands all boundary labelings.
// Growth: a chord across two corner gaps or a fresh leaf, one edge per level;
// removing a leaf edge or a non-bridge edge inverts the two moves, so every
// connected map is reached. Zero classes ride along as expansion carriers.
inline vector<string> enumerate_ribbon_basis(int e, int min_valence, int labels_r = 0) {
  if (e < 0 || e > 7)
    throw std::runtime_error("ribbon basis out of supported box (need 0 <= e <= 7)");
  std::set<string> level{canonicalize(RibbonGraph{}).rep.encode()};
  for (int step = 0; step < e; step++) {
    std::set<string> next;
    auto push = [&](const RibbonGraph& g) { next.insert(canonicalize(g).rep.encode()); };
    for (const auto& enc : level) {
      auto g = RibbonGraph::parse(enc);
      int N = g.he();
      if (N == 0) {
        RibbonGraph bare{{0, 1}, {{0, 1}}, {}};
        RibbonGraph tp{{1, 0}, {{0, 1}}, {}};
        push(bare);
        push(tp);
        continue;
      }
      for (int u = 0; u < N; u++) {
        // chord: one end after gap u, the other after gap w (nested if equal)
        for (int w = u; w < N; w++) {
          RibbonGraph r = g;
          r.sigma.resize(N + 2);
          if (u == w) {
            r.sigma[N + 1] = r.sigma[u];
            r.sigma[N] = N + 1;
            r.sigma[u] = N;
          } else {
            r.sigma[N] = r.sigma[u];
            r.sigma[u] = N;
            r.sigma[N + 1] = r.sigma[w];
            r.sigma[w] = N + 1;
          }
          r.edges.push_back({N, N + 1});
          push(r);
        }
        // leaf: a fresh 1-valent vertex hanging off gap u
        RibbonGraph r = g;
        r.sigma.resize(N + 2);
        r.sigma[N] = r.sigma[u];
        r.sigma[u] = N;
        r.sigma[N + 1] = N + 1;
        r.edges.push_back({N, N + 1});
        push(r);
      }
    }
    level = std::move(next);
  }
  std::set<string> res;
  for (const auto& enc : level) {
    auto g = RibbonGraph::parse(enc);
    bool ok = true;
    for (auto& cyc : RibbonGraph::cycles_of(g.sigma)) ok &= (int)cyc.size() >= min_valence;
    if (!ok) continue;
    if (labels_r == 0) {
      auto c = canonicalize(g);
      if (!c.zero) res.insert(c.rep.encode());
      continue;
    }
    if (boundary_count(g) != labels_r) continue;
    vector<int> perm(labels_r);
    for (int i = 0; i < labels_r; i++) perm[i] = i;
    do {
      RibbonGraph h = g;
      h.labels.assign(labels_r, 0);
      for (int i = 0; i < labels_r; i++) h.labels[i] = perm[i] + 1;
      auto c = canonicalize(h);
      if (!c.zero) res.insert(c.rep.encode());
    } while (std::next_permutation(perm.begin(), perm.end()));
  }
  return vector<string>(res.begin(), res.end());
}

// ---- disk cache ----------------------------------------------------------

inline std::filesystem::path cache_root() {
  if (const char* e = std::getenv("GCX_CACHE"); e && *e) return e;
  return ".gcx_cache";
}

inline constexpr int kBasisFormatVersion = 1;

inline string hex64(uint64_t x) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", (unsigned long long)x);
  return buf;
}

namespace detail {

inline string basis_body(const vector<string>& basis) {
  string body;
  for (auto& b : basis) {
    body += b;
    body += '\n';
  }
  return body;
}

inline string basis_header(const string& tag, size_t count, const string& body) {
  std::ostringstream o;
  o << "# gcx-basis v" << kBasisFormatVersion << " " << tag << " n=" << count
    << " sum=" << hex64(fnv64(body));
  return o.str();
}

// cache failures are soft: enumeration is always available
inline void write_basis_file(const std::filesystem::path& file, const string& tag,
                             const vector<string>& basis) {
  std::error_code ec;
  std::filesystem::create_directories(file.parent_path(), ec);
  string body = basis_body(basis);
  auto tmp = file;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) return;
    out << basis_header(tag, basis.size(), body) << "\n" << body;
    if (!out) return;
  }
  std::filesystem::rename(tmp, file, ec);
  if (ec) std::filesystem::remove(tmp, ec);
}

inline std::optional<vector<string>> read_basis_file(const std::filesystem::path& file,
                                                     const string& tag) {
  std::ifstream in(file, std::ios::binary);
  if (!in) return std::nullopt;  // a miss, not a failure
  auto discard = [&](const char* why) -> std::optional<vector<string>> {
    std::fprintf(stderr, "gcx: discarding cache entry %s (%s)\n", file.string().c_str(), why);
    return std::nullopt;
  };
  string head;
  if (!std::getline(in, head)) return discard("empty file");
  string body((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  vector<string> basis;
  size_t pos = 0;
  while (pos < body.size()) {
    size_t nl = body.find('\n', pos);
    if (nl == string::npos) return discard("truncated entry");
    basis.push_back(body.substr(pos, nl - pos));
    pos = nl + 1;
  }
  if (head != basis_header(tag, basis.size(), body)) return discard("stale or corrupt header");
  return basis;
}

inline std::filesystem::path basis_file(const string& subdir, const string& tag) {
  return cache_root() / subdir / (hex64(fnv64(tag)) + ".basis");
}

}  // namespace detail

inline ComplexSlice enumerate_basis_cached(const SliceKey& k) {
  auto file = detail::basis_file(family_tag(k.family), k.tag());
  if (auto b = detail::read_basis_file(file, k.tag())) return {k, std::move(*b)};
  auto s = enumerate_basis(k);
  detail::write_basis_file(file, k.tag(), s.basis);
  return s;
}

inline vector<string> enumerate_ribbon_basis_cached(int e, int min_valence, int labels_r = 0) {
  std::ostringstream t;
  t << "ribbon;e=" << e << ";minval=" << min_valence << ";labels=" << labels_r;
  auto file = detail::basis_file("ribbon", t.str());
  if (auto b = detail::read_basis_file(file, t.str())) return *b;
  auto s = enumerate_ribbon_basis(e, min_valence, labels_r);
  detail::write_basis_file(file, t.str(), s);
  return s;
}

}  // namespace gcx
