#pragma once
// Exact sparse linear algebra. Differential slices are sparse matrices with
// exact rational entries; ranks are computed over two fixed 31-bit prime
// fields and cross-checked, escalating to fraction-free exact elimination on
// disagreement. Denominators are cleared per column first (rank unchanged).

#include <iomanip>
#include <map>
#include <sstream>

#include "gcx/common.hpp"

namespace gcx {

inline constexpr int64_t kRankPrimeA = 2147483629;  // 2^31 - 19
inline constexpr int64_t kRankPrimeB = 2147483587;  // 2^31 - 61
inline constexpr int kMaxExactDim = 800;

struct SparseIntMatrix {
  int rows = 0, cols = 0;
  std::map<std::pair<int, int>, rat> a;  // (row, col) -> nonzero entry

  bool operator==(const SparseIntMatrix&) const = default;

  void add(int r, int c, const rat& v) {
    if (r < 0 || r >= rows || c < 0 || c >= cols)
      throw std::runtime_error("matrix index out of range");
    if (v == 0) return;
    auto it = a.find({r, c});
    if (it == a.end())
      a[{r, c}] = v;
    else if ((it->second += v) == 0)
      a.erase(it);
  }
  rat get(int r, int c) const {
    auto it = a.find({r, c});
    return it == a.end() ? rat(0) : it->second;
  }
  size_t nnz() const { return a.size(); }
  bool is_zero() const { return a.empty(); }
};

inline SparseIntMatrix transpose(const SparseIntMatrix& m) {
  SparseIntMatrix t;
  t.rows = m.cols;
  t.cols = m.rows;
  for (auto& [rc, v] : m.a) t.a[{rc.second, rc.first}] = v;
  return t;
}

inline SparseIntMatrix multiply(const SparseIntMatrix& x, const SparseIntMatrix& y) {
  if (x.cols != y.rows) throw std::runtime_error("dimension mismatch in multiply");
  SparseIntMatrix z;
  z.rows = x.rows;
  z.cols = y.cols;
  // y by row for the sparse product
  std::map<int, vector<std::pair<int, const rat*>>> yrow;
  for (auto& [rc, v] : y.a) yrow[rc.first].push_back({rc.second, &v});
  std::map<std::pair<int, int>, rat> acc;
  for (auto& [rc, v] : x.a) {
    auto it = yrow.find(rc.second);
    if (it == yrow.end()) continue;
    for (auto& [c, w] : it->second) acc[{rc.first, c}] += v * (*w);
  }
  for (auto& [rc, v] : acc)
    if (v != 0) z.a[rc] = v;
  return z;
}

// columns scaled by their denominator LCM: integer entries, same rank
inline vector<std::map<int, bigint>> cleared_rows(const SparseIntMatrix& m) {
  vector<bigint> mult(m.cols, 1);
  for (auto& [rc, v] : m.a) {
    bigint d = boost::multiprecision::denominator(v);
    mult[rc.second] = boost::multiprecision::lcm(mult[rc.second], d);
  }
  vector<std::map<int, bigint>> rows(m.rows);
  for (auto& [rc, v] : m.a) {
    bigint e = boost::multiprecision::numerator(v) *
               (mult[rc.second] / boost::multiprecision::denominator(v));
    rows[rc.first][rc.second] = e;
  }
  return rows;
}

inline int64_t mod_pow(int64_t b, int64_t e, int64_t p) {
  int64_t r = 1;
  b %= p;
  while (e) {
    if (e & 1) r = (__int128)r * b % p;
    b = (__int128)b * b % p;
    e >>= 1;
  }
  return r;
}

// sparse elimination over F_p with a fewest-entries pivot heuristic
inline int rank_mod_p(const SparseIntMatrix& m, int64_t p) {
  if (p < 2) throw std::runtime_error("modulus must be a prime");
  vector<std::map<int, int64_t>> rows;
  for (auto& r : cleared_rows(m)) {
    std::map<int, int64_t> rr;
    for (auto& [c, v] : r) {
      int64_t x = (int64_t)(v % p);
      if (x < 0) x += p;
      if (x) rr[c] = x;
    }
    if (!rr.empty()) rows.push_back(std::move(rr));
  }
  int rank = 0;
  vector<int> colcount(m.cols, 0);
  while (!rows.empty()) {
    std::fill(colcount.begin(), colcount.end(), 0);
    for (auto& r : rows)
      for (auto& [c, v] : r) colcount[c]++;
    // pivot: shortest row, then its rarest column
    size_t pi = 0;
    for (size_t i = 1; i < rows.size(); i++)
      if (rows[i].size() < rows[pi].size()) pi = i;
    int pc = -1;
    for (auto& [c, v] : rows[pi])
      if (pc < 0 || colcount[c] < colcount[pc]) pc = c;
    auto piv = std::move(rows[pi]);
    rows.erase(rows.begin() + pi);
    rank++;
    int64_t inv = mod_pow(piv.at(pc), p - 2, p);
    vector<std::map<int, int64_t>> nxt;
    nxt.reserve(rows.size());
    for (auto& r : rows) {
      auto it = r.find(pc);
      if (it == r.end()) {
        nxt.push_back(std::move(r));
        continue;
      }
      int64_t f = (__int128)it->second * inv % p;
      std::map<int, int64_t> nr;
      for (auto& [c, v] : r) {
        if (c == pc) continue;
        auto jt = piv.find(c);
        int64_t nv = v;
        if (jt != piv.end()) nv = ((nv - (__int128)f * jt->second) % p + p) % p;
        if (nv) nr[c] = nv;
      }
      for (auto& [c, v] : piv) {
        if (c == pc || r.count(c)) continue;
        int64_t nv = (p - (__int128)f * v % p) % p;
        if (nv) nr[c] = nv;
      }
      if (!nr.empty()) nxt.push_back(std::move(nr));
    }
    rows = std::move(nxt);
  }
  return rank;
}

// fraction-free dense elimination; only for small slices
inline int rank_exact(const SparseIntMatrix& m) {
  if (m.rows > kMaxExactDim || m.cols > kMaxExactDim)
    throw std::runtime_error("matrix too large for exact rank");
  vector<vector<bigint>> d(m.rows, vector<bigint>(m.cols, 0));
  auto cl = cleared_rows(m);
  for (int r = 0; r < m.rows; r++)
    for (auto& [c, v] : cl[r]) d[r][c] = v;
  int rank = 0;
  bigint prev = 1;
  for (int c = 0; c < m.cols && rank < m.rows; c++) {
    int pr = -1;
    for (int r = rank; r < m.rows; r++)
      if (d[r][c] != 0 && (pr < 0 || abs(d[r][c]) < abs(d[pr][c]))) pr = r;
    if (pr < 0) continue;
    std::swap(d[rank], d[pr]);
    for (int r = rank + 1; r < m.rows; r++) {
      for (int cc = c + 1; cc < m.cols; cc++)
        d[r][cc] = (d[rank][c] * d[r][cc] - d[r][c] * d[rank][cc]) / prev;
      d[r][c] = 0;
    }
    prev = d[rank][c];
    rank++;
  }
  return rank;
}

// two-prime cross-check with exact escalation
inline int rank_checked(const SparseIntMatrix& m) {
  int ra = rank_mod_p(m, kRankPrimeA);
  int rb = rank_mod_p(m, kRankPrimeB);
  if (ra == rb) return ra;
  if (m.rows <= kMaxExactDim && m.cols <= kMaxExactDim) return rank_exact(m);
  throw std::runtime_error("rank cross-check failed on a matrix too large for exact rank");
}

// SMS text: header "rows cols M", 1-based "i j v" entries, "0 0 0" end
inline string sms_io(const SparseIntMatrix& m) {
  std::ostringstream o;
  o << m.rows << " " << m.cols << " M\n";
  for (auto& [rc, v] : m.a) o << rc.first + 1 << " " << rc.second + 1 << " " << v << "\n";
  o << "0 0 0\n";
  return o.str();
}

inline SparseIntMatrix sms_io(const string& text) {
  std::istringstream in(text);
  string line;
  int lineno = 0;
  auto fail = [&](const string& why) {
    throw std::runtime_error("bad SMS at line " + std::to_string(lineno) + ": " + why);
  };
  SparseIntMatrix m;
  if (!std::getline(in, line)) fail("missing header");
  lineno++;
  {
    std::istringstream h(line);
    string tag;
    if (!(h >> m.rows >> m.cols >> tag) || tag != "M" || m.rows < 0 || m.cols < 0)
      fail("header must be 'rows cols M'");
  }
  bool done = false;
  while (std::getline(in, line)) {
    lineno++;
    if (line.empty()) continue;
    std::istringstream e(line);
    long long i, j;
    string val;
    if (!(e >> i >> j >> val)) fail("entry must be 'i j v'");
    if (i == 0 && j == 0 && val == "0") {
      done = true;
      break;
    }
    if (i < 1 || i > m.rows || j < 1 || j > m.cols) fail("entry out of range");
    try {
      m.add((int)i - 1, (int)j - 1, rat(val));
    } catch (const std::exception&) {
      fail("unreadable value '" + val + "'");
    }
  }
  if (!done) fail("missing '0 0 0' terminator");
  return m;
}

}  // namespace gcx
