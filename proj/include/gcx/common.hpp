#pragma once
// Small shared utilities: exact arithmetic aliases, permutation signs,
// hashing, deterministic parallel loops.

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>
#include <boost/multiprecision/cpp_int.hpp>

namespace gcx {

using std::string;
using std::vector;

using bigint = boost::multiprecision::cpp_int;
using rat = boost::multiprecision::cpp_rational;

// sign of the permutation i -> p[i]
inline int perm_sign(const vector<int>& p) {
  int n = (int)p.size(), sg = 1;
  vector<char> seen(n, 0);
  for (int i = 0; i < n; i++) {
    if (seen[i]) continue;
    int len = 0;
    for (int j = i; !seen[j]; j = p[j]) { seen[j] = 1; len++; }
    if (len % 2 == 0) sg = -sg;
  }
  return sg;
}

// sign incurred by stably sorting keys (permutation taking input order to sorted order)
template <class T>
int sort_sign(const vector<T>& keys) {
  int n = (int)keys.size();
  vector<int> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) { return keys[a] < keys[b]; });
  return perm_sign(idx);  // sign(idx) = sign(idx^{-1})
}

inline uint64_t fnv64(const string& s) {
  uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) { h ^= c; h *= 1099511628211ULL; }
  return h;
}

inline bigint factorial(int k) {
  bigint r = 1;
  for (int i = 2; i <= k; i++) r *= i;
  return r;
}

inline int default_jobs() {
  if (const char* e = std::getenv("GCX_JOBS")) {
    int j = atoi(e);
    if (j > 0) return j;
  }
  int j = (int)std::thread::hardware_concurrency();
  return j > 0 ? j : 1;
}

// runs f(i) for i in [0,n); caller keeps determinism by writing to slot i
inline void parallel_for(size_t n, const std::function<void(size_t)>& f, int jobs = 0) {
  if (jobs <= 0) jobs = default_jobs();
  if (n == 0) return;
  if ((size_t)jobs > n) jobs = (int)n;
  if (jobs <= 1) {
    for (size_t i = 0; i < n; i++) f(i);
    return;
  }
  std::atomic<size_t> next(0);
  std::exception_ptr err;
  std::mutex errmtx;
  vector<std::thread> ts;
  for (int t = 0; t < jobs; t++)
    ts.emplace_back([&] {
      for (size_t i; (i = next.fetch_add(1)) < n;) {
        try {
          f(i);
        } catch (...) {
          std::lock_guard<std::mutex> lk(errmtx);
          if (!err) err = std::current_exception();
          return;
        }
      }
    });
  for (auto& t : ts) t.join();
  if (err) std::rethrow_exception(err);
}

}  // namespace gcx
