#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <map>
#include <numeric>

#include "gcx/canonical.hpp"

using namespace gcx;

namespace {

HairyGraph mk(Family f, int n, int v, int s, vector<Edge> E, vector<Hair> H = {},
              vector<int> gen = {}) {
  HairyGraph g;
  g.family = f;
  g.n = n;
  g.v = v;
  g.s = s;
  g.edges = std::move(E);
  g.hairs = std::move(H);
  g.genus = std::move(gen);
  return g;
}

// The oracle below re-derives relabeling characters from scratch (inversion
// counts instead of cycle decompositions and sort bookkeeping) so that it and
// the library check each other.

int inv_sign(const vector<int>& p) {
  int c = 0;
  for (size_t i = 0; i < p.size(); i++)
    for (size_t j = i + 1; j < p.size(); j++) c += p[i] > p[j];
  return c % 2 ? -1 : 1;
}

std::pair<HairyGraph, int> oracle_relabel(const HairyGraph& g, const vector<int>& p,
                                          const SignConvention& conv) {
  HairyGraph r = g;
  for (auto& e : r.edges) {
    if (e.t < g.v) e.t = p[e.t];
    if (e.h < g.v) e.h = p[e.h];
  }
  for (auto& h : r.hairs) h.vx = p[h.vx];
  for (int x = 0; x < (int)g.genus.size(); x++) r.genus[p[x]] = g.genus[x];
  int sg = conv.vertex_sign ? inv_sign(p) : 1;
  int flips = 0;
  for (auto& e : r.edges)
    if (conv.flippable(e.ty) && e.t > e.h) {
      std::swap(e.t, e.h);
      flips++;
    }
  if (flips % 2) sg *= conv.flip_sign;
  auto ek = [](const Edge& e) {
    return std::tuple(std::min(e.t, e.h), std::max(e.t, e.h), (int)e.ty, e.t > e.h ? 1 : 0);
  };
  auto hk = [](const Hair& h) { return std::tuple(h.in ? 1 : 0, h.label, h.vx); };
  int inv = 0;
  vector<Edge> pe, xe;
  for (auto& e : r.edges) (e.ty == EType::CROSSED ? xe : pe).push_back(e);
  auto count_inv = [&](const vector<Edge>& es) {
    int c = 0;
    for (size_t i = 0; i < es.size(); i++)
      for (size_t j = i + 1; j < es.size(); j++) c += ek(es[i]) > ek(es[j]);
    return c;
  };
  if (conv.plain_order) inv += count_inv(pe);
  if (conv.crossed_order) inv += count_inv(xe);
  if (conv.hair_order)
    for (size_t i = 0; i < r.hairs.size(); i++)
      for (size_t j = i + 1; j < r.hairs.size(); j++) inv += hk(r.hairs[i]) > hk(r.hairs[j]);
  if (inv % 2) sg = -sg;
  std::stable_sort(r.edges.begin(), r.edges.end(),
                   [&](const Edge& a, const Edge& b) { return ek(a) < ek(b); });
  std::stable_sort(r.hairs.begin(), r.hairs.end(),
                   [&](const Hair& a, const Hair& b) { return hk(a) < hk(b); });
  return {r, sg};
}

struct Brute {
  bool zero = false;
  std::map<string, int> orbit;  // storage encoding -> character relative to the input
};

Brute brute_orbit(const HairyGraph& g, const SignConvention& conv) {
  Brute b;
  // symmetries invisible to vertex relabelings: a tadpole flip, and a swap of
  // two identical edges or hairs
  if (conv.flip_sign == -1)
    for (auto& e : g.edges)
      if (e.t == e.h && conv.flippable(e.ty)) b.zero = true;
  {
    auto [r0, s0] = oracle_relabel(g, [&] {
      vector<int> id(g.v);
      std::iota(id.begin(), id.end(), 0);
      return id;
    }(), conv);
    for (size_t i = 0; i + 1 < r0.edges.size(); i++)
      if (r0.edges[i] == r0.edges[i + 1]) {
        bool crossed = r0.edges[i].ty == EType::CROSSED;
        if (crossed ? conv.crossed_order : conv.plain_order) b.zero = true;
      }
    if (conv.hair_order)
      for (size_t i = 0; i + 1 < r0.hairs.size(); i++)
        if (r0.hairs[i] == r0.hairs[i + 1]) b.zero = true;
  }
  vector<int> p(g.v);
  std::iota(p.begin(), p.end(), 0);
  do {
    auto [r, sg] = oracle_relabel(g, p, conv);
    string k = r.encode();
    auto it = b.orbit.find(k);
    if (it == b.orbit.end())
      b.orbit[k] = sg;
    else if (it->second != sg)
      b.zero = true;
  } while (std::next_permutation(p.begin(), p.end()));
  return b;
}

void check_against_brute(const HairyGraph& g) {
  INFO(g.encode());
  auto conv = sign_convention(g);
  auto c = canonicalize(g, conv);
  Brute b = brute_orbit(g, conv);
  REQUIRE(c.zero == b.zero);
  vector<int> p(g.v);
  std::iota(p.begin(), p.end(), 0);
  if (c.zero) {
    // every relabeling canonicalizes to zero as well
    int tried = 0;
    do {
      auto cr = canonicalize(oracle_relabel(g, p, conv).first, conv);
      REQUIRE(cr.zero);
    } while (std::next_permutation(p.begin(), p.end()) && ++tried < 6);
    return;
  }
  // the representative lies in the orbit and carries the claimed character
  auto it = b.orbit.find(c.rep.encode());
  REQUIRE(it != b.orbit.end());
  REQUIRE(it->second == c.sign);
  // canonicalizing the representative is the identity
  auto c2 = canonicalize(c.rep, conv);
  REQUIRE(!c2.zero);
  REQUIRE(c2.rep == c.rep);
  REQUIRE(c2.sign == 1);
  // every relabeling reaches the same representative with a consistent sign
  int tried = 0;
  do {
    auto [r, sg] = oracle_relabel(g, p, conv);
    auto cr = canonicalize(r, conv);
    REQUIRE(!cr.zero);
    REQUIRE(cr.rep == c.rep);
    REQUIRE(cr.sign == sg * c.sign);
  } while (std::next_permutation(p.begin(), p.end()) && ++tried < 24);
}

}  // namespace

TEST_CASE("canonicalize agrees with the exhaustive relabeling oracle") {
  vector<HairyGraph> gs;
  // theta, both parities
  gs.push_back(mk(Family::GC, 0, 2, 0, {{0, 1}, {0, 1}, {0, 1}}));
  gs.push_back(mk(Family::GC, 1, 2, 0, {{0, 1}, {0, 1}, {0, 1}}));
  // dumbbell: two tadpoles joined by a bridge
  gs.push_back(mk(Family::GC, 0, 2, 0, {{0, 0}, {0, 1}, {1, 1}}));
  gs.push_back(mk(Family::GC, 1, 2, 0, {{0, 0}, {0, 1}, {1, 1}}));
  // K4
  {
    vector<Edge> e = {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};
    gs.push_back(mk(Family::GC, 0, 4, 0, e));
    gs.push_back(mk(Family::GC, 1, 4, 0, e));
  }
  // tadpole with one hair
  gs.push_back(mk(Family::HGC, 0, 1, 1, {{0, 0}}, {{0, 1, false}}));
  gs.push_back(mk(Family::HGC, 1, 1, 1, {{0, 0}}, {{0, 1, false}}));
  // one vertex, three hairs
  gs.push_back(mk(Family::HGC, 0, 1, 3, {}, {{0, 1, false}, {0, 2, false}, {0, 3, false}}));
  // decorated: bridge with genus 1 on one side, two hairs on the other
  gs.push_back(mk(Family::HGC_MOD, 0, 2, 2, {{0, 1}}, {{1, 1, false}, {1, 2, false}}, {1, 0}));
  gs.push_back(mk(Family::HGC_MOD, 1, 2, 2, {{0, 1}}, {{1, 1, false}, {1, 2, false}}, {1, 0}));
  // decorated: single edge between two genus-1 vertices (alive both parities)
  gs.push_back(mk(Family::HGC_MOD, 0, 2, 0, {{0, 1}}, {}, {1, 1}));
  gs.push_back(mk(Family::HGC_MOD, 1, 2, 0, {{0, 1}}, {}, {1, 1}));
  // oriented 4-cycle with alternating sources and targets
  gs.push_back(mk(Family::OGC, 0, 4, 0, {{0, 1}, {0, 3}, {2, 1}, {2, 3}}));
  gs.push_back(mk(Family::OGC, 1, 4, 0, {{0, 1}, {0, 3}, {2, 1}, {2, 3}}));
  // double edge with a hair at the target
  gs.push_back(mk(Family::HOGC, 0, 2, 1, {{0, 1}, {0, 1}}, {{1, 1, false}}));
  gs.push_back(mk(Family::HOGC, 1, 2, 1, {{0, 1}, {0, 1}}, {{1, 1, false}}));
  // two 2-valent sources feeding a 3-valent vertex and the haired top vertex
  {
    vector<Edge> e = {{0, 1}, {0, 3}, {1, 3}, {2, 1}, {2, 3}};
    gs.push_back(mk(Family::HOGC, 0, 4, 1, e, {{3, 1, false}}));
    gs.push_back(mk(Family::HOGC, 1, 4, 1, e, {{3, 1, false}}));
    gs.push_back(mk(Family::HHOGC, 1, 4, 1, e,
                    {{3, 1, false}, {0, 0, true}, {2, 0, true}}));
  }
  // smallest graph with input hairs
  gs.push_back(mk(Family::HHOGC, 1, 2, 1, {{0, 1}},
                  {{1, 1, false}, {0, 0, true}, {0, 0, true}, {1, 0, true}}));
  // skeleton: crossed tadpole plus a hair edge
  gs.push_back(mk(Family::SKELETON, 0, 1, 1, {{0, 0, EType::CROSSED}, {0, 1, EType::PLAIN}}));
  gs.push_back(mk(Family::SKELETON, 1, 1, 1, {{0, 0, EType::CROSSED}, {0, 1, EType::PLAIN}}));
  // skeleton: two vertices, mixed edge types
  {
    vector<Edge> e = {{0, 1, EType::PLAIN},
                      {0, 1, EType::CROSSED},
                      {1, 2, EType::PLAIN},
                      {0, 0, EType::CROSSED}};
    gs.push_back(mk(Family::SKELETON, 0, 2, 1, e));
    gs.push_back(mk(Family::SKELETON, 1, 2, 1, e));
  }
  for (auto& g : gs) check_against_brute(g);
}

TEST_CASE("expected zero and nonzero classes by parity") {
  auto zero = [](const HairyGraph& g) { return canonicalize(g).zero; };
  // theta dies for even n (identical parallel edges), survives odd n
  REQUIRE(zero(mk(Family::GC, 0, 2, 0, {{0, 1}, {0, 1}, {0, 1}})));
  REQUIRE(!zero(mk(Family::GC, 1, 2, 0, {{0, 1}, {0, 1}, {0, 1}})));
  // dumbbell dies both ways: tadpole flip at odd n, tadpole swap at even n
  REQUIRE(zero(mk(Family::GC, 0, 2, 0, {{0, 0}, {0, 1}, {1, 1}})));
  REQUIRE(zero(mk(Family::GC, 1, 2, 0, {{0, 0}, {0, 1}, {1, 1}})));
  // K4 survives both parities: a vertex transposition flips exactly one edge,
  // so its character is +1 either way
  {
    vector<Edge> e = {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};
    REQUIRE(!zero(mk(Family::GC, 0, 4, 0, e)));
    REQUIRE(!zero(mk(Family::GC, 1, 4, 0, e)));
  }
  // haired tadpole survives even n, dies odd n
  REQUIRE(!zero(mk(Family::HGC, 0, 1, 1, {{0, 0}}, {{0, 1, false}})));
  REQUIRE(zero(mk(Family::HGC, 1, 1, 1, {{0, 0}}, {{0, 1, false}})));
  // directed double edge dies at even n only
  REQUIRE(zero(mk(Family::HOGC, 0, 2, 1, {{0, 1}, {0, 1}}, {{1, 1, false}})));
  REQUIRE(!zero(mk(Family::HOGC, 1, 2, 1, {{0, 1}, {0, 1}}, {{1, 1, false}})));
  // crossed tadpole dies at even n only
  REQUIRE(zero(mk(Family::SKELETON, 0, 1, 1, {{0, 0, EType::CROSSED}, {0, 1, EType::PLAIN}})));
  REQUIRE(!zero(mk(Family::SKELETON, 1, 1, 1, {{0, 0, EType::CROSSED}, {0, 1, EType::PLAIN}})));
}

TEST_CASE("one vertex with hairs 1,2,3 is its own canonical form") {
  HairyGraph g = mk(Family::HGC, 0, 1, 3, {}, {{0, 1, false}, {0, 2, false}, {0, 3, false}});
  auto c = canonicalize(g);
  REQUIRE(!c.zero);
  REQUIRE(c.rep == g);
  REQUIRE(c.sign == 1);
}

TEST_CASE("transposing two internal vertices flips the sign when n is odd") {
  // directed triangle with one hair per vertex, no symmetries
  HairyGraph g = mk(Family::HOGC, 1, 3, 3, {{0, 1}, {0, 2}, {1, 2}},
                    {{0, 1, false}, {1, 2, false}, {2, 3, false}});
  auto conv = sign_convention(g);
  auto c = canonicalize(g, conv);
  REQUIRE(!c.zero);
  for (vector<int> p : {vector<int>{1, 0, 2}, vector<int>{0, 2, 1}, vector<int>{2, 1, 0}}) {
    auto r = oracle_relabel(g, p, conv).first;
    auto cr = canonicalize(r, conv);
    REQUIRE(!cr.zero);
    REQUIRE(cr.rep == c.rep);
    REQUIRE(cr.sign == -c.sign);
  }
}

TEST_CASE("the symmetric 4-vertex directed example is zero for odd n") {
  // its two 2-valent sources feed the same pair of vertices; swapping them is
  // an automorphism of vertex sign -1
  vector<Edge> e = {{0, 1}, {0, 3}, {1, 3}, {2, 1}, {2, 3}};
  REQUIRE(canonicalize(mk(Family::HOGC, 1, 4, 1, e, {{3, 1, false}})).zero);
  REQUIRE(!canonicalize(mk(Family::HOGC, 0, 4, 1, e, {{3, 1, false}})).zero);
  REQUIRE(canonicalize(mk(Family::HHOGC, 1, 4, 1, e,
                          {{3, 1, false}, {0, 0, true}, {2, 0, true}}))
              .zero);
}

TEST_CASE("vertexless graphs normalize directly") {
  HairyGraph m0 = mk(Family::HGC, 0, 0, 2, {{0, 1}});
  auto c = canonicalize(m0);
  REQUIRE(!c.zero);
  REQUIRE(c.rep == m0);
  REQUIRE(c.sign == 1);
  // flipped storage of the crossed external edge
  HairyGraph sk = mk(Family::SKELETON, 0, 0, 2, {{1, 0, EType::CROSSED}});
  auto cs = canonicalize(sk);
  REQUIRE(!cs.zero);
  REQUIRE(cs.rep == mk(Family::SKELETON, 0, 0, 2, {{0, 1, EType::CROSSED}}));
  REQUIRE(cs.sign == -1);  // one crossed flip at even n
  sk.n = 1;
  auto cs1 = canonicalize(sk);
  REQUIRE(cs1.sign == 1);
}

TEST_CASE("canonicalize rejects invalid graphs") {
  REQUIRE_THROWS(canonicalize(mk(Family::GC, 0, 2, 0, {{0, 1}, {0, 1}})));
}
