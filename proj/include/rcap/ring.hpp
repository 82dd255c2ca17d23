#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "rcap/elimination.hpp"
#include "rcap/japanese.hpp"
#include "rcap/network.hpp"

namespace rcap {

enum class SessionPolicy { AllMulticast, UnicastBroadcast, StringMulticast };

// Undirected ring with unit capacities; edge i connects vertices i and i+1,
// edge |E| closes the cycle.
inline Network make_ring(int edges) {
  if (edges < 3) throw input_error("a ring needs at least 3 edges");
  Network net;
  net.directed = false;
  net.vertex_count = edges;
  for (int i = 1; i <= edges; ++i)
    net.edges.push_back(Edge{i, i, i == edges ? 1 : i + 1, Rational(1)});
  return net;
}

inline std::string session_name(int source, const std::vector<int>& dests) {
  std::string id = std::to_string(source) + "->";
  if (dests.size() == 1) return id + std::to_string(dests.front());
  id += "{";
  for (size_t i = 0; i < dests.size(); ++i) {
    if (i) id += ",";
    id += std::to_string(dests[i]);
  }
  return id + "}";
}

// On an undirected network the subtree set of a session depends only on its
// terminal set, so AllMulticast emits one session per terminal set (lowest
// vertex as source) rather than one per (source, subset) pair.
inline std::vector<Session> ring_sessions(int edges, SessionPolicy policy) {
  const int n = edges;
  std::vector<Session> out;
  auto add = [&](int source, std::vector<int> dests) {
    std::sort(dests.begin(), dests.end());
    out.push_back(Session{session_name(source, dests), source, std::move(dests)});
  };
  switch (policy) {
    case SessionPolicy::UnicastBroadcast: {
      for (int s = 1; s <= n; ++s)
        for (int d = 1; d <= n; ++d)
          if (d != s) add(s, {d});
      for (int s = 1; s <= n; ++s) {
        std::vector<int> dests;
        for (int d = 1; d <= n; ++d)
          if (d != s) dests.push_back(d);
        add(s, std::move(dests));
      }
      break;
    }
    case SessionPolicy::AllMulticast: {
      if (n > 30) throw input_error("all-multicast policy limited to 30 vertices");
      for (uint32_t set = 0; set < (uint32_t(1) << n); ++set) {
        if (__builtin_popcount(set) < 2) continue;
        std::vector<int> members;
        for (int v = 1; v <= n; ++v)
          if (set >> (v - 1) & 1) members.push_back(v);
        std::vector<int> dests(members.begin() + 1, members.end());
        add(members.front(), std::move(dests));
      }
      break;
    }
    case SessionPolicy::StringMulticast: {
      // terminal sets that form a string of adjacent vertices
      for (int start = 1; start <= n; ++start)
        for (int len = 2; len <= n; ++len) {
          std::vector<int> members;
          for (int k = 0; k < len; ++k) members.push_back((start - 1 + k) % n + 1);
          std::sort(members.begin(), members.end());
          if (len == n && start > 1) continue;  // full set once
          std::vector<int> dests(members.begin() + 1, members.end());
          add(members.front(), std::move(dests));
        }
      break;
    }
  }
  return out;
}

inline Instance ring_instance(int edges, SessionPolicy policy) {
  return Instance::build(make_ring(edges), ring_sessions(edges, policy));
}

// The exponential distance function whose inequality no small-valued distance
// function can eliminate: g(e) = beta for e = 1 (mod 3), else 2^((e-2)/3
// rounded down), with beta = 2^((|E|-2)/3 rounded down).
inline DistanceFunction theorem4_g(int edges) {
  if (edges < 5) throw input_error("theorem4_g requires at least 5 edges");
  Int beta = Int(1) << ((edges - 2) / 3);
  DistanceFunction g;
  for (int e = 1; e <= edges; ++e) {
    if (e % 3 == 1)
      g.values.push_back(beta);
    else
      g.values.push_back(Int(1) << ((e - 2) / 3));
  }
  return g;
}

inline Int theorem4_beta(int edges) { return Int(1) << ((edges - 2) / 3); }

// Relations forced on any eliminator of theorem4_g:
//   (r1) every f(e), e = 1 (mod 3), equals max f
//   (r2) f(3s-4) + f(3s-3) = f(3s-1)   for s in 2..floor(|E|/3)
//   (r3) f(3s-4) = f(3s-3)             for s in 2..floor((|E|+1)/3)
inline bool verify_forced_relations(const DistanceFunction& f, int edges) {
  if (f.edge_count() != edges) throw input_error("wrong edge count");
  Int maxv = 0;
  for (const Int& v : f.values) maxv = std::max(maxv, v);
  for (int e = 1; e <= edges; ++e)
    if (e % 3 == 1 && f.at(e) != maxv) return false;
  for (int s = 2; s <= edges / 3; ++s)
    if (f.at(3 * s - 4) + f.at(3 * s - 3) != f.at(3 * s - 1)) return false;
  for (int s = 2; s <= (edges + 1) / 3; ++s)
    if (f.at(3 * s - 4) != f.at(3 * s - 3)) return false;
  return true;
}

inline bool is_proportional(const DistanceFunction& f,
                            const DistanceFunction& g) {
  // f = c * g for a positive rational c
  Rational c;
  bool have_c = false;
  for (size_t e = 0; e < f.values.size(); ++e) {
    const Int& fv = f.values[e];
    const Int& gv = g.values[e];
    if (gv == 0) {
      if (fv != 0) return false;
      continue;
    }
    Rational ratio(fv, gv);
    if (!have_c) {
      c = ratio;
      have_c = true;
    } else if (ratio != c) {
      return false;
    }
  }
  return have_c && c > 0;
}

struct Theorem4Result {
  bool ok = false;          // no eliminator besides scalar multiples of g
  uint64_t candidates = 0;  // nontrivial functions examined
  std::vector<DistanceFunction> proportional_eliminators;
  std::vector<DistanceFunction> other_eliminators;
};

// Exhaustive search for eliminators of theorem4_g among f with entries
// <= f_cap, under the all-multicast session policy.
inline Theorem4Result verify_theorem4(int edges, const Int& f_cap,
                                      uint64_t cap = kDefaultEnumerationCap) {
  if (f_cap < 0) throw input_error("f_cap must be nonnegative");
  {
    Int count = 1;
    for (int e = 0; e < edges; ++e) {
      count *= f_cap + 1;
      if (count > cap)
        throw resource_error("theorem 4 search exceeds enumeration cap");
    }
  }
  Instance inst = ring_instance(edges, SessionPolicy::AllMulticast);
  DistanceFunction g = theorem4_g(edges);
  ShortestProfile pg = ShortestProfile::build(inst, g);
  if (pg.trivial) throw internal_error("theorem4_g cannot be trivial");

  Theorem4Result out;
  std::vector<Int> v(size_t(edges), Int(0));
  while (detail::next_vector(v, f_cap)) {
    DistanceFunction f{v};
    if (f == g) continue;
    // fast elimination check against the precomputed g profile: every
    // g-shortest subtree must be f-shortest (support condition is vacuous,
    // g has no zero entries)
    bool ok = true;
    for (size_t i = 0; ok && i < inst.sessions.size(); ++i) {
      const auto& trees = inst.trees.per_session[i];
      Int best = subtree_length(f, trees.front());
      for (size_t j = 1; j < trees.size(); ++j)
        best = std::min(best, subtree_length(f, trees[j]));
      for (size_t j : pg.argmin[i])
        if (subtree_length(f, trees[j]) != best) {
          ok = false;
          break;
        }
    }
    if (!ok) continue;
    // candidate eliminates g unless trivial
    int positives = 0;
    for (const Int& x : v)
      if (x > 0) ++positives;
    if (positives == 0) continue;
    if (is_trivial_distance(inst, f)) continue;
    ++out.candidates;
    if (is_proportional(f, g))
      out.proportional_eliminators.push_back(f);
    else
      out.other_eliminators.push_back(f);
  }
  out.ok = out.other_eliminators.empty();
  return out;
}

// Extends theorem4_g along a maximum cycle; off-cycle edges get a distance
// large enough that no shortest subtree ever uses them when an on-cycle
// alternative exists.
inline DistanceFunction corollary5_embed(const Network& net,
                                         const std::vector<int>& cycle_edges) {
  const int len = int(cycle_edges.size());
  if (len < 5) throw input_error("cycle must have at least 5 edges");
  std::set<int> seen;
  for (int e : cycle_edges) {
    if (e < 1 || e > net.edge_count())
      throw input_error("cycle names invalid edge " + std::to_string(e));
    if (!seen.insert(e).second)
      throw input_error("cycle repeats edge " + std::to_string(e));
  }
  // consecutive cycle edges must chain through shared vertices and close up
  std::map<int, int> degree;
  for (int e : cycle_edges) {
    ++degree[net.edge(e).tail];
    ++degree[net.edge(e).head];
  }
  for (const auto& [v, d] : degree)
    if (d != 2) throw input_error("cycle edges do not form a closed cycle");
  for (int k = 0; k < len; ++k) {
    const Edge& a = net.edge(cycle_edges[size_t(k)]);
    const Edge& b = net.edge(cycle_edges[size_t((k + 1) % len)]);
    bool shares = a.tail == b.tail || a.tail == b.head || a.head == b.tail ||
                  a.head == b.head;
    if (!shares) throw input_error("cycle edges are not consecutive");
  }
  DistanceFunction on_cycle = theorem4_g(len);
  Int beta = theorem4_beta(len);
  Int off = 1 + Int(len) * beta;
  DistanceFunction f;
  f.values.assign(size_t(net.edge_count()), off);
  for (int k = 0; k < len; ++k)
    f.values[size_t(cycle_edges[size_t(k)]) - 1] = on_cycle.values[size_t(k)];
  return f;
}

// phi-rounding: f(e) = g(e) - (g(e) mod phi) with phi = floor(gmax / |E|^m).
inline DistanceFunction theorem7_round(const DistanceFunction& g, int m) {
  if (m < 1) throw input_error("m must be positive");
  Int gmax = 0;
  for (const Int& v : g.values) gmax = std::max(gmax, v);
  Int em = 1;
  for (int k = 0; k < m; ++k) em *= g.edge_count();
  Int phi = gmax / em;
  if (phi == 0) throw input_error("phi = 0: gmax below |E|^m");
  DistanceFunction f;
  for (const Int& v : g.values) f.values.push_back(v - v % phi);
  return f;
}

// For every ordered pair of edge-disjoint arcs, g-sum order must carry over
// to f-sum order.
inline bool order_preserving(const DistanceFunction& f,
                             const DistanceFunction& g,
                             const std::vector<Subtree>& arcs) {
  std::vector<Int> fs, gs;
  for (const Subtree& a : arcs) {
    fs.push_back(subtree_length(f, a));
    gs.push_back(subtree_length(g, a));
  }
  for (size_t i = 0; i < arcs.size(); ++i)
    for (size_t j = 0; j < arcs.size(); ++j) {
      if (i == j || (arcs[i].mask & arcs[j].mask)) continue;
      if (gs[i] <= gs[j] && fs[i] > fs[j]) return false;
    }
  return true;
}

// Deterministic splitmix64-based generator with rejection sampling, so the
// draw over {0..bound} is exact and reproducible.
class SeededRng {
 public:
  explicit SeededRng(uint64_t seed) : state_(seed) {}

  uint64_t next64() {
    uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  // uniform over {0, ..., bound} inclusive
  Int uniform(const Int& bound) {
    if (bound < 0) throw input_error("negative sampling bound");
    if (bound == 0) return 0;
    unsigned bits = boost::multiprecision::msb(bound) + 1;
    for (;;) {
      Int x = 0;
      unsigned remaining = bits;
      while (remaining > 0) {
        unsigned take = remaining >= 64 ? 64 : remaining;
        uint64_t w = next64();
        if (take < 64) w &= (uint64_t(1) << take) - 1;
        x = (x << take) | Int(w);
        remaining -= take;
      }
      if (x <= bound) return x;
    }
  }

 private:
  uint64_t state_;
};

struct RingSpec {
  int edge_count = 0;
  SessionPolicy policy = SessionPolicy::AllMulticast;
};

struct RoundingParams {
  int m = 6;
  Int g_max;
  int trials = 0;
  uint64_t seed = 0;
};

struct Theorem7Report {
  int edge_count = 0;
  int m = 0;
  Int g_max;
  Int phi;
  Rational g_star;
  int trials = 0;
  uint64_t seed = 0;
  int successes = 0;
  int order_failures = 0;
  int trivial_thm7 = 0;   // fewer than two positive entries after rounding
  int trivial_sec23 = 0;  // no session with positive shortest length
  Rational empirical;
  Rational paper_bound;
};

inline Theorem7Report theorem7_experiment(const RingSpec& spec,
                                          const RoundingParams& params) {
  const int n = spec.edge_count;
  if (n < 3) throw input_error("ring needs at least 3 edges");
  if (params.m < 6) throw input_error("theorem 7 requires m >= 6");
  if (params.trials < 1) throw input_error("need at least one trial");
  Int em = 1;
  for (int k = 0; k < params.m; ++k) em *= n;
  Int phi = params.g_max / em;
  if (phi == 0) throw input_error("phi = 0: g_max below |E|^m");
  Rational g_star = Rational(em) / (1 - Rational(em) / Rational(params.g_max));
  if (Rational(params.g_max) <= g_star)
    throw input_error("g_max must exceed g* = |E|^m / (1 - |E|^m / g_max)");

  Network ring = make_ring(n);
  std::vector<Subtree> arcs = enumerate_arc_intervals(ring);

  Theorem7Report rep;
  rep.edge_count = n;
  rep.m = params.m;
  rep.g_max = params.g_max;
  rep.phi = phi;
  rep.g_star = g_star;
  rep.trials = params.trials;
  rep.seed = params.seed;
  Int e_pow_m5 = 1;
  for (int k = 0; k < params.m - 5; ++k) e_pow_m5 *= n;
  Int e_pow_big = 1;
  for (int k = 0; k < params.m * (n - 1); ++k) e_pow_big *= n;
  rep.paper_bound = 1 - Rational(4, e_pow_m5) - Rational(1, e_pow_big);

  const Int phi_e = phi * n;
  for (int trial = 0; trial < params.trials; ++trial) {
    SeededRng rng(params.seed + uint64_t(trial) * 0x9E3779B97F4A7C15ull);
    DistanceFunction g;
    for (int e = 1; e < n; ++e) g.values.push_back(rng.uniform(params.g_max));
    g.values.push_back(params.g_max);  // g(|E|) = g_max
    DistanceFunction f = theorem7_round(g, params.m);

    // rounding residual invariant, on every evaluated pair
    std::vector<Int> fs, gs;
    for (const Subtree& a : arcs) {
      fs.push_back(subtree_length(f, a));
      gs.push_back(subtree_length(g, a));
    }
    bool order_ok = true;
    for (size_t i = 0; i < arcs.size(); ++i)
      for (size_t j = 0; j < arcs.size(); ++j) {
        if (i == j || (arcs[i].mask & arcs[j].mask)) continue;
        Int delta_g = gs[i] - gs[j];
        Int delta_f = fs[i] - fs[j];
        if (boost::multiprecision::abs(delta_g - delta_f) >= phi_e)
          throw internal_error("rounding residual bound violated");
        if (delta_g <= 0 && delta_f > 0) order_ok = false;
      }

    int positives = 0;
    Int f_max = 0;
    for (const Int& v : f.values) {
      if (v > 0) ++positives;
      f_max = std::max(f_max, v);
    }
    bool nontrivial_thm7 = positives >= 2;
    // On an all-multicast ring a distance function yields a positive shortest
    // length for some session exactly when it has two positive entries (a
    // single positive edge sits inside one gap of every terminal set).
    bool nontrivial_sec23 = positives >= 2;
    bool scaled_small = Rational(f_max) / Rational(phi) <= g_star;

    if (!order_ok) ++rep.order_failures;
    if (!nontrivial_thm7) ++rep.trivial_thm7;
    if (!nontrivial_sec23) ++rep.trivial_sec23;
    if (order_ok && nontrivial_thm7 && scaled_small) ++rep.successes;
  }
  rep.empirical = Rational(rep.successes, rep.trials);
  return rep;
}

inline nlohmann::json theorem7_report_to_json(const Theorem7Report& rep) {
  return nlohmann::json{{"edge_count", rep.edge_count},
                        {"m", rep.m},
                        {"g_max", format_int(rep.g_max)},
                        {"phi", format_int(rep.phi)},
                        {"g_star", format_rational(rep.g_star)},
                        {"trials", rep.trials},
                        {"seed", rep.seed},
                        {"successes", rep.successes},
                        {"order_failures", rep.order_failures},
                        {"trivial_thm7", rep.trivial_thm7},
                        {"trivial_sec23", rep.trivial_sec23},
                        {"empirical", format_rational(rep.empirical)},
                        {"paper_bound", format_rational(rep.paper_bound)}};
}

}  // namespace rcap
