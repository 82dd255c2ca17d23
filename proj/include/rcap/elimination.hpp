#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "rcap/japanese.hpp"
#include "rcap/network.hpp"
#include "rcap/simplex.hpp"

namespace rcap {

inline bool is_trivial_distance(const Instance& inst,
                                const DistanceFunction& f) {
  for (size_t i = 0; i < inst.sessions.size(); ++i)
    if (shortest_set(f, inst.trees.per_session[i]).length > 0) return false;
  return true;
}

// Elimination Theorem predicate: the inequality of g is redundant given the
// inequality of f, for any assignment of capacities. True iff
//   1. f(e) = 0 wherever g(e) = 0, and
//   2. every g-shortest subtree of every session is also f-shortest.
inline bool eliminates(const Instance& inst, const DistanceFunction& f,
                       const DistanceFunction& g) {
  if (f.edge_count() != inst.net.edge_count() ||
      g.edge_count() != inst.net.edge_count())
    throw input_error("distance function has wrong edge count");
  if (f == g) throw input_error("eliminates requires distinct distance functions");
  if (is_trivial_distance(inst, f) || is_trivial_distance(inst, g))
    throw input_error("eliminates requires nontrivial distance functions");
  for (int e = 1; e <= inst.net.edge_count(); ++e)
    if (g.at(e) == 0 && f.at(e) != 0) return false;
  for (size_t i = 0; i < inst.sessions.size(); ++i) {
    const auto& trees = inst.trees.per_session[i];
    ShortestSet sg = shortest_set(g, trees);
    ShortestSet sf = shortest_set(f, trees);
    // g's argmin set must be contained in f's
    size_t k = 0;
    for (size_t j : sg.argmin) {
      while (k < sf.argmin.size() && sf.argmin[k] < j) ++k;
      if (k == sf.argmin.size() || sf.argmin[k] != j) return false;
    }
  }
  return true;
}

// Precomputed data sufficient to evaluate the elimination predicate:
// the zero set of the distance function and the per-session argmin sets.
struct ShortestProfile {
  uint64_t zero_mask = 0;  // bit e-1 set iff value 0 on edge e
  std::vector<std::vector<size_t>> argmin;
  bool trivial = true;

  static ShortestProfile build(const Instance& inst,
                               const DistanceFunction& f) {
    ShortestProfile p;
    for (int e = 1; e <= f.edge_count(); ++e)
      if (f.at(e) == 0) p.zero_mask |= uint64_t(1) << (e - 1);
    for (const auto& trees : inst.trees.per_session) {
      ShortestSet ss = shortest_set(f, trees);
      if (ss.length > 0) p.trivial = false;
      p.argmin.push_back(std::move(ss.argmin));
    }
    return p;
  }
};

// eliminates() on precomputed profiles; both must be nontrivial and distinct.
inline bool profile_eliminates(const ShortestProfile& f,
                               const ShortestProfile& g) {
  if (g.zero_mask & ~f.zero_mask) return false;  // f(e)=0 wherever g(e)=0
  for (size_t i = 0; i < f.argmin.size(); ++i) {
    const auto& fa = f.argmin[i];
    size_t k = 0;
    for (size_t j : g.argmin[i]) {
      while (k < fa.size() && fa[k] < j) ++k;
      if (k == fa.size() || fa[k] != j) return false;
    }
  }
  return true;
}

struct DescriptionEntry {
  Inequality normalized;
  DistanceFunction representative;  // first enumerated f with this normal form
  std::vector<DistanceFunction> eliminated;  // candidates this entry removed
};

struct Description {
  std::vector<DescriptionEntry> inequalities;
  Int max_distance;
  uint64_t enumerated = 0;
};

inline constexpr uint64_t kDefaultEnumerationCap = 20'000'000;

namespace detail {

inline std::string normal_form_key(const Inequality& iq) {
  std::string key;
  for (const Int& c : iq.coefficients) key += c.str() + ",";
  key += "|" + format_rational(iq.rhs);
  return key;
}

// Odometer over {0..lambda}^E in lexicographic order.
inline bool next_vector(std::vector<Int>& v, const Int& lambda) {
  for (size_t k = v.size(); k-- > 0;) {
    if (v[k] < lambda) {
      ++v[k];
      for (size_t j = k + 1; j < v.size(); ++j) v[j] = 0;
      return true;
    }
  }
  return false;
}

}  // namespace detail

// Enumerates all distance functions with entries in {0..lambda}, dedupes by
// normal form, and removes every inequality eliminated by another candidate.
// Output sorted lexicographically by normalized coefficient vector.
inline Description minimal_description(const Instance& inst, const Int& lambda,
                                       uint64_t cap = kDefaultEnumerationCap) {
  if (lambda < 1) throw input_error("max distance must be >= 1");
  const int m = inst.net.edge_count();
  {
    // candidate count (lambda+1)^|E| against the cap
    Int count = 1;
    for (int e = 0; e < m; ++e) {
      count *= lambda + 1;
      if (count > cap)
        throw resource_error("enumeration of " + Int(lambda + 1).str() + "^" +
                             std::to_string(m) + " distance functions exceeds cap " +
                             std::to_string(cap));
    }
  }
  struct Candidate {
    Inequality normalized;
    DistanceFunction rep;
  };
  std::map<std::string, Candidate> by_key;
  std::vector<std::string> key_order;
  std::vector<Int> v(size_t(m), Int(0));
  uint64_t enumerated = 0;
  while (detail::next_vector(v, lambda)) {
    ++enumerated;
    DistanceFunction f{v};
    Inequality iq = make_inequality(inst, f);
    if (iq.trivial()) continue;
    Inequality norm = normalize_inequality(iq);
    std::string key = detail::normal_form_key(norm);
    if (!by_key.count(key)) {
      by_key.emplace(key, Candidate{std::move(norm), f});
      key_order.push_back(std::move(key));
    }
  }
  // Pairwise elimination among normal-form representatives. A candidate
  // survives iff no other candidate eliminates it; dedup guarantees mutual
  // elimination cannot occur between distinct normal forms.
  std::map<std::string, ShortestProfile> profiles;
  for (const auto& key : key_order)
    profiles.emplace(key, ShortestProfile::build(inst, by_key.at(key).rep));
  std::map<std::string, std::string> eliminated_by;  // victim key -> eliminator
  for (const auto& a : key_order)
    for (const auto& b : key_order) {
      if (a == b || eliminated_by.count(b)) continue;
      if (profile_eliminates(profiles.at(a), profiles.at(b)))
        eliminated_by.emplace(b, a);
    }
  Description out;
  out.max_distance = lambda;
  out.enumerated = enumerated;
  for (const auto& key : key_order) {
    if (eliminated_by.count(key)) continue;
    DescriptionEntry entry;
    entry.normalized = by_key.at(key).normalized;
    entry.representative = by_key.at(key).rep;
    for (const auto& [victim, eliminator] : eliminated_by)
      if (eliminator == key)
        entry.eliminated.push_back(by_key.at(victim).rep);
    out.inequalities.push_back(std::move(entry));
  }
  std::sort(out.inequalities.begin(), out.inequalities.end(),
            [](const DescriptionEntry& x, const DescriptionEntry& y) {
              return x.normalized.coefficients < y.normalized.coefficients;
            });
  return out;
}

// Homogeneous system A g <= 0 over edge variables whose integral nonnegative
// solutions are the distance vectors able to eliminate f: rows
// L_g(T) - L_g(T') <= 0 for every f-shortest T against every other subtree,
// -g(e) <= 0 for all e, and g(e) <= 0 where f(e) = 0. All entries in
// {0, +1, -1}.
struct EliminationSystem {
  std::vector<std::vector<int>> rows;  // row . g <= 0
  std::vector<std::string> labels;

  bool satisfied_by(const DistanceFunction& g) const {
    for (const auto& row : rows) {
      Int sum = 0;
      for (size_t e = 0; e < row.size(); ++e)
        if (row[e] != 0) sum += Int(row[e]) * g.values[e];
      if (sum > 0) return false;
    }
    return true;
  }
};

inline EliminationSystem build_elimination_system(const Instance& inst,
                                                  const DistanceFunction& f) {
  if (is_trivial_distance(inst, f))
    throw input_error("elimination system requires a nontrivial distance function");
  const int m = inst.net.edge_count();
  EliminationSystem sys;
  for (int e = 1; e <= m; ++e) sys.labels.push_back("g(" + std::to_string(e) + ")");
  std::set<std::vector<int>> seen;
  auto add = [&](std::vector<int> row) {
    if (std::all_of(row.begin(), row.end(), [](int v) { return v == 0; })) return;
    if (seen.insert(row).second) sys.rows.push_back(std::move(row));
  };
  for (size_t i = 0; i < inst.sessions.size(); ++i) {
    const auto& trees = inst.trees.per_session[i];
    ShortestSet sf = shortest_set(f, trees);
    for (size_t j : sf.argmin) {
      for (size_t k = 0; k < trees.size(); ++k) {
        if (k == j) continue;
        std::vector<int> row(size_t(m), 0);
        for (int e : trees[j].edge_ids) row[size_t(e) - 1] += 1;
        for (int e : trees[k].edge_ids) row[size_t(e) - 1] -= 1;
        add(std::move(row));
      }
    }
  }
  for (int e = 1; e <= m; ++e) {
    std::vector<int> row(size_t(m), 0);
    row[size_t(e) - 1] = -1;
    add(std::move(row));
    if (f.at(e) == 0) {
      std::vector<int> support(size_t(m), 0);
      support[size_t(e) - 1] = 1;
      add(std::move(support));
    }
  }
  if (!sys.satisfied_by(f))
    throw internal_error("seed distance function must solve its own system");
  return sys;
}

struct Theorem6Result {
  bool within_bound = false;
  SizeReport max_entry_size;
  Int bound_bits;
  std::vector<Int> integral_solution;
};

// Finds a small rational solution of the elimination system by LP over the
// box 0 <= g <= 1, scales it integral by the lcm of denominators, and checks
// the max entry against the 24|E|^3 + 8|E|^2 bit bound.
inline Theorem6Result check_theorem6_bound(const Instance& inst,
                                           const DistanceFunction& f) {
  EliminationSystem sys = build_elimination_system(inst, f);
  const size_t m = size_t(inst.net.edge_count());
  Lp lp;
  lp.num_vars = m;
  lp.objective.assign(m, Rational(1));
  for (const auto& row : sys.rows) {
    std::vector<Rational> a(m, Rational(0));
    for (size_t e = 0; e < m; ++e) a[e] = row[e];
    lp.add_row(std::move(a), Rel::Le, Rational(0));
  }
  for (size_t e = 0; e < m; ++e) {
    std::vector<Rational> a(m, Rational(0));
    a[e] = 1;
    lp.add_row(std::move(a), Rel::Le, Rational(1));
  }
  LpResult res = solve_lp(lp);
  if (res.status != LpStatus::Optimal)
    throw internal_error("theorem 6 LP must have a finite optimum");
  Theorem6Result out;
  Int scale = 1;
  for (const Rational& x : res.x)
    scale = boost::multiprecision::lcm(scale, denominator(x));
  bool all_zero = true;
  for (const Rational& x : res.x) {
    Rational scaled = x * Rational(scale);
    if (denominator(scaled) != 1)
      throw internal_error("scaling by lcm must clear denominators");
    out.integral_solution.push_back(numerator(scaled));
    if (numerator(scaled) != 0) all_zero = false;
  }
  if (all_zero) out.integral_solution = f.values;  // f is always a solution
  if (!sys.satisfied_by(DistanceFunction{out.integral_solution}))
    throw internal_error("integral solution must satisfy the system");
  Int max_entry = 0;
  for (const Int& v : out.integral_solution) max_entry = std::max(max_entry, v);
  out.max_entry_size = size_of_rational(Rational(max_entry));
  Int edges = inst.net.edge_count();
  out.bound_bits = 24 * edges * edges * edges + 8 * edges * edges;
  out.within_bound = out.max_entry_size.bits <= out.bound_bits;
  return out;
}

inline nlohmann::json description_to_json(const Description& desc) {
  nlohmann::json survivors = nlohmann::json::array();
  for (const auto& entry : desc.inequalities) {
    nlohmann::json j = inequality_to_json(entry.normalized);
    nlohmann::json rep = nlohmann::json::array();
    for (const Int& v : entry.representative.values) rep.push_back(format_int(v));
    j["representative_distance"] = rep;
    nlohmann::json victims = nlohmann::json::array();
    for (const auto& e : entry.eliminated) {
      nlohmann::json v = nlohmann::json::array();
      for (const Int& x : e.values) v.push_back(format_int(x));
      victims.push_back(v);
    }
    j["eliminated"] = victims;
    survivors.push_back(std::move(j));
  }
  return nlohmann::json{{"max_distance", format_int(desc.max_distance)},
                        {"enumerated", desc.enumerated},
                        {"survivors", survivors}};
}

}  // namespace rcap
