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

// Rational inequality system: every row is a . x <= b (equalities are two
// opposite rows).
struct LinearSystem {
  std::vector<std::string> labels;
  std::vector<std::vector<Rational>> rows;  // row i: coefficients then... a only
  std::vector<Rational> rhs;

  size_t num_vars() const { return labels.size(); }

  void add_le(std::vector<Rational> a, Rational b) {
    rows.push_back(std::move(a));
    rhs.push_back(std::move(b));
  }
  void add_eq(const std::vector<Rational>& a, const Rational& b) {
    std::vector<Rational> neg(a.size());
    for (size_t j = 0; j < a.size(); ++j) neg[j] = -a[j];
    add_le(a, b);
    add_le(std::move(neg), -b);
  }

  SizeReport size() const { return size_of_system(rows, rhs); }
};

struct FmOptions {
  size_t row_cap = 50'000;
  bool lp_prune = true;  // exact-LP redundancy removal after each round
};

struct ProjectedRegion {
  std::vector<std::string> labels;
  std::vector<std::vector<Rational>> rows;
  std::vector<Rational> rhs;
  size_t source_rows = 0;
  size_t source_vars = 0;
};

namespace detail {

// Scale a row to coprime integer coefficients; drops redundant constant rows,
// throws on an inconsistent one (0 <= b with b < 0).
inline bool normalize_fm_row(std::vector<Rational>& a, Rational& b) {
  Int l = 1;
  for (const Rational& v : a) l = boost::multiprecision::lcm(l, denominator(v));
  l = boost::multiprecision::lcm(l, denominator(b));
  Int g = 0;
  for (Rational& v : a) {
    v *= Rational(l);
    g = boost::multiprecision::gcd(g, numerator(v));
  }
  b *= Rational(l);
  if (g == 0) {
    if (b < 0)
      throw input_error("system is infeasible (0 <= negative constant)");
    return false;  // vacuous row
  }
  for (Rational& v : a) v /= Rational(g);
  b /= Rational(g);
  return true;
}

// max a.x over the rows (variables free); true iff the row a.x <= b is
// implied.
inline bool row_implied(const std::vector<std::vector<Rational>>& rows,
                        const std::vector<Rational>& rhs, size_t skip,
                        const std::vector<Rational>& a, const Rational& b) {
  Lp lp;
  lp.num_vars = a.size();
  lp.free_var.assign(a.size(), true);
  lp.objective = a;
  for (size_t i = 0; i < rows.size(); ++i) {
    if (i == skip) continue;
    lp.add_row(rows[i], Rel::Le, rhs[i]);
  }
  LpResult res = solve_lp(lp);
  if (res.status == LpStatus::Infeasible) return true;  // empty region
  return res.status == LpStatus::Optimal && res.value <= b;
}

inline void lp_prune(std::vector<std::vector<Rational>>& rows,
                     std::vector<Rational>& rhs) {
  for (size_t i = 0; i < rows.size();) {
    if (row_implied(rows, rhs, i, rows[i], rhs[i])) {
      rows.erase(rows.begin() + long(i));
      rhs.erase(rhs.begin() + long(i));
    } else {
      ++i;
    }
  }
}

inline void dedupe_rows(std::vector<std::vector<Rational>>& rows,
                        std::vector<Rational>& rhs) {
  // identical coefficient vectors keep only the tightest rhs
  std::map<std::vector<Rational>, size_t> best;
  std::vector<std::vector<Rational>> nr;
  std::vector<Rational> nb;
  for (size_t i = 0; i < rows.size(); ++i) {
    auto it = best.find(rows[i]);
    if (it == best.end()) {
      best.emplace(rows[i], nr.size());
      nr.push_back(rows[i]);
      nb.push_back(rhs[i]);
    } else if (rhs[i] < nb[it->second]) {
      nb[it->second] = rhs[i];
    }
  }
  rows = std::move(nr);
  rhs = std::move(nb);
}

}  // namespace detail

// Projects the solution set of sys onto the variables in `keep` by
// Fourier-Motzkin elimination, with redundancy removal after each round.
inline ProjectedRegion fm_project(const LinearSystem& sys,
                                  const std::vector<size_t>& keep,
                                  const FmOptions& opt = {}) {
  const size_t n = sys.num_vars();
  std::vector<char> keep_flag(n, 0);
  for (size_t k : keep) keep_flag.at(k) = 1;

  std::vector<std::vector<Rational>> rows;
  std::vector<Rational> rhs;
  for (size_t i = 0; i < sys.rows.size(); ++i) {
    std::vector<Rational> a = sys.rows[i];
    Rational b = sys.rhs[i];
    if (detail::normalize_fm_row(a, b)) {
      rows.push_back(std::move(a));
      rhs.push_back(std::move(b));
    }
  }
  detail::dedupe_rows(rows, rhs);

  std::vector<size_t> to_eliminate;
  for (size_t v = 0; v < n; ++v)
    if (!keep_flag[v]) to_eliminate.push_back(v);

  std::set<size_t> pending(to_eliminate.begin(), to_eliminate.end());
  while (!pending.empty()) {
    // greedy: eliminate the variable minimizing the pos*neg product
    size_t var = SIZE_MAX;
    size_t best_score = SIZE_MAX;
    for (size_t v : pending) {
      size_t pos = 0, neg = 0;
      for (const auto& row : rows) {
        if (row[v] > 0) ++pos;
        if (row[v] < 0) ++neg;
      }
      size_t score = pos * neg + pos + neg;
      if (score < best_score) {
        best_score = score;
        var = v;
      }
    }
    pending.erase(var);

    std::vector<std::vector<Rational>> next;
    std::vector<Rational> next_rhs;
    std::vector<size_t> pos, neg;
    for (size_t i = 0; i < rows.size(); ++i) {
      if (rows[i][var] > 0)
        pos.push_back(i);
      else if (rows[i][var] < 0)
        neg.push_back(i);
      else {
        next.push_back(rows[i]);
        next_rhs.push_back(rhs[i]);
      }
    }
    for (size_t p : pos)
      for (size_t q : neg) {
        // a_p/c_p + a_q/(-c_q), scaled to cancel var
        Rational cp = rows[p][var], cq = -rows[q][var];
        std::vector<Rational> a(rows[p].size());
        for (size_t j = 0; j < a.size(); ++j)
          a[j] = rows[p][j] * cq + rows[q][j] * cp;
        Rational b = rhs[p] * cq + rhs[q] * cp;
        if (detail::normalize_fm_row(a, b)) {
          next.push_back(std::move(a));
          next_rhs.push_back(std::move(b));
        }
        if (next.size() > opt.row_cap)
          throw resource_error("Fourier-Motzkin row cap exceeded (" +
                               std::to_string(opt.row_cap) + ")");
      }
    detail::dedupe_rows(next, next_rhs);
    if (opt.lp_prune) detail::lp_prune(next, next_rhs);
    rows = std::move(next);
    rhs = std::move(next_rhs);
  }

  if (opt.lp_prune) detail::lp_prune(rows, rhs);

  // restrict to the kept coordinates, in `keep` order
  ProjectedRegion region;
  region.source_rows = sys.rows.size();
  region.source_vars = n;
  for (size_t k : keep) region.labels.push_back(sys.labels[k]);
  for (size_t i = 0; i < rows.size(); ++i) {
    std::vector<Rational> a;
    for (size_t k : keep) a.push_back(rows[i][k]);
    region.rows.push_back(std::move(a));
    region.rhs.push_back(rhs[i]);
  }
  // deterministic order
  std::vector<size_t> order(region.rows.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](size_t x, size_t y) {
    if (region.rows[x] != region.rows[y]) return region.rows[x] < region.rows[y];
    return region.rhs[x] < region.rhs[y];
  });
  ProjectedRegion sorted = region;
  for (size_t i = 0; i < order.size(); ++i) {
    sorted.rows[i] = region.rows[order[i]];
    sorted.rhs[i] = region.rhs[order[i]];
  }
  return sorted;
}

// Builds the subtree-flow system of the instance (flow conservation per
// session, edge capacities, nonnegativity) and projects out the flow
// variables, leaving the exact capacity region over session rates.
inline ProjectedRegion region_from_network(const Instance& inst,
                                           const FmOptions& opt = {}) {
  LinearSystem sys;
  std::vector<size_t> flow_base;
  for (size_t i = 0; i < inst.sessions.size(); ++i) {
    flow_base.push_back(sys.labels.size());
    const auto& trees = inst.trees.per_session[i];
    for (size_t j = 0; j < trees.size(); ++j)
      sys.labels.push_back("r[" + inst.sessions[i].id + "#" + std::to_string(j) + "]");
  }
  std::vector<size_t> rate_vars;
  for (const Session& s : inst.sessions) {
    rate_vars.push_back(sys.labels.size());
    sys.labels.push_back(s.id);
  }
  const size_t n = sys.labels.size();
  for (size_t i = 0; i < inst.sessions.size(); ++i) {
    std::vector<Rational> a(n, Rational(0));
    for (size_t j = 0; j < inst.trees.per_session[i].size(); ++j)
      a[flow_base[i] + j] = 1;
    a[rate_vars[i]] = -1;
    sys.add_eq(a, Rational(0));
  }
  for (const Edge& e : inst.net.edges) {
    std::vector<Rational> a(n, Rational(0));
    for (size_t i = 0; i < inst.sessions.size(); ++i) {
      const auto& trees = inst.trees.per_session[i];
      for (size_t j = 0; j < trees.size(); ++j)
        if (trees[j].mask >> (e.id - 1) & 1) a[flow_base[i] + j] = 1;
    }
    sys.add_le(std::move(a), e.capacity);
  }
  for (size_t i = 0; i < inst.sessions.size(); ++i)
    for (size_t j = 0; j < inst.trees.per_session[i].size(); ++j) {
      std::vector<Rational> a(n, Rational(0));
      a[flow_base[i] + j] = -1;
      sys.add_le(std::move(a), Rational(0));
    }
  return fm_project(sys, rate_vars, opt);
}

namespace detail {

// true iff a.x <= b holds everywhere on {rows, x >= 0}
inline bool valid_over(const std::vector<std::vector<Rational>>& rows,
                       const std::vector<Rational>& rhs,
                       const std::vector<Rational>& a, const Rational& b) {
  Lp lp;
  lp.num_vars = a.size();
  lp.objective = a;
  for (size_t i = 0; i < rows.size(); ++i) lp.add_row(rows[i], Rel::Le, rhs[i]);
  LpResult res = solve_lp(lp);
  if (res.status == LpStatus::Infeasible) return true;
  return res.status == LpStatus::Optimal && res.value <= b;
}

}  // namespace detail

// Do the oracle region and a Japanese inequality set cut out the same
// polytope (both intersected with the nonnegative orthant)?
inline bool regions_equal(const ProjectedRegion& region,
                          const std::vector<Inequality>& ineqs) {
  std::vector<std::vector<Rational>> b_rows;
  std::vector<Rational> b_rhs;
  for (const Inequality& iq : ineqs) {
    if (iq.session_ids != region.labels)
      throw input_error("regions_equal requires the same session universe");
    std::vector<Rational> a;
    for (const Int& c : iq.coefficients) a.push_back(Rational(c));
    b_rows.push_back(std::move(a));
    b_rhs.push_back(iq.rhs);
  }
  for (size_t i = 0; i < region.rows.size(); ++i)
    if (!detail::valid_over(b_rows, b_rhs, region.rows[i], region.rhs[i]))
      return false;
  for (size_t i = 0; i < b_rows.size(); ++i)
    if (!detail::valid_over(region.rows, region.rhs, b_rows[i], b_rhs[i]))
      return false;
  return true;
}

inline nlohmann::json region_to_json(const ProjectedRegion& region) {
  nlohmann::json rows = nlohmann::json::array();
  for (size_t i = 0; i < region.rows.size(); ++i) {
    nlohmann::json coeffs = nlohmann::json::object();
    for (size_t j = 0; j < region.labels.size(); ++j)
      coeffs[region.labels[j]] = format_rational(region.rows[i][j]);
    rows.push_back(nlohmann::json{{"coefficients", coeffs},
                                  {"rhs", format_rational(region.rhs[i])}});
  }
  return nlohmann::json{{"source", "oracle"},
                        {"source_vars", region.source_vars},
                        {"source_rows", region.source_rows},
                        {"inequalities", rows}};
}

}  // namespace rcap
