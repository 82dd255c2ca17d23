#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "rcap/japanese.hpp"
#include "rcap/network.hpp"
#include "rcap/simplex.hpp"

namespace rcap {

// Session rates, aligned with the instance's session list.
struct RateTuple {
  std::vector<Rational> rates;

  bool all_nonnegative() const {
    for (const Rational& r : rates)
      if (r < 0) return false;
    return true;
  }
};

// flows[i][j] = flow of session i on its j-th subtree.
struct FlowAssignment {
  std::vector<std::vector<Rational>> flows;
};

struct FeasibilityResult {
  bool feasible = false;
  std::optional<FlowAssignment> witness;
  std::vector<Rational> certificate;  // verified Farkas multipliers, row order:
                                      // session equalities then edge capacities
};

namespace detail {

// Variables: one flow per (session, subtree), flattened session-major.
inline Lp flow_lp(const Instance& inst, size_t extra_vars = 0) {
  Lp lp;
  lp.num_vars = extra_vars;
  for (const auto& trees : inst.trees.per_session) lp.num_vars += trees.size();
  return lp;
}

inline size_t flow_var_base(const Instance& inst, size_t session,
                            size_t extra_vars = 0) {
  size_t base = extra_vars;
  for (size_t i = 0; i < session; ++i)
    base += inst.trees.per_session[i].size();
  return base;
}

inline void add_capacity_rows(const Instance& inst, Lp& lp, size_t extra_vars,
                              const DistanceFunction* saturate_for = nullptr) {
  for (const Edge& e : inst.net.edges) {
    std::vector<Rational> a(lp.num_vars, Rational(0));
    for (size_t i = 0; i < inst.sessions.size(); ++i) {
      size_t base = flow_var_base(inst, i, extra_vars);
      const auto& trees = inst.trees.per_session[i];
      for (size_t j = 0; j < trees.size(); ++j)
        if (trees[j].mask >> (e.id - 1) & 1) a[base + j] = 1;
    }
    Rel rel = Rel::Le;
    if (saturate_for != nullptr && saturate_for->at(e.id) > 0) rel = Rel::Eq;
    lp.add_row(std::move(a), rel, e.capacity);
  }
}

inline FlowAssignment extract_flows(const Instance& inst,
                                    const std::vector<Rational>& x,
                                    size_t extra_vars = 0) {
  FlowAssignment fa;
  size_t k = extra_vars;
  for (const auto& trees : inst.trees.per_session) {
    fa.flows.emplace_back();
    for (size_t j = 0; j < trees.size(); ++j) fa.flows.back().push_back(x[k++]);
  }
  return fa;
}

}  // namespace detail

// Independent re-check of a witness against the flow invariants.
inline bool validate_assignment(const Instance& inst, const RateTuple& r,
                                const FlowAssignment& fa) {
  if (fa.flows.size() != inst.sessions.size()) return false;
  for (size_t i = 0; i < inst.sessions.size(); ++i) {
    const auto& trees = inst.trees.per_session[i];
    if (fa.flows[i].size() != trees.size()) return false;
    Rational sum = 0;
    for (const Rational& v : fa.flows[i]) {
      if (v < 0) return false;
      sum += v;
    }
    if (sum != r.rates[i]) return false;
  }
  for (const Edge& e : inst.net.edges) {
    Rational load = 0;
    for (size_t i = 0; i < inst.sessions.size(); ++i) {
      const auto& trees = inst.trees.per_session[i];
      for (size_t j = 0; j < trees.size(); ++j)
        if (trees[j].mask >> (e.id - 1) & 1) load += fa.flows[i][j];
    }
    if (load > e.capacity) return false;
  }
  return true;
}

inline FeasibilityResult is_feasible(const Instance& inst, const RateTuple& r) {
  if (r.rates.size() != inst.sessions.size())
    throw input_error("rate tuple has wrong session count");
  if (!r.all_nonnegative()) throw input_error("negative rate");
  Lp lp = detail::flow_lp(inst);
  for (size_t i = 0; i < inst.sessions.size(); ++i) {
    std::vector<Rational> a(lp.num_vars, Rational(0));
    size_t base = detail::flow_var_base(inst, i);
    for (size_t j = 0; j < inst.trees.per_session[i].size(); ++j) a[base + j] = 1;
    lp.add_row(std::move(a), Rel::Eq, r.rates[i]);
  }
  detail::add_capacity_rows(inst, lp, 0);
  LpResult res = solve_lp(lp);
  FeasibilityResult out;
  if (res.status == LpStatus::Optimal) {
    out.feasible = true;
    out.witness = detail::extract_flows(inst, res.x);
    if (!validate_assignment(inst, r, *out.witness))
      throw internal_error("feasibility witness failed re-validation");
  } else if (res.status == LpStatus::Infeasible) {
    out.feasible = false;
    out.certificate = res.farkas;  // already verified by the solver
  } else {
    throw internal_error("feasibility LP cannot be unbounded");
  }
  return out;
}

struct MaxAlongResult {
  Rational t;  // optimal scale
  FlowAssignment flows;
  RateTuple rates;  // t * direction
};

// Maximize t subject to t * direction being feasible; the resulting point
// lies on the boundary of the region.
inline MaxAlongResult max_along(const Instance& inst,
                                const std::vector<Rational>& direction) {
  if (direction.size() != inst.sessions.size())
    throw input_error("direction has wrong session count");
  bool nonzero = false;
  for (const Rational& d : direction) {
    if (d < 0) throw input_error("negative direction entry");
    if (d > 0) nonzero = true;
  }
  if (!nonzero) throw input_error("direction must be nonzero");
  // var 0 is t, then flows
  Lp lp = detail::flow_lp(inst, 1);
  lp.objective.assign(lp.num_vars, Rational(0));
  lp.objective[0] = 1;
  for (size_t i = 0; i < inst.sessions.size(); ++i) {
    std::vector<Rational> a(lp.num_vars, Rational(0));
    a[0] = -direction[i];
    size_t base = detail::flow_var_base(inst, i, 1);
    for (size_t j = 0; j < inst.trees.per_session[i].size(); ++j) a[base + j] = 1;
    lp.add_row(std::move(a), Rel::Eq, Rational(0));
  }
  detail::add_capacity_rows(inst, lp, 1);
  LpResult res = solve_lp(lp);
  if (res.status != LpStatus::Optimal)
    throw internal_error("max_along LP must have a finite optimum");
  MaxAlongResult out;
  out.t = res.x[0];
  out.flows = detail::extract_flows(inst, res.x, 1);
  for (const Rational& d : direction) out.rates.rates.push_back(out.t * d);
  if (!validate_assignment(inst, out.rates, out.flows))
    throw internal_error("max_along witness failed re-validation");
  return out;
}

// Exact test of sum l_f(M_i) R_i = sum f(e) C_e. Defined for feasible tuples
// only.
inline bool on_hyperplane(const Instance& inst, const RateTuple& r,
                          const DistanceFunction& f,
                          bool assume_feasible = false) {
  if (!assume_feasible && !is_feasible(inst, r).feasible)
    throw input_error("on_hyperplane requires a feasible rate tuple");
  Inequality iq = make_inequality(inst, f);
  Rational lhs = 0;
  for (size_t i = 0; i < r.rates.size(); ++i)
    lhs += Rational(iq.coefficients[i]) * r.rates[i];
  return lhs == iq.rhs;
}

struct BoundaryResult {
  bool satisfied = false;
  std::optional<FlowAssignment> witness;
};

// Existence of an assignment routing only on f-shortest subtrees and
// saturating every edge with f(e) > 0.
inline BoundaryResult boundary_conditions(const Instance& inst,
                                          const RateTuple& r,
                                          const DistanceFunction& f,
                                          bool assume_feasible = false) {
  if (!assume_feasible && !is_feasible(inst, r).feasible)
    throw input_error("boundary_conditions requires a feasible rate tuple");
  Lp lp = detail::flow_lp(inst);
  // forbid flow off the shortest set
  std::vector<std::vector<char>> allowed(inst.sessions.size());
  for (size_t i = 0; i < inst.sessions.size(); ++i) {
    const auto& trees = inst.trees.per_session[i];
    allowed[i].assign(trees.size(), 0);
    ShortestSet ss = shortest_set(f, trees);
    for (size_t j : ss.argmin) allowed[i][j] = 1;
    std::vector<Rational> a(lp.num_vars, Rational(0));
    size_t base = detail::flow_var_base(inst, i);
    for (size_t j = 0; j < trees.size(); ++j) {
      a[base + j] = 1;
      if (!allowed[i][j]) {
        std::vector<Rational> zero(lp.num_vars, Rational(0));
        zero[base + j] = 1;
        lp.add_row(std::move(zero), Rel::Eq, Rational(0));
      }
    }
    lp.add_row(std::move(a), Rel::Eq, r.rates[i]);
  }
  detail::add_capacity_rows(inst, lp, 0, &f);
  LpResult res = solve_lp(lp);
  BoundaryResult out;
  if (res.status == LpStatus::Optimal) {
    out.satisfied = true;
    out.witness = detail::extract_flows(inst, res.x);
    if (!validate_assignment(inst, r, *out.witness))
      throw internal_error("boundary witness failed re-validation");
  }
  return out;
}

inline RateTuple load_rates(const Instance& inst, const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw input_error(std::string("rates parse error: ") + e.what());
  }
  RateTuple r;
  r.rates.assign(inst.sessions.size(), Rational(0));
  for (auto it = doc.begin(); it != doc.end(); ++it) {
    bool found = false;
    for (size_t i = 0; i < inst.sessions.size(); ++i)
      if (inst.sessions[i].id == it.key()) {
        r.rates[i] = parse_rational(it.value().get<std::string>());
        found = true;
        break;
      }
    if (!found) throw input_error("rates name unknown session '" + it.key() + "'");
  }
  if (!r.all_nonnegative()) throw input_error("negative rate");
  return r;
}

inline nlohmann::json witness_to_json(const Instance& inst,
                                      const FlowAssignment& fa) {
  nlohmann::json out = nlohmann::json::array();
  for (size_t i = 0; i < inst.sessions.size(); ++i) {
    const auto& trees = inst.trees.per_session[i];
    for (size_t j = 0; j < trees.size(); ++j) {
      if (fa.flows[i][j] == 0) continue;
      out.push_back(nlohmann::json{{"session_id", inst.sessions[i].id},
                                   {"subtree_edges", trees[j].edge_ids},
                                   {"flow", format_rational(fa.flows[i][j])}});
    }
  }
  return out;
}

}  // namespace rcap
