#pragma once

#include <algorithm>
#include <numeric>
#include <string>
#include <vector>

#include <json.hpp>

#include "rcap/network.hpp"
#include "rcap/rational.hpp"

namespace rcap {

// Nonnegative integer edge labels, indexed by edge id. Entries are
// arbitrary-precision: the constructions here need values near 2^{|E|/3}
// and |E|^m.
struct DistanceFunction {
  std::vector<Int> values;  // values[e-1] = f(e)

  const Int& at(int edge_id) const { return values.at(size_t(edge_id) - 1); }
  int edge_count() const { return int(values.size()); }

  bool all_nonnegative() const {
    return std::all_of(values.begin(), values.end(),
                       [](const Int& v) { return v >= 0; });
  }

  friend bool operator==(const DistanceFunction&, const DistanceFunction&) = default;
};

inline Int subtree_length(const DistanceFunction& f, const Subtree& t) {
  Int sum = 0;
  for (int e : t.edge_ids) sum += f.at(e);
  return sum;
}

struct ShortestSet {
  Int length;                  // l_f(M)
  std::vector<size_t> argmin;  // indices of all subtrees attaining it
};

// Minimum subtree length and every subtree attaining it; ties are fully
// materialized.
inline ShortestSet shortest_set(const DistanceFunction& f,
                                const std::vector<Subtree>& trees) {
  ShortestSet out;
  for (size_t j = 0; j < trees.size(); ++j) {
    Int len = subtree_length(f, trees[j]);
    if (out.argmin.empty() || len < out.length) {
      out.length = std::move(len);
      out.argmin.assign(1, j);
    } else if (len == out.length) {
      out.argmin.push_back(j);
    }
  }
  return out;
}

// One Japanese-theorem inequality: sum of coefficients[i] * R_i <= rhs.
struct Inequality {
  std::vector<std::string> session_ids;
  std::vector<Int> coefficients;  // l_f(M_i), aligned with session_ids
  Rational rhs;                   // sum of f(e) C_e
  DistanceFunction source_distance;

  bool trivial() const {
    return std::all_of(coefficients.begin(), coefficients.end(),
                       [](const Int& c) { return c == 0; });
  }

  friend bool operator==(const Inequality& a, const Inequality& b) {
    return a.session_ids == b.session_ids && a.coefficients == b.coefficients &&
           a.rhs == b.rhs;
  }
};

inline Inequality make_inequality(const Instance& inst,
                                  const DistanceFunction& f) {
  if (f.edge_count() != inst.net.edge_count())
    throw input_error("distance function has wrong edge count");
  if (!f.all_nonnegative())
    throw input_error("distance function has a negative entry");
  Inequality iq;
  iq.source_distance = f;
  for (size_t i = 0; i < inst.sessions.size(); ++i) {
    iq.session_ids.push_back(inst.sessions[i].id);
    iq.coefficients.push_back(
        shortest_set(f, inst.trees.per_session[i]).length);
  }
  iq.rhs = 0;
  for (const Edge& e : inst.net.edges) iq.rhs += Rational(f.at(e.id)) * e.capacity;
  return iq;
}

// Divides coefficients and rhs by the gcd of the coefficients. Two
// inequalities describe the same halfspace iff their normal forms are equal.
inline Inequality normalize_inequality(const Inequality& iq) {
  if (iq.trivial()) throw input_error("cannot normalize a trivial inequality");
  Int g = 0;
  for (const Int& c : iq.coefficients) g = boost::multiprecision::gcd(g, c);
  Inequality out = iq;
  for (Int& c : out.coefficients) c /= g;
  out.rhs = iq.rhs / Rational(g);
  return out;
}

inline nlohmann::json inequality_to_json(const Inequality& iq) {
  nlohmann::json dist = nlohmann::json::array();
  for (const Int& v : iq.source_distance.values) dist.push_back(format_int(v));
  nlohmann::json coeffs = nlohmann::json::object();
  for (size_t i = 0; i < iq.session_ids.size(); ++i)
    coeffs[iq.session_ids[i]] = format_int(iq.coefficients[i]);
  return nlohmann::json{{"distance", dist},
                        {"coefficients", coeffs},
                        {"rhs", format_rational(iq.rhs)},
                        {"trivial", iq.trivial()}};
}

}  // namespace rcap
