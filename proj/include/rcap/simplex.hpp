#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "rcap/errors.hpp"
#include "rcap/rational.hpp"

namespace rcap {

// Exact rational simplex, two-phase, Bland's rule. Maximizes the objective.
// Variables are nonnegative unless flagged free (free variables are split
// internally). Infeasible problems come back with a verified Farkas
// certificate over the original rows.

enum class Rel { Le, Ge, Eq };

struct LpRow {
  std::vector<Rational> a;
  Rel rel = Rel::Le;
  Rational b;
};

struct Lp {
  size_t num_vars = 0;
  std::vector<Rational> objective;  // empty means all-zero
  std::vector<LpRow> rows;
  std::vector<bool> free_var;  // empty means all nonnegative

  LpRow& add_row(std::vector<Rational> a, Rel rel, Rational b) {
    rows.push_back(LpRow{std::move(a), rel, std::move(b)});
    return rows.back();
  }
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpResult {
  LpStatus status = LpStatus::Optimal;
  Rational value;
  std::vector<Rational> x;       // primal solution (Optimal only)
  std::vector<Rational> farkas;  // row multipliers (Infeasible only)
};

// Checks the contradiction 0 <= sum(lambda_i * a_i) . x <= lambda . b < 0.
inline bool check_farkas(const Lp& lp, const std::vector<Rational>& lambda) {
  if (lambda.size() != lp.rows.size()) return false;
  Rational rhs = 0;
  for (size_t i = 0; i < lp.rows.size(); ++i) {
    const LpRow& r = lp.rows[i];
    if (r.rel == Rel::Le && lambda[i] < 0) return false;
    if (r.rel == Rel::Ge && lambda[i] > 0) return false;
    rhs += lambda[i] * r.b;
  }
  if (rhs >= 0) return false;
  for (size_t j = 0; j < lp.num_vars; ++j) {
    Rational w = 0;
    for (size_t i = 0; i < lp.rows.size(); ++i) w += lambda[i] * lp.rows[i].a[j];
    bool is_free = j < lp.free_var.size() && lp.free_var[j];
    if (is_free ? w != 0 : w < 0) return false;
  }
  return true;
}

namespace detail {

class SimplexTableau {
 public:
  explicit SimplexTableau(const Lp& lp) : lp_(lp) {
    build();
  }

  LpResult solve() {
    // Phase 1: maximize minus the sum of artificials.
    std::vector<Rational> cost(num_cols_, Rational(0));
    for (size_t j : artificial_cols_) cost[j] = -1;
    set_objective(cost);
    pivot_until_optimal();
    if (zval_ < 0) return infeasible_result();
    drive_out_artificials();

    // Phase 2.
    cost.assign(num_cols_, Rational(0));
    for (size_t j = 0; j < structural_.size(); ++j) {
      const auto& [var, sign] = structural_[j];
      cost[j] = (sign > 0 ? Rational(1) : Rational(-1)) * objective_of(var);
    }
    set_objective(cost);
    if (!pivot_until_optimal()) {
      LpResult res;
      res.status = LpStatus::Unbounded;
      return res;
    }
    LpResult res;
    res.status = LpStatus::Optimal;
    res.value = zval_;
    res.x.assign(lp_.num_vars, Rational(0));
    for (size_t i = 0; i < rows_.size(); ++i) {
      size_t col = basis_[i];
      if (col < structural_.size()) {
        const auto& [var, sign] = structural_[col];
        res.x[var] += (sign > 0 ? b_[i] : -b_[i]);
      }
    }
    return res;
  }

 private:
  Rational objective_of(size_t var) const {
    return var < lp_.objective.size() ? lp_.objective[var] : Rational(0);
  }

  void build() {
    const size_t m = lp_.rows.size();
    // structural columns: one per nonnegative var, two per free var
    for (size_t v = 0; v < lp_.num_vars; ++v) {
      structural_.emplace_back(v, +1);
      if (v < lp_.free_var.size() && lp_.free_var[v]) structural_.emplace_back(v, -1);
    }
    // sign-normalize rows so every right-hand side is nonnegative
    sign_.assign(m, +1);
    std::vector<Rel> rel(m);
    for (size_t i = 0; i < m; ++i) {
      rel[i] = lp_.rows[i].rel;
      if (lp_.rows[i].b < 0) {
        sign_[i] = -1;
        if (rel[i] == Rel::Le)
          rel[i] = Rel::Ge;
        else if (rel[i] == Rel::Ge)
          rel[i] = Rel::Le;
      }
    }
    size_t next = structural_.size();
    slack_col_.assign(m, SIZE_MAX);
    art_col_.assign(m, SIZE_MAX);
    for (size_t i = 0; i < m; ++i)
      if (rel[i] == Rel::Le || rel[i] == Rel::Ge) slack_col_[i] = next++;
    for (size_t i = 0; i < m; ++i)
      if (rel[i] != Rel::Le) {
        art_col_[i] = next++;
        artificial_cols_.push_back(art_col_[i]);
      }
    num_cols_ = next;

    rows_.assign(m, std::vector<Rational>(num_cols_, Rational(0)));
    b_.assign(m, Rational(0));
    basis_.assign(m, SIZE_MAX);
    for (size_t i = 0; i < m; ++i) {
      const LpRow& r = lp_.rows[i];
      if (r.a.size() != lp_.num_vars) throw internal_error("LP row width mismatch");
      for (size_t j = 0; j < structural_.size(); ++j) {
        const auto& [var, s] = structural_[j];
        Rational v = r.a[var] * (s > 0 ? 1 : -1);
        if (sign_[i] < 0) v = -v;
        rows_[i][j] = std::move(v);
      }
      b_[i] = sign_[i] < 0 ? -r.b : r.b;
      if (slack_col_[i] != SIZE_MAX)
        rows_[i][slack_col_[i]] = rel[i] == Rel::Le ? 1 : -1;
      if (art_col_[i] != SIZE_MAX) {
        rows_[i][art_col_[i]] = 1;
        basis_[i] = art_col_[i];
      } else {
        basis_[i] = slack_col_[i];
      }
    }
  }

  void set_objective(const std::vector<Rational>& cost) {
    cost_ = cost;
    // reduced costs z_j - c_j for the current basis
    obj_.assign(num_cols_, Rational(0));
    zval_ = 0;
    for (size_t j = 0; j < num_cols_; ++j) {
      Rational z = 0;
      for (size_t i = 0; i < rows_.size(); ++i)
        if (cost_[basis_[i]] != 0) z += cost_[basis_[i]] * rows_[i][j];
      obj_[j] = z - cost_[j];
    }
    for (size_t i = 0; i < rows_.size(); ++i)
      if (cost_[basis_[i]] != 0) zval_ += cost_[basis_[i]] * b_[i];
  }

  // Returns false on unboundedness.
  bool pivot_until_optimal() {
    for (;;) {
      size_t enter = SIZE_MAX;
      for (size_t j = 0; j < num_cols_; ++j)
        if (obj_[j] < 0 && !banned(j)) {
          enter = j;
          break;  // Bland: lowest eligible index
        }
      if (enter == SIZE_MAX) return true;
      size_t leave = SIZE_MAX;
      for (size_t i = 0; i < rows_.size(); ++i) {
        if (rows_[i][enter] <= 0) continue;
        if (leave == SIZE_MAX) {
          leave = i;
          continue;
        }
        Rational cur = b_[leave] / rows_[leave][enter];
        Rational cand = b_[i] / rows_[i][enter];
        if (cand < cur || (cand == cur && basis_[i] < basis_[leave])) leave = i;
      }
      if (leave == SIZE_MAX) return false;
      pivot(leave, enter);
    }
  }

  bool banned(size_t col) const {
    return phase2_ && col >= first_artificial();
  }

  size_t first_artificial() const {
    return artificial_cols_.empty() ? num_cols_ : artificial_cols_.front();
  }

  void pivot(size_t r, size_t c) {
    Rational piv = rows_[r][c];
    for (Rational& v : rows_[r]) v /= piv;
    b_[r] /= piv;
    for (size_t i = 0; i < rows_.size(); ++i) {
      if (i == r || rows_[i][c] == 0) continue;
      Rational factor = rows_[i][c];
      for (size_t j = 0; j < num_cols_; ++j)
        if (rows_[r][j] != 0) rows_[i][j] -= factor * rows_[r][j];
      b_[i] -= factor * b_[r];
      rows_[i][c] = 0;
    }
    if (obj_[c] != 0) {
      Rational factor = obj_[c];
      for (size_t j = 0; j < num_cols_; ++j)
        if (rows_[r][j] != 0) obj_[j] -= factor * rows_[r][j];
      zval_ -= factor * b_[r];
      obj_[c] = 0;
    }
    basis_[r] = c;
  }

  // After a zero-cost phase 1, pivot basic artificials out (or recognize the
  // row as redundant and leave the artificial basic at level zero, which is
  // harmless once artificial columns are banned from entering).
  void drive_out_artificials() {
    size_t art_start = first_artificial();
    for (size_t i = 0; i < rows_.size(); ++i) {
      if (basis_[i] < art_start) continue;
      for (size_t j = 0; j < art_start; ++j)
        if (rows_[i][j] != 0) {
          pivot(i, j);
          break;
        }
    }
    phase2_ = true;
  }

  LpResult infeasible_result() {
    LpResult res;
    res.status = LpStatus::Infeasible;
    res.farkas.assign(lp_.rows.size(), Rational(0));
    for (size_t i = 0; i < lp_.rows.size(); ++i) {
      Rational y;
      if (slack_col_[i] != SIZE_MAX) {
        // slack column is +-e_i with zero cost
        y = rows_count_relation_le(i) ? obj_[slack_col_[i]]
                                      : -obj_[slack_col_[i]];
      } else {
        y = obj_[art_col_[i]] + cost_[art_col_[i]];  // cost is -1
      }
      res.farkas[i] = Rational(sign_[i]) * y;
    }
    if (!check_farkas(lp_, res.farkas))
      throw internal_error("Farkas certificate failed verification");
    return res;
  }

  bool rows_count_relation_le(size_t i) const {
    Rel r = lp_.rows[i].rel;
    if (sign_[i] < 0) {
      if (r == Rel::Le) return false;
      if (r == Rel::Ge) return true;
    }
    return r == Rel::Le;
  }

  const Lp& lp_;
  std::vector<std::pair<size_t, int>> structural_;  // (var, sign)
  std::vector<int> sign_;
  std::vector<size_t> slack_col_, art_col_, artificial_cols_;
  size_t num_cols_ = 0;
  std::vector<std::vector<Rational>> rows_;
  std::vector<Rational> b_;
  std::vector<size_t> basis_;
  std::vector<Rational> cost_, obj_;
  Rational zval_;
  bool phase2_ = false;
};

}  // namespace detail

inline LpResult solve_lp(const Lp& lp) {
  return detail::SimplexTableau(lp).solve();
}

}  // namespace rcap
