#include <catch2/catch_amalgamated.hpp>

#include "rcap/simplex.hpp"

using namespace rcap;

namespace {

std::vector<Rational> rv(std::vector<long> v) {
  return {v.begin(), v.end()};
}

}  // namespace

TEST_CASE("basic maximization") {
  // max x + y s.t. x + 2y <= 4, 3x + y <= 6
  Lp lp;
  lp.num_vars = 2;
  lp.objective = rv({1, 1});
  lp.add_row(rv({1, 2}), Rel::Le, 4);
  lp.add_row(rv({3, 1}), Rel::Le, 6);
  LpResult res = solve_lp(lp);
  REQUIRE(res.status == LpStatus::Optimal);
  CHECK(res.value == Rational(14, 5));
  CHECK(res.x[0] == Rational(8, 5));
  CHECK(res.x[1] == Rational(6, 5));
}

TEST_CASE("equality constraints") {
  // max x s.t. x + y = 3, x - y <= 1
  Lp lp;
  lp.num_vars = 2;
  lp.objective = rv({1, 0});
  lp.add_row(rv({1, 1}), Rel::Eq, 3);
  lp.add_row(rv({1, -1}), Rel::Le, 1);
  LpResult res = solve_lp(lp);
  REQUIRE(res.status == LpStatus::Optimal);
  CHECK(res.value == 2);
}

TEST_CASE("infeasible system yields a verified Farkas certificate") {
  // x <= 1, x >= 2
  Lp lp;
  lp.num_vars = 1;
  lp.add_row(rv({1}), Rel::Le, 1);
  lp.add_row(rv({1}), Rel::Ge, 2);
  LpResult res = solve_lp(lp);
  REQUIRE(res.status == LpStatus::Infeasible);
  CHECK(check_farkas(lp, res.farkas));

  // equality version: x + y = 1, x + y = 2
  Lp lp2;
  lp2.num_vars = 2;
  lp2.add_row(rv({1, 1}), Rel::Eq, 1);
  lp2.add_row(rv({1, 1}), Rel::Eq, 2);
  LpResult res2 = solve_lp(lp2);
  REQUIRE(res2.status == LpStatus::Infeasible);
  CHECK(check_farkas(lp2, res2.farkas));
}

TEST_CASE("unbounded detection") {
  Lp lp;
  lp.num_vars = 2;
  lp.objective = rv({1, 0});
  lp.add_row(rv({0, 1}), Rel::Le, 1);
  CHECK(solve_lp(lp).status == LpStatus::Unbounded);
}

TEST_CASE("free variables can go negative") {
  // min x (max -x) s.t. x >= -5 (i.e. -x <= 5), x free
  Lp lp;
  lp.num_vars = 1;
  lp.free_var = {true};
  lp.objective = rv({-1});
  lp.add_row(rv({-1}), Rel::Le, 5);
  LpResult res = solve_lp(lp);
  REQUIRE(res.status == LpStatus::Optimal);
  CHECK(res.x[0] == -5);
}

TEST_CASE("negative right-hand sides are handled") {
  // max x + y s.t. -x - y <= -2 (x + y >= 2), x <= 3, y <= 3
  Lp lp;
  lp.num_vars = 2;
  lp.objective = rv({1, 1});
  lp.add_row(rv({-1, -1}), Rel::Le, -2);
  lp.add_row(rv({1, 0}), Rel::Le, 3);
  lp.add_row(rv({0, 1}), Rel::Le, 3);
  LpResult res = solve_lp(lp);
  REQUIRE(res.status == LpStatus::Optimal);
  CHECK(res.value == 6);
}

TEST_CASE("degenerate problem terminates (Bland)") {
  // classic cycling-prone instance
  Lp lp;
  lp.num_vars = 4;
  lp.objective = {Rational(3, 4), Rational(-150), Rational(1, 50), Rational(-6)};
  lp.add_row({Rational(1, 4), Rational(-60), Rational(-1, 25), Rational(9)}, Rel::Le, 0);
  lp.add_row({Rational(1, 2), Rational(-90), Rational(-1, 50), Rational(3)}, Rel::Le, 0);
  lp.add_row({Rational(0), Rational(0), Rational(1), Rational(0)}, Rel::Le, 1);
  LpResult res = solve_lp(lp);
  REQUIRE(res.status == LpStatus::Optimal);
  CHECK(res.value == Rational(1, 20));
}

TEST_CASE("exact rational optimum with awkward fractions") {
  // max x s.t. 3x <= 1, 7x <= 2
  Lp lp;
  lp.num_vars = 1;
  lp.objective = rv({1});
  lp.add_row(rv({3}), Rel::Le, 1);
  lp.add_row(rv({7}), Rel::Le, 2);
  LpResult res = solve_lp(lp);
  REQUIRE(res.status == LpStatus::Optimal);
  CHECK(res.value == Rational(2, 7));
}
