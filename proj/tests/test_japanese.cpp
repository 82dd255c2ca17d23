#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "rcap/japanese.hpp"
#include "rcap/ring.hpp"
#include "test_helpers.hpp"

using namespace rcap;
using rcap_test::triangle_instance;

namespace {

DistanceFunction df(std::vector<long> v) {
  DistanceFunction f;
  for (long x : v) f.values.push_back(Int(x));
  return f;
}

}  // namespace

TEST_CASE("subtree lengths") {
  Instance inst = triangle_instance();
  DistanceFunction g = df({2, 1, 3});
  Subtree t{"x", {1, 2}, 0b011};
  CHECK(subtree_length(g, t) == 3);
  CHECK(subtree_length(df({0, 0, 0}), t) == 0);
  // theorem-4 g on the 5-ring, arc {e2,e3}
  DistanceFunction g5 = theorem4_g(5);
  Subtree arc{"arc", {2, 3}, 0b00110};
  CHECK(subtree_length(g5, arc) == 2);
}

TEST_CASE("shortest sets on the triangle") {
  Instance inst = triangle_instance();
  DistanceFunction g = df({2, 1, 3});
  // session 3->1 (index 4): both paths shortest at length 3
  {
    ShortestSet ss = shortest_set(g, inst.trees.per_session[4]);
    CHECK(ss.length == 3);
    CHECK(ss.argmin.size() == 2);
  }
  // session 1->2 (index 0): only the direct edge, length 2
  {
    ShortestSet ss = shortest_set(g, inst.trees.per_session[0]);
    CHECK(ss.length == 2);
    REQUIRE(ss.argmin.size() == 1);
    CHECK(inst.trees.per_session[0][ss.argmin[0]].edge_ids == std::vector<int>{1});
  }
  // f == 0 ties everything at zero
  {
    ShortestSet ss = shortest_set(df({0, 0, 0}), inst.trees.per_session[6]);
    CHECK(ss.length == 0);
    CHECK(ss.argmin.size() == inst.trees.per_session[6].size());
  }
}

TEST_CASE("triangle inequalities from the worked example") {
  Instance inst = triangle_instance();
  Inequality iq_g = make_inequality(inst, df({2, 1, 3}));
  std::vector<Int> expect_g{2, 2, 1, 1, 3, 3, 3, 3, 3};
  CHECK(iq_g.coefficients == expect_g);
  CHECK(iq_g.rhs == 6);
  CHECK_FALSE(iq_g.trivial());

  Inequality iq_f = make_inequality(inst, df({1, 0, 1}));
  std::vector<Int> expect_f{1, 1, 0, 0, 1, 1, 1, 1, 1};
  CHECK(iq_f.coefficients == expect_f);
  CHECK(iq_f.rhs == 2);

  Inequality zero = make_inequality(inst, df({0, 0, 0}));
  CHECK(zero.trivial());
  CHECK(zero.rhs == 0);
}

TEST_CASE("normalization divides by the coefficient gcd") {
  Instance inst = triangle_instance();
  Inequality iq = make_inequality(inst, df({2, 0, 2}));
  Inequality norm = normalize_inequality(iq);
  std::vector<Int> expect{1, 1, 0, 0, 1, 1, 1, 1, 1};
  CHECK(norm.coefficients == expect);
  CHECK(norm.rhs == 2);
  CHECK(normalize_inequality(norm) == norm);  // already normal
  CHECK_THROWS_AS(normalize_inequality(make_inequality(inst, df({0, 0, 0}))),
                  input_error);
}

TEST_CASE("scaling a distance function scales the inequality exactly") {
  std::mt19937_64 rng(17);
  Instance inst = triangle_instance();
  Instance ring4 = ring_instance(4, SessionPolicy::UnicastBroadcast);
  for (const Instance* pi : {&inst, &ring4}) {
    for (int iter = 0; iter < 30; ++iter) {
      DistanceFunction f;
      bool nonzero = false;
      for (int e = 0; e < pi->net.edge_count(); ++e) {
        f.values.push_back(Int(rng() % 5));
        if (f.values.back() > 0) nonzero = true;
      }
      if (!nonzero) continue;
      Int c = Int(1 + rng() % 7);
      DistanceFunction cf;
      for (const Int& v : f.values) cf.values.push_back(c * v);
      Inequality a = make_inequality(*pi, f);
      Inequality b = make_inequality(*pi, cf);
      for (size_t i = 0; i < a.coefficients.size(); ++i)
        CHECK(b.coefficients[i] == c * a.coefficients[i]);
      CHECK(b.rhs == Rational(c) * a.rhs);
      if (!a.trivial())
        CHECK(normalize_inequality(a) == normalize_inequality(b));
    }
  }
}

TEST_CASE("coefficient bound |E| * max f") {
  std::mt19937_64 rng(23);
  Instance inst = ring_instance(5, SessionPolicy::UnicastBroadcast);
  for (int iter = 0; iter < 20; ++iter) {
    DistanceFunction f;
    Int maxv = 0;
    for (int e = 0; e < 5; ++e) {
      f.values.push_back(Int(rng() % 9));
      maxv = std::max(maxv, f.values.back());
    }
    Inequality iq = make_inequality(inst, f);
    for (const Int& c : iq.coefficients) CHECK(c <= Int(5) * maxv);
  }
}
