#include <catch2/catch_amalgamated.hpp>

#include "traceperm/ratmaps.hpp"

using namespace traceperm;

TEST_CASE("cubic rational map with nonsquare parameter permutes the prime field") {
  auto f = get_field(7, 1);
  Elem nu = f->scalar(3);  // nonsquare mod 7
  auto m = theorem1_b_map(*f, nu);
  REQUIRE(m.eval(f->zero()) == f->zero());
  REQUIRE(m.eval(f->one()) == f->scalar(6));
  auto res = check_permutation(Domain::whole_field(*f), [&](Elem x) { return m.eval(x); });
  REQUIRE(res.ok);

  REQUIRE_THROWS_AS(theorem1_b_map(*f, f->scalar(2)), std::invalid_argument);  // 2 = 3^2
  REQUIRE_THROWS_AS(theorem1_b_map(*f, f->zero()), std::invalid_argument);
  auto f3 = get_field(3, 1);
  REQUIRE_THROWS_AS(theorem1_b_map(*f3, f3->scalar(2)), std::invalid_argument);
}

TEST_CASE("all nonsquare parameters work, several fields") {
  for (auto [p, m] : {std::pair{5u, 1u}, {11u, 1u}, {13u, 1u}, {5u, 2u}}) {
    auto f = get_field(p, m);
    for (Elem nu : f->squares().nonsquares) {
      auto map = theorem1_b_map(*f, nu);
      CAPTURE(p, m, nu.idx);
      REQUIRE(check_permutation(Domain::whole_field(*f), [&](Elem x) { return map.eval(x); }).ok);
    }
  }
}

TEST_CASE("(X^3-3X^2+1)/(X^3-3X+1) permutes the norm-one subgroup") {
  auto f25 = get_field(5, 2);
  auto g = theorem1_c_map(*f25);
  REQUIRE(g.eval(f25->one()) == f25->one());
  Elem m1 = f25->neg(f25->one());
  REQUIRE(g.eval(m1) == m1);
  REQUIRE(permutes_mu(g, 6).ok);

  auto f49 = get_field(7, 2);
  REQUIRE(permutes_mu(theorem1_c_map(*f49), 8).ok);

  auto f9 = get_field(3, 2);
  REQUIRE_THROWS_AS(theorem1_c_map(*f9), std::invalid_argument);
}

TEST_CASE("difference of the cubic map factors as 3(X-Y)(XY-X+1)(XY-Y+1)") {
  for (auto [p, m] : {std::pair{5u, 1u}, {7u, 1u}, {11u, 1u}, {13u, 1u}, {5u, 2u}, {7u, 2u}}) {
    auto f = get_field(p, m);
    CAPTURE(p, m);
    REQUIRE(gdiff_factor_check(*f));
  }
}

TEST_CASE("maps behind the Q^3-Q+1 exponent") {
  auto cm = case5_maps(3);
  REQUIRE(cm.Q == 3);
  REQUIRE(cm.field_q2->order() == 9);
  REQUIRE(cm.field_q4->order() == 81);

  SECTION("mu-map coefficients are the literal trinomials") {
    const auto& f4 = *cm.field_q4;
    Elem one = f4.one(), neg1 = f4.neg(one), z = f4.zero();
    REQUIRE(cm.c_map.num == std::vector<Elem>{one, z, z, neg1, z, one});
    REQUIRE(cm.c_map.den == std::vector<Elem>{one, z, neg1, z, z, one});
  }

  SECTION("mu-map permutes mu_{Q^2+1}") {
    REQUIRE(permutes_mu(cm.c_map, 10).ok);
  }

  SECTION("one plane map per nonsquare, each permutes F_{Q^2} and fixes 0") {
    REQUIRE(cm.b_maps.size() == 4);
    const auto& f2 = *cm.field_q2;
    for (auto& [nu, b] : cm.b_maps) {
      REQUIRE_FALSE(f2.is_square(nu));
      REQUIRE(b.eval(f2.zero()) == f2.zero());
      REQUIRE(check_permutation(Domain::whole_field(f2), [&](Elem x) { return b.eval(x); }).ok);
    }
  }

  REQUIRE_THROWS_AS(case5_maps(4), std::invalid_argument);
  REQUIRE_THROWS_AS(case5_maps(6), std::invalid_argument);
}

TEST_CASE("maps behind the Q^3+Q^2-Q exponent") {
  auto cm3 = case6_maps(3);
  REQUIRE(permutes_mu(cm3.c_map, 10).ok);
  for (auto& [nu, b] : cm3.b_maps)
    REQUIRE(check_permutation(Domain::whole_field(*cm3.field_q2), [&](Elem x) { return b.eval(x); })
                .ok);

  auto cm5 = case6_maps(5);
  REQUIRE(cm5.b_maps.size() == 12);
  REQUIRE(permutes_mu(cm5.c_map, 26).ok);
  for (auto& [nu, b] : cm5.b_maps)
    REQUIRE(check_permutation(Domain::whole_field(*cm5.field_q2), [&](Elem x) { return b.eval(x); })
                .ok);
}

TEST_CASE("half-exponent composition identity over cubic extensions") {
  for (uint64_t q : {3, 5, 7, 9, 11}) {
    CAPTURE(q);
    REQUIRE(case8_identity_check(q));
  }
  REQUIRE_THROWS_AS(case8_identity_check(4), std::invalid_argument);
}

TEST_CASE("norm-subgroup identity for the half exponent, n = 3") {
  for (uint64_t q : {3, 5, 7}) {
    CAPTURE(q);
    REQUIRE(case7_mu_identity_check(q));
  }
  // the companion linearized map x -> x^q + x is bijective on F_{q^3}
  for (uint32_t q : {3u, 5u, 7u}) {
    auto f = get_field(q, 3);
    REQUIRE(check_permutation(Domain::whole_field(*f),
                              [&](Elem x) { return f->add(f->pow(x, int64_t(q)), x); })
                .ok);
  }
}

TEST_CASE("trace identities for the q^l + 1 exponent") {
  SECTION("q = 3, l = 1 over F_81: every admissible gamma") {
    auto f = get_field(3, 4);
    Elem m1 = f->neg(f->one());
    int admissible = 0;
    for (uint32_t i = 1; i < f->order(); ++i) {
      Elem g{i};
      if (f->pow(g, 8) == m1) {
        ++admissible;
        REQUIRE(case9_trace_identities(*f, 3, 1, g));
      }
    }
    REQUIRE(admissible == 8);
  }

  SECTION("q = 5, l = 1 over F_625") {
    auto f = get_field(5, 4);
    Elem m1 = f->neg(f->one());
    int admissible = 0;
    for (uint32_t i = 1; i < f->order(); ++i) {
      Elem g{i};
      if (f->pow(g, 24) == m1) {
        ++admissible;
        REQUIRE(case9_trace_identities(*f, 5, 1, g));
      }
    }
    REQUIRE(admissible == 24);
  }

  SECTION("inadmissible inputs are rejected") {
    auto f = get_field(3, 4);
    REQUIRE_THROWS_AS(case9_trace_identities(*f, 3, 1, f->one()), std::invalid_argument);
    REQUIRE_THROWS_AS(case9_trace_identities(*f, 3, 3, f->one()), std::invalid_argument);
    REQUIRE_THROWS_AS(case9_trace_identities(*f, 9, 1, f->one()), std::invalid_argument);
  }
}

TEST_CASE("polynomial evaluation and monomial assembly") {
  auto f = get_field(5, 1);
  // 2 + 3X + X^2 at X = 3: 2 + 9 + 9 = 20 = 0
  std::vector<Elem> c{f->scalar(2), f->scalar(3), f->one()};
  REQUIRE(eval_poly(*f, c, f->scalar(3)) == f->zero());
  REQUIRE(eval_poly(*f, {}, f->scalar(3)) == f->zero());
  // exponent collisions accumulate
  auto acc = detail::monomials(*f, {{2, f->one()}, {2, f->one()}, {0, f->scalar(4)}});
  REQUIRE(acc == std::vector<Elem>{f->scalar(4), f->zero(), f->scalar(2)});
}
