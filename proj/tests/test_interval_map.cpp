#include <catch2/catch_amalgamated.hpp>

#include "kneadlab/interval_map.hpp"

using namespace kneadlab;

static SidedPoint germ(const Rational& x, Side s) { return {Number(x), s}; }

TEST_CASE("tent map validates into two pieces") {
  auto m = make_tent(Number(2));
  REQUIRE(m.npieces() == 2);
  REQUIRE(m.pieces[0].increasing);
  REQUIRE_FALSE(m.pieces[1].increasing);
  REQUIRE(m.pieces[0].hi == Number(Rational(1, 2)));
}

TEST_CASE("colinear adjacent branches merge into one piece") {
  IntervalMap m;
  m.a = Number(0);
  m.b = Number(1);
  Rational half(1, 2);
  m.branches.push_back({Number(0), Number(half), AffineRule{Number(Rational(1, 2)), Number(0)}, true});
  m.branches.push_back({Number(half), Number(1), AffineRule{Number(Rational(1, 2)), Number(0)}, true});
  validate(m);
  REQUIRE(m.npieces() == 1);
  REQUIRE(m.pieces[0].first_branch == 0);
  REQUIRE(m.pieces[0].last_branch == 1);
}

TEST_CASE("validation failures") {
  IntervalMap gap;
  gap.a = Number(0);
  gap.b = Number(1);
  gap.branches.push_back({Number(0), Number(Rational(1, 3)), AffineRule{Number(1), Number(0)}, true});
  gap.branches.push_back({Number(Rational(1, 2)), Number(1), AffineRule{Number(1), Number(0)}, true});
  REQUIRE_THROWS_AS(validate(gap), Error);

  IntervalMap esc;
  esc.a = Number(0);
  esc.b = Number(1);
  esc.branches.push_back({Number(0), Number(1), AffineRule{Number(3), Number(0)}, true});
  REQUIRE_THROWS_AS(validate(esc), Error);

  IntervalMap wrongdir;
  wrongdir.a = Number(0);
  wrongdir.b = Number(1);
  wrongdir.branches.push_back({Number(0), Number(1), AffineRule{Number(-1), Number(1)}, true});
  REQUIRE_THROWS_AS(validate(wrongdir), Error);
}

TEST_CASE("germ evaluation on the tent map") {
  auto m = make_tent(Number(2));
  auto q = evaluate(m, germ(Rational(1, 4), Side::right));
  REQUIRE(q.x == Number(Rational(1, 2)));
  REQUIRE(q.side == Side::right);

  // both germs at the turning point land at 1 from the left
  auto l = evaluate(m, germ(Rational(1, 2), Side::left));
  REQUIRE(l.x == Number(1));
  REQUIRE(l.side == Side::left);
  auto r = evaluate(m, germ(Rational(1, 2), Side::right));
  REQUIRE(r.x == Number(1));
  REQUIRE(r.side == Side::left);

  REQUIRE_THROWS_AS(evaluate(m, germ(Rational(1), Side::right)), Error);
  REQUIRE_THROWS_AS(evaluate(m, germ(Rational(0), Side::left)), Error);
  REQUIRE_THROWS_AS(evaluate(m, germ(Rational(3, 2), Side::right)), Error);
}

TEST_CASE("exact itineraries close into cycles") {
  auto m = make_tent(Number(2));
  // turning point: 0 1 then fixed at 0
  auto s = itinerary(m, germ(Rational(1, 2), Side::left), 32);
  REQUIRE_FALSE(s.truncated);
  REQUIRE(seq_equal(s, SymbolSeq::periodic({0, 1}, {0})));

  auto b2 = make_beta(Number(2));
  auto t = itinerary(b2, germ(Rational(1, 3), Side::right), 32);
  REQUIRE(seq_equal(t, SymbolSeq::periodic({}, {0, 1})));

  // fixed point 2/3 of the tent sits in the falling piece
  auto u = itinerary(m, germ(Rational(2, 3), Side::left), 8);
  REQUIRE(seq_equal(u, SymbolSeq::periodic({}, {1})));
}

TEST_CASE("itinerary budget truncates when no cycle is found") {
  auto m = make_tent(Number(Rational(3, 2)));
  auto s = itinerary(m, germ(Rational(1, 2), Side::left), 12);
  REQUIRE(s.truncated);
  REQUIRE(s.head.size() == 12);
  // first symbols of the turning orbit: 1/2- 3/4- 3/8+ 9/16+ 21/32- 33/64+
  REQUIRE(s.head[0] == 0);
  REQUIRE(s.head[1] == 1);
  REQUIRE(s.head[2] == 0);
  REQUIRE(s.head[3] == 1);
  REQUIRE(s.head[4] == 1);
  REQUIRE(s.head[5] == 1);
}

TEST_CASE("cylinders are exact open intervals") {
  auto m = make_tent(Number(2));
  auto c = cylinder(m, {0, 1});
  REQUIRE(c == ExactInterval{Number(Rational(1, 4)), Number(Rational(1, 2))});
  auto c2 = cylinder(m, {1, 1});
  REQUIRE(c2 == ExactInterval{Number(Rational(1, 2)), Number(Rational(3, 4))});
  REQUIRE(cylinder(m, {0}).hi == Number(Rational(1, 2)));

  auto g = make_beta(Number::generator(golden_field()));
  REQUIRE(g.npieces() == 2);
  REQUIRE(cylinder(g, {1, 1}).empty());
  REQUIRE_FALSE(cylinder(g, {1, 0}).empty());
  REQUIRE_FALSE(cylinder(g, {0, 1, 0, 1}).empty());
}

TEST_CASE("golden beta map has exact algebraic cut") {
  Number phi = Number::generator(golden_field());
  auto g = make_beta(phi);
  REQUIRE(g.pieces[0].hi == Number(1) / phi);
  REQUIRE(g.pieces[0].hi == phi - Number(1));
  auto q = evaluate(g, {phi - Number(1), Side::right});
  REQUIRE(q.x == Number(0));  // phi * (phi - 1) - 1 = 0
}

TEST_CASE("numeric quadratic map") {
  auto m = make_quadratic(1.0);
  REQUIRE_FALSE(m.exact);
  REQUIRE(m.npieces() == 2);
  REQUIRE_THAT(evaluate_numeric(m, 0.3), Catch::Matchers::WithinAbs(0.84, 1e-12));

  // critical orbit 1/2 -> 1 -> 0 -> 0 hits endpoints exactly in doubles
  auto s = itinerary(m, {Number(Rational(1, 2)), Side::left}, 8);
  REQUIRE(s.truncated);
  REQUIRE(s.head.size() == 8);
  REQUIRE(s.head[0] == 0);
  REQUIRE(s.head[1] == 1);
  REQUIRE(s.head[2] == 0);
  REQUIRE(s.head[3] == 0);

  REQUIRE_THROWS_AS(cylinder(m, {0, 1}), Error);
}

TEST_CASE("numeric ambiguity reports partial itinerary") {
  auto m = make_quadratic(0.8124);
  std::string note;
  auto s = itinerary_partial(m, {Number(Rational(1, 2)), Side::left}, 2000, &note);
  REQUIRE(s.truncated);
  // either the full budget ran or a tolerance stop was recorded
  if (s.head.size() < 2000) REQUIRE_FALSE(note.empty());
}

TEST_CASE("three full branches") {
  auto m = make_full(3);
  REQUIRE(m.npieces() == 3);
  auto s = itinerary(m, {Number(Rational(1, 4)), Side::right}, 16);
  REQUIRE_FALSE(s.truncated);
  auto c = cylinder(m, {2, 0});
  REQUIRE_FALSE(c.empty());
}
