#include <catch2/catch_amalgamated.hpp>

#include "rical/piecewise.hpp"
#include "rical/rng.hpp"
#include "rical/serialize.hpp"

using rical::PiecewisePoly;
using rical::Poly;
using rical::Rational;
using rical::StepFunction;

namespace {
PiecewisePoly two_boxes() {
    // 2 on [0,1), 1 on [1,3)
    return StepFunction({Rational(0), Rational(1), Rational(3)}, {Rational(2), Rational(1)}).to_piecewise();
}
}  // namespace

TEST_CASE("evaluation is right-continuous and zero outside support") {
    auto f = PiecewisePoly::indicator(Rational(0), Rational(1));
    CHECK(f(Rational(1, 2)) == Rational(1));
    CHECK(f(Rational(1)) == Rational(0));
    CHECK(f(Rational(-1)) == Rational(0));
    CHECK(f.eval_left(Rational(1)) == Rational(1));

    auto lin = PiecewisePoly::from_pieces({{Rational(0), Rational(2), Poly{Rational(-1), Rational(1)}}});
    CHECK(lin(Rational(3, 2)) == Rational(1, 2));
}

TEST_CASE("integration is exact and additive") {
    auto f = two_boxes();
    CHECK(f.integrate(Rational(0), Rational(3)) == Rational(4));
    CHECK(f.integrate(Rational(0), Rational(1)) + f.integrate(Rational(1), Rational(3)) ==
          f.integrate(Rational(0), Rational(3)));
    CHECK_THROWS_AS(f.integrate(Rational(2), Rational(1)), std::invalid_argument);

    // |t-1| on [0,2] integrates to 1
    auto tent = PiecewisePoly::from_pieces({{Rational(0), Rational(2), Poly{Rational(-1), Rational(1)}}}).absolute();
    CHECK(tent.integrate(Rational(0), Rational(2)) == Rational(1));
}

TEST_CASE("derivative and antiderivative round trip") {
    auto f = PiecewisePoly::indicator(Rational(0), Rational(1));
    auto F = f.antidifferentiate(Rational(0));
    CHECK(F(Rational(1, 2)) == Rational(1, 2));
    CHECK(F.differentiate() == f);

    // antiderivative of a quadratic is rejected
    auto q = PiecewisePoly::from_pieces({{Rational(0), Rational(1), Poly{Rational(0), Rational(0), Rational(1)}}});
    CHECK_THROWS_AS(q.antidifferentiate(Rational(0)), std::domain_error);
    CHECK_NOTHROW(q.differentiate().antidifferentiate(Rational(0)));
}

TEST_CASE("absolute splits at rational roots and is idempotent") {
    auto lin = PiecewisePoly::from_pieces({{Rational(0), Rational(2), Poly{Rational(-1), Rational(1)}}});
    auto a = lin.absolute();
    REQUIRE(a.pieces().size() == 2);
    CHECK(a(Rational(1, 2)) == Rational(1, 2));
    CHECK(a(Rational(3, 2)) == Rational(1, 2));
    CHECK(a.absolute() == a);

    auto f = two_boxes();
    CHECK(f.absolute() == f);

    // quadratic with irrational interior sign change: t^2 - 2 on [0, 2]
    auto q = PiecewisePoly::from_pieces({{Rational(0), Rational(2), Poly{Rational(-2), Rational(0), Rational(1)}}});
    CHECK_THROWS_AS(q.absolute(), rical::NeedsEnclosure);
    // same quadratic on [2, 3] has no interior root: fine
    auto q2 = PiecewisePoly::from_pieces({{Rational(2), Rational(3), Poly{Rational(-2), Rational(0), Rational(1)}}});
    CHECK_NOTHROW(q2.absolute());
}

TEST_CASE("dilation") {
    auto f = PiecewisePoly::indicator(Rational(0), Rational(6));
    CHECK(f.dilate(Rational(6)) == PiecewisePoly::indicator(Rational(0), Rational(1)));
    CHECK(PiecewisePoly::indicator(Rational(0), Rational(1)).dilate(Rational(1, 2)) ==
          PiecewisePoly::indicator(Rational(0), Rational(2)));

    auto g = StepFunction({Rational(0), Rational(1), Rational(2)}, {Rational(3), Rational(1)}).to_piecewise();
    CHECK(g.dilate(Rational(6)).dilate(Rational(1, 6)) == g);

    // integral scaling: s * int D_s f = int f
    auto d = g.dilate(Rational(5, 3));
    CHECK(d.integral() * Rational(5, 3) == g.integral());
    CHECK_THROWS_AS(g.dilate(Rational(0)), std::domain_error);
}

TEST_CASE("geometric mean of step functions") {
    StepFunction g({Rational(0), Rational(1)}, {Rational(4)});
    StepFunction h({Rational(0), Rational(1)}, {Rational(1)});
    auto gm = rical::geometric_mean(g, h);
    REQUIRE(gm.values.size() == 1);
    CHECK(gm.values[0].is_exact());
    CHECK(gm.values[0].lo == Rational(2));

    StepFunction g2({Rational(0), Rational(1)}, {Rational(2)});
    auto gm2 = rical::geometric_mean(g2, h, Rational(1, 1000000000));
    CHECK(gm2.values[0].width() <= Rational(1, 1000000000));
    CHECK(gm2.values[0].lo.to_double() <= 1.4142135624);
    CHECK(gm2.values[0].hi.to_double() >= 1.4142135623);

    auto gm3 = rical::geometric_mean(g, g);
    CHECK(gm3.lower() == g);
    CHECK(gm3.upper() == g);

    StepFunction neg({Rational(0), Rational(1)}, {Rational(-1)});
    CHECK_THROWS_AS(rical::geometric_mean(neg, h), std::domain_error);
}

TEST_CASE("step function canonical form") {
    StepFunction s({Rational(0), Rational(1), Rational(2), Rational(3)},
                   {Rational(2), Rational(2), Rational(0)});
    CHECK(s.piece_count() == 1);  // mergeable neighbors merged, zero tail dropped
    CHECK(s.breakpoints().back() == Rational(2));
    CHECK(s(Rational(3, 2)) == Rational(2));

    StepFunction t({Rational(0), Rational(1), Rational(2)}, {Rational(3), Rational(1)});
    CHECK(t == StepFunction::from_piecewise(t.to_piecewise()));
    CHECK(t.is_nonincreasing());
    StepFunction u({Rational(1), Rational(2)}, {Rational(1)});
    CHECK(!u.is_nonincreasing());  // implicit zero before support
}

TEST_CASE("continuity classification") {
    auto box = PiecewisePoly::indicator(Rational(0), Rational(1));
    CHECK(box.continuity() == rical::Continuity::None);
    auto ramp = box.antidifferentiate(Rational(0));  // ramp up, cut at 1
    CHECK(ramp.continuity() == rical::Continuity::None);  // jumps to 0 past the cut
    // +1/-1/+1 second derivative: its antiderivative is a C0 tent with zero
    // net mass, and the next antiderivative is C1
    auto dd = StepFunction({Rational(0), Rational(1), Rational(3), Rational(4)},
                           {Rational(1), Rational(-1), Rational(1)})
                  .to_piecewise();
    auto updown = dd.antidifferentiate(Rational(0));
    CHECK(updown.continuity() == rical::Continuity::C0);
    CHECK(updown.integral() == Rational(0));
    auto smooth = updown.antidifferentiate(Rational(0));
    CHECK(smooth.continuity() == rical::Continuity::C1);
}

TEST_CASE("json round trip is bit exact") {
    auto f = PiecewisePoly::from_pieces({
        {Rational(0), Rational(1, 3), Poly{Rational(1, 7), Rational(-2, 5), Rational(3)}},
        {Rational(1, 2), Rational(5, 2), Poly{Rational(-1)}},
    });
    auto j = rical::to_json(f);
    CHECK(rical::piecewise_from_json(j) == f);
    CHECK(rical::to_json(rical::piecewise_from_json(j)).dump() == j.dump());

    // randomized round trips
    rical::Rng rng(7);
    for (int i = 0; i < 50; ++i) {
        auto g = rical::random_step(rng, 6).to_piecewise();
        CHECK(rical::piecewise_from_json(rical::to_json(g)) == g);
    }
}

TEST_CASE("pointwise ordering of piecewise functions") {
    auto f = PiecewisePoly::indicator(Rational(0), Rational(1));
    auto g = f.scale(Rational(2));
    CHECK(rical::pointwise_le(f, g));
    CHECK(!rical::pointwise_le(g, f));
    // quadratic vs constant cap: 1 - t^2 <= 1 on [-1, 1]
    auto q = PiecewisePoly::from_pieces({{Rational(-1), Rational(1), Poly{Rational(1), Rational(0), Rational(-1)}}});
    CHECK(rical::pointwise_le(q, PiecewisePoly::constant(Rational(1), Rational(-1), Rational(1))));
}
