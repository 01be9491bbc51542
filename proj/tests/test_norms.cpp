#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "rical/calderon.hpp"
#include "rical/norms.hpp"
#include "rical/rng.hpp"
#include "rical/serialize.hpp"

using rical::Enclosure;
using rical::LorentzParams;
using rical::NormDescriptor;
using rical::NormValue;
using rical::PiecewisePoly;
using rical::Rational;
using rical::StepFunction;
using rical::YoungFunction;

namespace {
const Rational kTol(1, 1000000000);

StepFunction step_2_1() {
    // 2 on [0,1), 1 on [1,4)
    return StepFunction({Rational(0), Rational(1), Rational(4)}, {Rational(2), Rational(1)});
}
}  // namespace

TEST_CASE("lorentz parameter validation") {
    CHECK_NOTHROW(LorentzParams(Rational(2), Rational(1)));
    CHECK_NOTHROW(LorentzParams(Rational(1), Rational(1)));
    CHECK_THROWS_AS(LorentzParams(Rational(1), Rational(2)), std::invalid_argument);
    CHECK_THROWS_AS(LorentzParams(Rational(1), std::nullopt), std::invalid_argument);
    CHECK_THROWS_AS(LorentzParams(Rational(1, 2), Rational(1)), std::invalid_argument);
    CHECK_THROWS_AS(LorentzParams(Rational(2), Rational(1, 2)), std::invalid_argument);
}

TEST_CASE("lorentz norm closed forms") {
    // L^{2,2} = L^2: indicator has norm 1
    auto ind = PiecewisePoly::indicator(Rational(0), Rational(1));
    NormValue v = rical::lorentz_norm(ind, LorentzParams(Rational(2), Rational(2)), kTol);
    CHECK(v.exact);
    CHECK(v.value.lo == Rational(1));

    // f* = 2 chi_[0,1) + chi_[1,4): P=2, p=1 -> 2*2*1 + 1*2*(2-1) = 6
    NormValue w = rical::lorentz_norm(step_2_1(), LorentzParams(Rational(2), Rational(1)), kTol);
    CHECK(w.exact);
    CHECK(w.value.lo == Rational(6));

    // p = infinity: sup t^(1/2) f*(t) = max(2*1, 1*sqrt(4)) = 2
    NormValue u = rical::lorentz_norm(step_2_1(), LorentzParams(Rational(2), std::nullopt), kTol);
    CHECK(u.value.contains(Rational(2)));
    CHECK(u.value.width() <= kTol);

    // P = p = 1 is plain L^1
    NormValue l1 = rical::lorentz_norm(step_2_1(), LorentzParams(Rational(1), Rational(1)), kTol);
    CHECK(l1.exact);
    CHECK(l1.value.lo == Rational(5));
}

TEST_CASE("lorentz norm with non-integer fine index on steps") {
    // ||f||_{2,1/2}... p must be >= 1; use p = 3/2, P = 2 on the indicator:
    // integral of t^(3/4 - 1) dt over [0,1] = 4/3, norm = (4/3)^(2/3)
    NormValue v = rical::lorentz_norm(PiecewisePoly::indicator(Rational(0), Rational(1)),
                                      LorentzParams(Rational(2), Rational(3, 2)), kTol);
    double ref = std::pow(4.0 / 3.0, 2.0 / 3.0);
    CHECK(v.value.lo.to_double() <= ref + 1e-9);
    CHECK(v.value.hi.to_double() >= ref - 1e-9);
}

TEST_CASE("lorentz norm properties: homogeneity, monotonicity, invariance") {
    rical::Rng rng(21);
    LorentzParams prm(Rational(3), Rational(2));
    for (int i = 0; i < 12; ++i) {
        auto s = rical::random_step(rng, 8);
        if (s.is_zero()) continue;
        auto f = s.to_piecewise();
        NormValue base = rical::lorentz_norm(f, prm, kTol);
        // homogeneity with c = -3/2 (|c| factor)
        NormValue scaled = rical::lorentz_norm(f.scale(Rational(-3, 2)), prm, kTol);
        Enclosure expect = base.value * Rational(3, 2);
        CHECK(scaled.value.lo <= expect.hi + kTol);
        CHECK(scaled.value.hi + kTol >= expect.lo);
        // rearrangement invariance: evaluate on f and on f*
        auto star = rical::rearrangement(f).fn();
        NormValue vstar = rical::lorentz_norm(star, prm, kTol);
        CHECK(vstar.value.lo <= base.value.hi + kTol);
        CHECK(vstar.value.hi + kTol >= base.value.lo);
        // lattice monotonicity against 2|f|
        NormValue dbl = rical::lorentz_norm(f.scale(Rational(2)), prm, kTol);
        CHECK(base.value.lo <= dbl.value.hi);
    }
}

TEST_CASE("lorentz diagonal consistency: p = P matches direct quadrature") {
    // hat function: t on [0,1), 2-t on [1,2): L^2 norm^2 = 2/3
    auto hat = PiecewisePoly::from_pieces({
        {Rational(0), Rational(1), rical::Poly{Rational(0), Rational(1)}},
        {Rational(1), Rational(2), rical::Poly{Rational(2), Rational(-1)}},
    });
    NormValue v = rical::lorentz_norm(hat, LorentzParams(Rational(2), Rational(2)), kTol);
    Rational sq = hat.multiply(hat).integral();
    CHECK(sq == Rational(2, 3));
    CHECK(v.value.lo * v.value.lo <= sq);
    CHECK(v.value.hi * v.value.hi >= sq);
}

TEST_CASE("exact dilation law on the formal closed form") {
    // ||D_lambda f||^p = lambda^(-p/P) ||f||^p with lambda = 8, P = 3, p = 2:
    // the formal sums match exactly after dividing bases by 8 and scaling by
    // 8^(-2/3) = 1/4.
    auto f = step_2_1().to_piecewise();
    auto star = rical::rearrangement(f);
    auto dstar = rical::rearrangement(f.dilate(Rational(8)));
    rical::FormalPowerSum base = rical::lorentz_power_formal(star, Rational(3), 2);
    rical::FormalPowerSum dil = rical::lorentz_power_formal(dstar, Rational(3), 2);
    // rebase the dilated sum onto the original breakpoints and compare with
    // the base sum scaled by 8^(-p/P) = 1/4, all structurally exact
    auto rebased = dil.rebased(Rational(8));
    REQUIRE(rebased.has_value());
    CHECK(*rebased == base.scaled(Rational(1, 4)));
    Enclosure eb = base.evaluate(kTol), ed = dil.evaluate(kTol);
    CHECK(ed.lo <= eb.hi / Rational(4) + kTol);
    CHECK(ed.hi + kTol >= eb.lo / Rational(4));
}

TEST_CASE("lp limit norms") {
    auto f = step_2_1().to_piecewise();
    CHECK(rical::lp_limit_norm(f, rical::LpLimit::L1) == Rational(5));
    CHECK(rical::lp_limit_norm(f, rical::LpLimit::Linf) == Rational(2));
    auto boxes = StepFunction({Rational(0), Rational(1), Rational(3)}, {Rational(2), Rational(1)});
    CHECK(rical::lp_limit_norm(boxes.to_piecewise(), rical::LpLimit::L1) == Rational(4));
}

TEST_CASE("orlicz norm: exact power families") {
    // phi(t) = t^2, f = 2 chi_(0,1): modular 4/l^2 = 1 at l = 2
    auto f = PiecewisePoly::constant(Rational(2), Rational(0), Rational(1));
    NormValue v = rical::orlicz_norm(f, YoungFunction::power(Rational(2)), kTol);
    CHECK(v.value.width() <= kTol);
    CHECK(v.value.lo <= Rational(2));
    CHECK(v.value.hi >= Rational(2) - kTol);

    // phi(t) = t: Luxemburg = L1: f = chi_(0,3) -> 3
    NormValue w = rical::orlicz_norm(PiecewisePoly::indicator(Rational(0), Rational(3)),
                                     YoungFunction::power(Rational(1)), kTol);
    CHECK(w.value.contains(Rational(3)));
    CHECK(w.value.width() <= kTol);

    CHECK(rical::orlicz_norm(PiecewisePoly::zero(), YoungFunction::power(Rational(2)), kTol).value.is_exact());
}

TEST_CASE("orlicz norm: exponential family hits 1/ln 2") {
    // phi(t) = e^t - 1, f = chi_(0,1): solve e^(1/l) - 1 = 1 -> l = 1/ln 2
    NormValue v = rical::orlicz_norm(PiecewisePoly::indicator(Rational(0), Rational(1)),
                                     YoungFunction::exp_power(Rational(1)), kTol);
    double ref = 1.0 / std::log(2.0);  // 1.4426950408889634
    CHECK(v.value.width() <= kTol);
    CHECK(v.value.lo.to_double() <= ref + 1e-9);
    CHECK(v.value.hi.to_double() >= ref - 1e-9);
}

TEST_CASE("luxemburg bracketing invariant") {
    rical::Rng rng(31);
    auto phi = YoungFunction::power(Rational(2));
    for (int i = 0; i < 8; ++i) {
        auto s = rical::random_nonneg_step(rng, 6);
        if (s.is_zero()) continue;
        auto f = s.to_piecewise();
        NormValue v = rical::orlicz_norm(f, phi, kTol);
        // modular at hi <= 1 < modular at lo(1 - tol)
        auto modular_exact = [&](const Rational& lam) {
            Rational acc(0);
            for (const auto& pc : f.pieces()) {
                Rational val = rical::poly::eval(pc.p, pc.lo).abs() / lam;
                acc += val * val * (pc.hi - pc.lo);
            }
            return acc;
        };
        CHECK(modular_exact(v.value.hi) <= Rational(1));
        CHECK(modular_exact(v.value.lo * (Rational(1) - kTol)) > Rational(1));
    }
}

TEST_CASE("orlicz norm of affine pieces via monotone brackets") {
    // phi(t) = t^2 on the hat function: the exact-integer path integrates
    // polynomials; compare against hand value ||hat||_2 = sqrt(2/3)
    auto hat = PiecewisePoly::from_pieces({
        {Rational(0), Rational(1), rical::Poly{Rational(0), Rational(1)}},
        {Rational(1), Rational(2), rical::Poly{Rational(2), Rational(-1)}},
    });
    NormValue v = rical::orlicz_norm(hat, YoungFunction::power(Rational(2)), kTol);
    double ref = std::sqrt(2.0 / 3.0);
    CHECK(v.value.lo.to_double() <= ref + 1e-9);
    CHECK(v.value.hi.to_double() >= ref - 1e-9);

    // power-log family on a step function, against a double-precision oracle
    auto f = PiecewisePoly::constant(Rational(3), Rational(0), Rational(2));
    auto phi = YoungFunction::power_log(Rational(2), Rational(1));
    NormValue w = rical::orlicz_norm(f, phi, Rational(1, 1000000));
    // oracle: solve 2*(3/l)^2*log(1+3/l) = 1 by bisection in doubles
    double lo = 0.1, hi = 100;
    for (int i = 0; i < 200; ++i) {
        double mid = 0.5 * (lo + hi), a = 3.0 / mid;
        (2 * a * a * std::log1p(a) > 1 ? lo : hi) = mid;
    }
    CHECK(w.value.lo.to_double() <= lo + 1e-6);
    CHECK(w.value.hi.to_double() >= hi - 1e-6);
}

TEST_CASE("derive lorentz target") {
    auto t1 = rical::derive_lorentz_target(Rational(2), Rational(1), Rational(2), std::nullopt);
    CHECK(t1.P == Rational(2));
    REQUIRE(t1.p.has_value());
    CHECK(*t1.p == Rational(2));

    auto t2 = rical::derive_lorentz_target(Rational(2), Rational(2), Rational(2), Rational(2));
    CHECK(t2.P == Rational(2));
    CHECK(*t2.p == Rational(2));

    auto t3 = rical::derive_lorentz_target(Rational(2), Rational(2), Rational(6), Rational(2));
    CHECK(t3.P == Rational(3));
    CHECK(*t3.p == Rational(2));

    auto t4 = rical::derive_lorentz_target(Rational(2), std::nullopt, Rational(2), std::nullopt);
    CHECK_FALSE(t4.p.has_value());

    CHECK_THROWS_AS(rical::derive_lorentz_target(Rational(1), Rational(1), Rational(2), Rational(2)),
                    std::invalid_argument);
}

TEST_CASE("cl_upper factorization bound") {
    auto X = NormDescriptor::l1();
    // identity factorization: g = h = f gives ||f||_X for any theta
    auto f = step_2_1().to_piecewise();
    NormValue id = rical::cl_upper(f, f, Rational(1, 3), X, X, kTol);
    CHECK(id.value.contains(Rational(5)));

    auto g = PiecewisePoly::constant(Rational(4), Rational(0), Rational(1));
    auto h = PiecewisePoly::indicator(Rational(0), Rational(1));
    NormValue v = rical::cl_upper(g, h, Rational(1, 2), X, X, kTol);
    CHECK(v.value.contains(Rational(2)));
}

TEST_CASE("cl_norm_estimate: diagonal and convexification") {
    auto l1 = NormDescriptor::l1();
    auto linf = NormDescriptor::linf();

    // equal spaces: the diagonal factorization is optimal from the start
    StepFunction f({Rational(0), Rational(1)}, {Rational(1)});
    auto est = rical::cl_norm_estimate(f, l1, l1, Rational(1, 2), 4, kTol);
    CHECK(est.upper.contains(Rational(1)));
    CHECK(est.upper.width() <= Rational(1, 1000));

    // f = chi_(0,4), X = L1, Y = Linf, theta = 1/2: balance 4c = 1/c -> 2,
    // matching the convexification value ||f^2||_1^(1/2)
    StepFunction wide({Rational(0), Rational(4)}, {Rational(1)});
    auto est2 = rical::cl_norm_estimate(wide, l1, linf, Rational(1, 2), 4, kTol);
    CHECK(est2.upper.hi.to_double() <= 2.0 + 1e-6);
    CHECK(est2.upper.lo.to_double() >= 2.0 - 1e-6);
    // witness is a valid factorization: f <= sqrt(g h) holds exactly here
    StepFunction::zip(est2.g, est2.h, [&](const Rational& lo, const Rational& hi, const Rational& a, const Rational& b) {
        Rational fv = wide((lo + hi) / Rational(2));
        CHECK(fv * fv <= a * b);
    });

    // upper bound never exceeds the trivial diagonal bound
    StepFunction two = step_2_1();
    auto est3 = rical::cl_norm_estimate(two, l1, l1, Rational(1, 2), 3, kTol);
    CHECK(est3.upper.hi <= Rational(5) + kTol);
}

TEST_CASE("cl consistency: equal spaces recover the base norm for any theta") {
    rical::Rng rng(55);
    auto l1 = NormDescriptor::l1();
    for (int i = 0; i < 6; ++i) {
        auto s = rical::random_nonneg_step(rng, 5);
        if (s.is_zero()) continue;
        for (const auto& theta : {Rational(1, 2), Rational(1, 3), Rational(3, 4)}) {
            auto est = rical::cl_norm_estimate(s, l1, l1, theta, 3, kTol);
            Rational exact = rical::lp_limit_norm(s.to_piecewise(), rical::LpLimit::L1);
            CHECK(est.upper.hi <= exact * (Rational(1) + Rational(1, 1000000)));
            CHECK(est.upper.hi >= exact * (Rational(1) - Rational(1, 1000000)));
        }
    }
}

TEST_CASE("factorization inequality: estimate never beats the product bound") {
    // the estimate of || |g|^t |h|^(1-t) || never exceeds ||g||_X^t ||h||_Y^(1-t)
    rical::Rng rng(2);
    auto l1 = NormDescriptor::l1();
    auto linf = NormDescriptor::linf();
    int checked = 0;
    for (int i = 0; i < 40; ++i) {
        auto g = rical::random_nonneg_step(rng, 6);
        auto h = rical::random_nonneg_step(rng, 6);
        if (g.is_zero() || h.is_zero()) continue;
        auto prod = rical::geometric_mean(g, h, Rational(1, Rational(10).pow_int(12).num().get_si()));
        StepFunction fhi = prod.upper();
        for (int which = 0; which < 2; ++which) {
            const NormDescriptor& X = which == 0 ? l1 : linf;
            const NormDescriptor& Y = which == 0 ? linf : l1;
            auto est = rical::cl_norm_estimate(fhi, X, Y, Rational(1, 2), 6, kTol);
            NormValue bound = rical::cl_upper(g.to_piecewise(), h.to_piecewise(), Rational(1, 2), X, Y, kTol);
            CHECK(est.upper.lo <= bound.value.hi + est.upper.width() + bound.value.width() + Rational(1, 1000000));
            ++checked;
        }
    }
    CHECK(checked >= 40);
}

TEST_CASE("norm descriptor json round trip") {
    auto d1 = NormDescriptor::make_lorentz(LorentzParams(Rational(5, 2), Rational(7, 3)));
    auto j1 = rical::to_json(d1);
    CHECK(j1.dump() == rical::to_json(rical::descriptor_from_json(j1)).dump());

    auto d2 = NormDescriptor::make_lorentz(LorentzParams(Rational(2), std::nullopt));
    CHECK(rical::to_json(rical::descriptor_from_json(rical::to_json(d2))).dump() == rical::to_json(d2).dump());

    auto d3 = NormDescriptor::make_orlicz(YoungFunction::power_log(Rational(2), Rational(1, 2)));
    CHECK(rical::to_json(rical::descriptor_from_json(rical::to_json(d3))).dump() == rical::to_json(d3).dump());

    auto d4 = NormDescriptor::cl_product(NormDescriptor::l1(), d1, Rational(1, 2));
    CHECK(rical::to_json(rical::descriptor_from_json(rical::to_json(d4))).dump() == rical::to_json(d4).dump());

    // nesting depth is capped at one
    CHECK_THROWS_AS(NormDescriptor::cl_product(d4, NormDescriptor::l1(), Rational(1, 2)),
                    std::invalid_argument);
}
