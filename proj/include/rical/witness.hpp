#pragma once

// Constructive witness families.
//
// lan_bump(alpha): a W^{2,inf} bump supported in [0,1] whose derivative has
// |{|u'| >= alpha}| >= 1/6 while |u| <= 1/3 and |u''| <= 6 alpha^2. One
// period of u' on [0, 1/alpha] is the continuous piecewise-affine wave
//   6a^2 t, a, 3a - 6a^2 t, -a, -6a + 6a^2 t
// on the uniform grid k/(6a), replicated floor(alpha) times and extended by
// zero. (The final ramp must be -6a + 6a^2 t: it rises from -a back to 0 at
// the period end, keeping u' continuous and closing u to zero.)
//
// mount_filip(n): the two-peak family on [0,2] with
//   u'' = n (chi_(0,1/n) - chi_(1-1/n,1+1/n) + chi_(2-1/n,2)),
// whose derivative plateaus at +-1; the ratio of its running averages
// separates the double star of u' from the double star of sqrt(|u''||u|).
//
// monotone_factorization: rearrange, dilate by 1/2, average onto the unit
// grid, and take the upper envelope -- produces nonincreasing step factors
// g, h with f <= sqrt(g h) and h <= g.
//
// bounded_witness / refined_witness: the block trains eta = sum b_k u_k and
// their n-grid compressions, with the step envelopes and the exact
// postcondition checks they are designed to satisfy.

#include <sstream>
#include <stdexcept>
#include <utility>
#include <vector>

#include "rical/piecewise.hpp"
#include "rical/rearrange.hpp"

namespace rical {

struct BumpTriple {
    PiecewisePoly u;   // degree <= 2
    PiecewisePoly u1;  // = u', degree <= 1
    PiecewisePoly u2;  // = u'', degree 0
    Rational alpha;    // construction parameter (lan_bump) or n (mount_filip)

    void validate_derivatives() const {
        if (!(u.differentiate() == u1) || !(u1.differentiate() == u2))
            throw std::logic_error("BumpTriple: stored derivatives are inconsistent");
    }
};

inline BumpTriple lan_bump(const Rational& alpha) {
    if (alpha < Rational(1)) throw std::invalid_argument("lan_bump: alpha must be >= 1");
    const Rational a = alpha;
    const Rational a2_6 = Rational(6) * a * a;
    mpz_class periods_z = a.floor();
    long periods = periods_z.get_si();
    std::vector<Piece> du;
    for (long k = 0; k < periods; ++k) {
        Rational base = Rational(k) / a;  // period start
        auto grid = [&](long i) { return base + Rational(i) / (Rational(6) * a); };
        // u'(t) on the period, in global coordinates t
        // piece polys: 6a^2 (t - base) etc.; expand the shift exactly
        auto shifted = [&](Rational c0, Rational c1) {
            // c0 + c1 (t - base)
            return Poly{c0 - c1 * base, c1};
        };
        du.push_back({grid(0), grid(1), shifted(Rational(0), a2_6)});
        du.push_back({grid(1), grid(2), Poly{a}});
        du.push_back({grid(2), grid(4), shifted(Rational(3) * a, -a2_6)});
        du.push_back({grid(4), grid(5), Poly{-a}});
        du.push_back({grid(5), grid(6), shifted(Rational(-6) * a, a2_6)});
    }
    BumpTriple out;
    out.alpha = alpha;
    out.u1 = PiecewisePoly::from_pieces(std::move(du));
    out.u = out.u1.antidifferentiate(Rational(0));
    out.u2 = out.u1.differentiate();
    if (out.u1.continuity() == Continuity::None)
        throw std::logic_error("lan_bump: derivative is not continuous");
    auto sup = out.u.support();
    if (sup && (sup->first < Rational(0) || sup->second > Rational(1)))
        throw std::logic_error("lan_bump: support escapes [0,1]");
    return out;
}

inline BumpTriple mount_filip(long n) {
    if (n < 4) throw std::invalid_argument("mount_filip: n must be >= 4");
    Rational N(n), inv(1, n);
    std::vector<Piece> dd;
    dd.push_back({Rational(0), inv, Poly{N}});
    dd.push_back({Rational(1) - inv, Rational(1) + inv, Poly{-N}});
    dd.push_back({Rational(2) - inv, Rational(2), Poly{N}});
    BumpTriple out;
    out.alpha = N;
    out.u2 = PiecewisePoly::from_pieces(std::move(dd));
    out.u1 = out.u2.antidifferentiate(Rational(0));
    out.u = out.u1.antidifferentiate(Rational(0));
    if (out.u(Rational(2)) != Rational(0) || !out.u.is_nonneg())
        throw std::logic_error("mount_filip: construction invariant failed");
    return out;
}

// ---------------------------------------------------------------------------
// Monotone factorization of a dominated step function.

// Hypothesis: f (nonincreasing step) satisfies f <= sqrt(|u| |v|) after
// rearrangement alignment, i.e. f(t)^2 <= u*(t/2) v*(t/2). Produces unit-grid
// nonincreasing steps g, h with f <= sqrt(g h) and h <= g.
inline std::pair<StepFunction, StepFunction> monotone_factorization(const StepFunction& f,
                                                                    const PiecewisePoly& u,
                                                                    const PiecewisePoly& v) {
    if (!f.is_nonincreasing() || !f.is_nonneg())
        throw std::invalid_argument("monotone_factorization: f must be a nonnegative nonincreasing step");
    PiecewisePoly eta = rearrangement(u).fn().dilate(Rational(1, 2));
    PiecewisePoly gamma = rearrangement(v).fn().dilate(Rational(1, 2));
    // hypothesis check: f^2 <= eta*gamma on the merged partition
    PiecewisePoly fsq = f.to_piecewise().multiply(f.to_piecewise());
    std::vector<Rational> cuts = PiecewisePoly::merged_breakpoints(fsq, eta);
    for (const auto& t : PiecewisePoly::merged_breakpoints(eta, gamma)) cuts.push_back(t);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    for (size_t i = 0; i + 1 < cuts.size(); ++i) {
        Rational mid = (cuts[i] + cuts[i + 1]) / Rational(2);
        Poly prod = poly::mul(eta.piece_poly_at(mid), gamma.piece_poly_at(mid));
        Poly diff = poly::add(prod, poly::scale(fsq.piece_poly_at(mid), Rational(-1)));
        if (!poly::nonneg_on(diff, cuts[i], cuts[i + 1])) {
            std::ostringstream os;
            os << "monotone_factorization: hypothesis f <= sqrt(uv) fails on ["
               << cuts[i].str() << ", " << cuts[i + 1].str() << ")";
            throw std::invalid_argument(os.str());
        }
    }
    StepFunction r = condexp_T(eta);
    StepFunction h = condexp_T(gamma);
    // g = max(r, h) pointwise
    std::vector<Rational> bps, vals;
    StepFunction::zip(r, h, [&](const Rational& lo, const Rational& hi, const Rational& x, const Rational& y) {
        if (bps.empty()) bps.push_back(lo);
        vals.push_back(max(x, y));
        bps.push_back(hi);
    });
    StepFunction g = bps.empty() ? StepFunction::zero() : StepFunction(bps, vals);
    // per-interval Hoelder: c_k^2 <= a_k b_k, hence f <= sqrt(g h)
    StepFunction::zip(g, h, [&](const Rational& lo, const Rational& hi, const Rational& aa, const Rational& bb) {
        Rational c = f((lo + hi) / Rational(2));
        if (c * c > aa * bb) {
            std::ostringstream os;
            os << "monotone_factorization: output domination fails on [" << lo.str() << ", " << hi.str() << ")";
            throw std::logic_error(os.str());
        }
    });
    return {g, h};
}

// ---------------------------------------------------------------------------
// Optimality witnesses.

struct OptimalityWitness {
    PiecewisePoly eta, eta1, eta2;       // eta and its derivatives
    std::vector<Rational> a, b, c;       // per-block coefficients
    StepFunction g, h, f;                // step envelopes on the block grid
    long refine = 1;                     // grid compression factor n

    // the three exact postconditions, plus structural derivative consistency
    void verify() const {
        if (!(eta.differentiate() == eta1) || !(eta1.differentiate() == eta2))
            throw std::logic_error("OptimalityWitness: stored derivatives are inconsistent");
        if (!pointwise_le(eta, h.to_piecewise()))
            throw std::logic_error("OptimalityWitness: eta exceeds h");
        Rational bound_scale = Rational(6) * Rational(refine) * Rational(refine);
        if (!pointwise_le(eta2.absolute(), g.to_piecewise().scale(bound_scale)))
            throw std::logic_error("OptimalityWitness: |eta''| exceeds 6 n^2 g");
        PiecewisePoly lower = f.to_piecewise().dilate(Rational(6)).scale(Rational(refine));
        if (!pointwise_le(lower, rearrangement(eta1).fn()))
            throw std::logic_error("OptimalityWitness: rearranged eta' falls below n D_6 f");
    }
};

namespace detail {

inline StepFunction grid_step(const std::vector<Rational>& coef, long n) {
    std::vector<Rational> bps{Rational(0)}, vals;
    for (size_t k = 0; k < coef.size(); ++k) {
        vals.push_back(coef[k]);
        bps.push_back(Rational(static_cast<long>(k) + 1) / Rational(n));
    }
    return StepFunction(bps, vals);
}

inline OptimalityWitness assemble_witness(const std::vector<Rational>& a, const std::vector<Rational>& b,
                                          const std::vector<Rational>& c, long n) {
    OptimalityWitness w;
    w.a = a;
    w.b = b;
    w.c = c;
    w.refine = n;
    PiecewisePoly eta = PiecewisePoly::zero();
    PiecewisePoly eta1 = PiecewisePoly::zero();
    PiecewisePoly eta2 = PiecewisePoly::zero();
    for (size_t k = 0; k < c.size(); ++k) {
        if (b[k].is_zero() || c[k].is_zero()) continue;
        Rational alpha = c[k] / b[k];
        BumpTriple bump = lan_bump(alpha);
        // block k lives on [(k)/n, (k+1)/n): u(n t - k)
        Rational shift(static_cast<long>(k));
        auto place = [&](const PiecewisePoly& fn) {
            return fn.compose_affine(Rational(n), -shift);
        };
        eta = eta + place(bump.u).scale(b[k]);
        eta1 = eta1 + place(bump.u1).scale(b[k] * Rational(n));
        eta2 = eta2 + place(bump.u2).scale(b[k] * Rational(n) * Rational(n));
    }
    w.eta = std::move(eta);
    w.eta1 = std::move(eta1);
    w.eta2 = std::move(eta2);
    w.g = grid_step(a, n);
    w.h = grid_step(b, n);
    w.f = grid_step(c, n);
    return w;
}

}  // namespace detail

// eta(t) = sum_k b_k u_k(t - k + 1) with u_k = lan_bump(c_k / b_k).
// Requires positive sequences with b_k <= c_k <= a_k; additionally
// c_k^2 <= a_k b_k (automatic for c = sqrt(ab) factorizations), without
// which the advertised bound |eta''| <= 6 g cannot hold.
inline OptimalityWitness bounded_witness(const std::vector<Rational>& a, const std::vector<Rational>& b,
                                         const std::vector<Rational>& c) {
    if (a.size() != b.size() || b.size() != c.size() || a.empty())
        throw std::invalid_argument("bounded_witness: sequences must be nonempty and equally long");
    for (size_t k = 0; k < a.size(); ++k) {
        if (a[k].sign() <= 0 || b[k].sign() <= 0 || c[k].sign() <= 0)
            throw std::invalid_argument("bounded_witness: sequences must be positive");
        if (b[k] > c[k] || c[k] > a[k])
            throw std::invalid_argument("bounded_witness: ordering b_k <= c_k <= a_k violated");
        if (c[k] * c[k] > a[k] * b[k])
            throw std::invalid_argument("bounded_witness: c_k^2 <= a_k b_k violated");
    }
    OptimalityWitness w = detail::assemble_witness(a, b, c, 1);
    w.verify();
    return w;
}

// Samples nonincreasing profiles g, h (h <= g, supports in [0,1]) at the
// left limits of k/n, sets c = sqrt(ab) (a high-precision rational
// under-approximation in [b, sqrt(ab)] when the square root is irrational),
// and builds eta_n(t) = sum_k b_k u_k(n t - k + 1).
inline OptimalityWitness refined_witness(const StepFunction& g, const StepFunction& h, long n) {
    if (n < 1) throw std::invalid_argument("refined_witness: n must be >= 1");
    if (!g.is_nonincreasing() || !h.is_nonincreasing())
        throw std::invalid_argument("refined_witness: profiles must be nonincreasing");
    if (!h.is_nonneg()) throw std::invalid_argument("refined_witness: h must be nonnegative");
    if (!pointwise_le(h.to_piecewise(), g.to_piecewise()))
        throw std::invalid_argument("refined_witness: h <= g violated");
    for (const StepFunction* s : {&g, &h}) {
        if (s->is_zero()) continue;
        if (s->breakpoints().front() < Rational(0) || s->breakpoints().back() > Rational(1))
            throw std::invalid_argument("refined_witness: supports must lie in [0,1]");
    }
    std::vector<Rational> a, b, c;
    Rational prev_c;
    for (long k = 1; k <= n; ++k) {
        Rational t = Rational(k) / Rational(n);
        Rational ak = g.eval_left(t), bk = h.eval_left(t);
        Rational ck(0);
        if (bk.sign() > 0) {
            Rational ab = ak * bk;
            if (auto ex = enc::exact_root(ab, 2)) {
                ck = *ex;
            } else {
                ck = enc::sqrt(ab, Rational(1, 1000000000000L)).lo;
                ck = max(ck, bk);
            }
            if (k > 1) ck = min(ck, prev_c);  // keep c nonincreasing
        }
        prev_c = ck;
        a.push_back(ak);
        b.push_back(bk);
        c.push_back(ck);
    }
    OptimalityWitness w = detail::assemble_witness(a, b, c, n);
    w.verify();
    return w;
}

}  // namespace rical
