#pragma once

// Certified quadrature kernels.
//
// sqrt_poly_integral encloses the integral of sqrt(P) for a quadratic P >= 0.
// The second derivative of sqrt(P) equals -disc(P) / (4 P^(3/2)), so the
// integrand is globally concave or convex on any interval where P > 0, which
// makes the midpoint/trapezoid pair a two-sided bound. Adaptive bisection
// then drives the gap below tolerance, including at endpoint roots of P.
//
// FormalPowerSum is the exact closed-form shape of Lorentz functionals on
// piecewise-polynomial rearrangements: a finite sum of rational multiples of
// rational powers of rational bases. Two such sums can be compared exactly
// (term data), which is what the dilation-invariance checks rely on; they
// evaluate to enclosures on demand.

#include <algorithm>
#include <map>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "rical/enclosure.hpp"
#include "rical/poly.hpp"
#include "rical/rational.hpp"

namespace rical {

// ---------------------------------------------------------------------------
// integral of sqrt(P) over [a, b], P quadratic and nonnegative there.
//
// Complete the square: P = A + c2 (t-m)^2 with m the vertex. The sign of c2
// and of the discriminant selects one of three antiderivatives,
//   c2 < 0:          (s/2) sqrt(P) + (A/(2 sqrt(-c2)))  asin(s sqrt(-c2/A))
//   c2 > 0, A > 0:   (s/2) sqrt(P) + (A/(2 sqrt(c2)))   asinh(s sqrt(c2/A))
//   c2 > 0, A < 0:   (s/2) sqrt(P) + (A/(2 sqrt(c2))) sgn(s) acosh(|s| sqrt(-c2/A))
// with s = t - m, all evaluated through certified kernels.

inline Enclosure sqrt_poly_integral(const Poly& P_in, const Rational& a, const Rational& b,
                                    const Rational& tol = enc::default_tol()) {
    if (a > b) throw std::invalid_argument("sqrt_poly_integral: a > b");
    if (a == b) return Enclosure(Rational(0));
    Poly P = poly::trimmed(P_in);
    if (!poly::nonneg_on(P, a, b))
        throw std::domain_error("sqrt_poly_integral: integrand negative on interval");
    int d = poly::degree(P);
    Rational len = b - a;
    if (d < 0) return Enclosure(Rational(0));
    if (d == 0) return enc::sqrt(P[0], tol / (len + Rational(1))) * len;
    if (d == 1) {
        // antiderivative (2/(3 c1)) (c0 + c1 t)^(3/2)
        const Rational &c0 = P[0], &c1 = P[1];
        Enclosure hi_v = enc::pow(c0 + c1 * b, Rational(3, 2), tol / Rational(8));
        Enclosure lo_v = enc::pow(c0 + c1 * a, Rational(3, 2), tol / Rational(8));
        return (hi_v - lo_v) * (Rational(2) / (Rational(3) * c1));
    }
    const Rational &c1 = P[1], &c2 = P[2];
    Rational m = -c1 / (Rational(2) * c2);
    Rational A = poly::eval(P, m);  // = -disc/(4 c2)
    Rational ktol = tol / Rational(64);
    if (A.is_zero()) {
        // sqrt(c2) * |t - m| (c2 > 0 forced by nonnegativity)
        Rational area(0);
        auto seg = [&](const Rational& l, const Rational& h) {
            if (l >= h) return;
            area += ((l - m).abs() + (h - m).abs()) * (h - l) / Rational(2);
        };
        seg(a, min(b, m));
        seg(max(a, m), b);
        return enc::sqrt(c2, ktol / (area + Rational(1))) * area;
    }
    auto sqrtP = [&](const Rational& t) {
        Rational v = poly::eval(P, t);
        return enc::sqrt(v.sign() < 0 ? Rational(0) : v, ktol);
    };
    auto antideriv = [&](const Rational& t) -> Enclosure {
        Rational s = t - m;
        Enclosure first = sqrtP(t) * (s / Rational(2));
        if (c2.sign() < 0) {
            Enclosure ratio = enc::sqrt(-c2 / A, ktol);
            Enclosure arg = ratio * s;
            Enclosure second = enc::asin(arg, ktol) * (A / Rational(2)) / enc::sqrt(-c2, ktol);
            return first + second;
        }
        if (A.sign() > 0) {
            Enclosure ratio = enc::sqrt(c2 / A, ktol);
            // asinh is monotone; evaluate at interval ends
            Enclosure arg = ratio * s;
            Enclosure ash(enc::asinh(arg.lo, ktol).lo, enc::asinh(arg.hi, ktol).hi);
            return first + ash * (A / Rational(2)) / enc::sqrt(c2, ktol);
        }
        // two real roots, interval on one branch: |s| sqrt(c2/-A) >= 1
        Enclosure ratio = enc::sqrt(c2 / -A, ktol);
        Enclosure arg = ratio * s.abs();
        Rational arglo = max(arg.lo, Rational(1));
        Enclosure ach(enc::acosh(arglo, ktol).lo, enc::acosh(max(arg.hi, Rational(1)), ktol).hi);
        Enclosure second = ach * (A / Rational(2)) / enc::sqrt(c2, ktol);
        return s.sign() >= 0 ? first + second : first - second;
    };
    return antideriv(b) - antideriv(a);
}

// ---------------------------------------------------------------------------
// formal sums of rational powers

class FormalPowerSum {
public:
    FormalPowerSum() = default;

    // coeff * base^exponent, base >= 0
    void add_term(const Rational& coeff, const Rational& base, const Rational& exponent) {
        if (coeff.is_zero()) return;
        if (base.sign() < 0) throw std::domain_error("FormalPowerSum: negative base");
        if (auto ex = enc::exact_pow(base, exponent)) {
            rational_ += coeff * *ex;
            return;
        }
        terms_[{base, exponent}] += coeff;
        if (terms_[{base, exponent}].is_zero()) terms_.erase({base, exponent});
    }

    void add_rational(const Rational& r) { rational_ += r; }

    FormalPowerSum operator+(const FormalPowerSum& o) const {
        FormalPowerSum r = *this;
        r.rational_ += o.rational_;
        for (const auto& [k, c] : o.terms_) {
            r.terms_[k] += c;
            if (r.terms_[k].is_zero()) r.terms_.erase(k);
        }
        return r;
    }

    FormalPowerSum scaled(const Rational& c) const {
        FormalPowerSum r;
        if (c.is_zero()) return r;
        r.rational_ = rational_ * c;
        for (const auto& [k, v] : terms_) r.terms_[k] = v * c;
        return r;
    }

    bool operator==(const FormalPowerSum& o) const {
        return rational_ == o.rational_ && terms_ == o.terms_;
    }

    // Value-preserving change of base: every term c * b^e is rewritten as
    // (c * lambda^-e) * (b*lambda)^e. Succeeds only when lambda^e is rational
    // for every exponent present. Dilation laws compare one sum against the
    // other rebased onto the same breakpoints.
    std::optional<FormalPowerSum> rebased(const Rational& lambda) const {
        if (lambda.sign() <= 0) throw std::domain_error("FormalPowerSum: rebase scale must be positive");
        FormalPowerSum r;
        r.rational_ = rational_;
        for (const auto& [k, c] : terms_) {
            auto f = enc::exact_pow(lambda, k.second);
            if (!f) return std::nullopt;
            r.add_term(c / *f, k.first * lambda, k.second);
        }
        return r;
    }

    Enclosure evaluate(const Rational& tol = enc::default_tol()) const {
        Enclosure acc(rational_);
        if (terms_.empty()) return acc;
        Rational per = tol / Rational(static_cast<long>(terms_.size()));
        for (const auto& [k, c] : terms_) {
            // keep the requested width after multiplying by the coefficient
            Rational mag = c.abs() + Rational(1);
            acc = acc + enc::pow(k.first, k.second, per / mag) * c;
        }
        return acc;
    }

    bool is_rational() const { return terms_.empty(); }
    const Rational& rational_part() const { return rational_; }
    size_t term_count() const { return terms_.size(); }

private:
    Rational rational_;
    std::map<std::pair<Rational, Rational>, Rational> terms_;
};

// integral over [a, b] of t^e * q(t)^p dt as a formal power sum; p >= 1
// integer, 0 <= a <= b, and e > -1 so the endpoint t = 0 is integrable.
inline FormalPowerSum power_integral(const Poly& q, long p, const Rational& e,
                                     const Rational& a, const Rational& b) {
    if (p < 1) throw std::invalid_argument("power_integral: p must be >= 1");
    if (a.sign() < 0 || a > b) throw std::invalid_argument("power_integral: bad interval");
    FormalPowerSum out;
    if (a == b) return out;
    Poly qp{Rational(1)};
    for (long i = 0; i < p; ++i) qp = poly::mul(qp, q);
    for (size_t j = 0; j < qp.size(); ++j) {
        if (qp[j].is_zero()) continue;
        Rational ex = e + Rational(static_cast<long>(j)) + Rational(1);
        if (ex.sign() <= 0) throw std::domain_error("power_integral: divergent exponent");
        Rational coeff = qp[j] / ex;
        out.add_term(coeff, b, ex);
        out.add_term(-coeff, a, ex);
    }
    return out;
}

// sup over [a, b] of t^e |q(t)| for 0 <= a < b, e >= 0. The weighted product
// is stationary where e q(t) + t q'(t) = 0, a polynomial condition, so the
// sup is attained at an endpoint or at one of finitely many critical points;
// irrational critical points are isolated by Sturm bisection and bracketed.
inline Enclosure sup_weighted_abs(const Poly& q, const Rational& e, const Rational& a,
                                  const Rational& b, const Rational& tol = enc::default_tol()) {
    if (!(a >= Rational(0) && a < b)) throw std::invalid_argument("sup_weighted_abs: bad interval");
    if (e.sign() < 0) throw std::invalid_argument("sup_weighted_abs: negative weight exponent");
    Rational node_tol = tol / Rational(8);
    auto val = [&](const Rational& t) {
        return enc::pow(t, e, node_tol) * poly::eval(q, t).abs();
    };
    Enclosure best = val(a).hull(val(b));
    best = Enclosure(max(val(a).lo, val(b).lo), max(val(a).hi, val(b).hi));
    Poly crit = poly::add(poly::scale(q, e), poly::mul(Poly{Rational(0), Rational(1)}, poly::derivative(q)));
    for (auto [l, r] : poly::isolate_roots(crit, a, b)) {
        // shrink the isolating interval until the value bracket is tight
        for (int i = 0; i < 80; ++i) {
            if (r - l <= Rational(0)) break;
            Rational mid = (l + r) / Rational(2);
            int sl = poly::eval(crit, l).sign(), sm = poly::eval(crit, mid).sign();
            if (sm == 0) { l = mid; r = mid; break; }
            if (sl == 0) { r = l; break; }
            if (sl * sm < 0) r = mid; else l = mid;
            auto [mn, mx] = poly::minmax_on(q, l, r);
            Rational amp = max(mx.abs(), mn.abs());
            Rational up = (enc::pow(r, e, node_tol) * amp).hi;
            Rational down = val((l + r) / Rational(2)).lo;
            if (up - down <= tol / Rational(2)) break;
        }
        Rational sample = (l + r) / Rational(2);
        auto [mn, mx] = poly::minmax_on(q, min(l, sample), max(r, sample));
        Rational amp = max(mx.abs(), mn.abs());
        Rational up = (enc::pow(max(r, sample), e, node_tol) * amp).hi;
        Rational down = val(sample).lo;
        best = Enclosure(max(best.lo, down), max(best.hi, up));
    }
    return best;
}

}  // namespace rical
