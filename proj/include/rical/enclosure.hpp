#pragma once

// Certified enclosures: closed rational intervals [lo, hi] guaranteed to
// contain the (possibly irrational) real value they stand for. Arithmetic on
// enclosures is exact interval arithmetic over rationals; the only rounding
// happens in the transcendental/algebraic kernels (roots, powers, exp, log),
// which always round outward and accept a width request.

#include <optional>
#include <stdexcept>
#include <utility>

#include "rical/rational.hpp"

namespace rical {

struct Enclosure {
    Rational lo, hi;

    Enclosure() = default;
    Enclosure(Rational v) : lo(v), hi(std::move(v)) {}
    Enclosure(Rational l, Rational h) : lo(std::move(l)), hi(std::move(h)) {
        if (lo > hi) throw std::invalid_argument("Enclosure: lo > hi");
    }

    bool is_exact() const { return lo == hi; }
    Rational width() const { return hi - lo; }
    Rational mid() const { return (lo + hi) / Rational(2); }
    bool contains(const Rational& v) const { return lo <= v && v <= hi; }

    Enclosure operator-() const { return {-hi, -lo}; }
    Enclosure operator+(const Enclosure& o) const { return {lo + o.lo, hi + o.hi}; }
    Enclosure operator-(const Enclosure& o) const { return {lo - o.hi, hi - o.lo}; }
    Enclosure operator*(const Enclosure& o) const {
        Rational a = lo * o.lo, b = lo * o.hi, c = hi * o.lo, d = hi * o.hi;
        return {min(min(a, b), min(c, d)), max(max(a, b), max(c, d))};
    }
    Enclosure operator/(const Enclosure& o) const {
        if (o.lo.sign() <= 0 && o.hi.sign() >= 0)
            throw std::domain_error("Enclosure: division by interval containing zero");
        return *this * Enclosure(o.hi.reciprocal(), o.lo.reciprocal());
    }
    Enclosure operator*(const Rational& c) const {
        return c.sign() >= 0 ? Enclosure(lo * c, hi * c) : Enclosure(hi * c, lo * c);
    }
    Enclosure operator+(const Rational& c) const { return {lo + c, hi + c}; }

    // Smallest interval containing both (used when joining case analyses).
    Enclosure hull(const Enclosure& o) const { return {min(lo, o.lo), max(hi, o.hi)}; }

    // Outward rounding onto the grid of multiples of 1/den: still contains
    // the true value, with far smaller numerators (used when serializing).
    Enclosure outward_round(const mpz_class& den) const {
        Rational d(den, 1);
        return {Rational((lo * d).floor(), den), Rational((hi * d).ceil(), den)};
    }

    // True only if the comparison holds for every point of each interval.
    bool certainly_le(const Enclosure& o) const { return hi <= o.lo; }
    bool certainly_lt(const Enclosure& o) const { return hi < o.lo; }
};

namespace enc {

inline const Rational& default_tol() {
    static const Rational t(1, 1000000000);  // 1e-9
    return t;
}

// floor(v^(1/n)) for v >= 0.
inline mpz_class iroot(const mpz_class& v, unsigned long n) {
    mpz_class r;
    mpz_root(r.get_mpz_t(), v.get_mpz_t(), n);
    return r;
}

// Exact n-th root when it exists.
inline std::optional<Rational> exact_root(const Rational& r, unsigned long n) {
    if (r.is_zero()) return Rational(0);
    if (r.sign() < 0) return std::nullopt;
    mpz_class rn = iroot(r.num(), n), rd = iroot(r.den(), n);
    mpz_class pn, pd;
    mpz_pow_ui(pn.get_mpz_t(), rn.get_mpz_t(), n);
    mpz_pow_ui(pd.get_mpz_t(), rd.get_mpz_t(), n);
    if (pn == r.num() && pd == r.den()) return Rational(rn, rd);
    return std::nullopt;
}

// r^(1/n) for r >= 0, outward-rounded to width <= tol.
// Scheme: r^(1/n) = (num * den^(n-1))^(1/n) / den; scaling the radicand by
// S^n makes the floor-root bracket width 1/(den*S).
inline Enclosure root(const Rational& r, unsigned long n, const Rational& tol = default_tol()) {
    if (r.sign() < 0) throw std::domain_error("enc::root: negative radicand");
    if (n == 0) throw std::domain_error("enc::root: zeroth root");
    if (tol.sign() <= 0) throw std::domain_error("enc::root: tol must be positive");
    if (auto ex = exact_root(r, n)) return Enclosure(*ex);
    mpz_class dpow;
    mpz_pow_ui(dpow.get_mpz_t(), r.den().get_mpz_t(), n - 1);
    mpz_class radicand = r.num() * dpow;
    // choose S with 1/(den*S) <= tol
    mpz_class S = Rational(1).den();  // 1
    Rational need = (tol * Rational(r.den(), 1)).reciprocal();  // S >= 1/(tol*den)
    S = need.ceil();
    if (S < 1) S = 1;
    mpz_class Sn;
    mpz_pow_ui(Sn.get_mpz_t(), S.get_mpz_t(), n);
    mpz_class f = iroot(radicand * Sn, n);
    mpz_class denS = r.den() * S;
    return Enclosure(Rational(f, denS), Rational(f + 1, denS));
}

inline Enclosure sqrt(const Rational& r, const Rational& tol = default_tol()) {
    return root(r, 2, tol);
}

inline Enclosure sqrt(const Enclosure& e, const Rational& tol = default_tol()) {
    return Enclosure(sqrt(e.lo, tol).lo, sqrt(e.hi, tol).hi);
}

// x^(p/q) for x >= 0 (x > 0 when the exponent is negative).
inline Enclosure pow(const Rational& x, const Rational& e, const Rational& tol = default_tol()) {
    if (x.sign() < 0) throw std::domain_error("enc::pow: negative base");
    if (e.is_zero()) return Enclosure(Rational(1));
    if (x.is_zero()) {
        if (e.sign() < 0) throw std::domain_error("enc::pow: 0 to negative power");
        return Enclosure(Rational(0));
    }
    if (!e.num().fits_slong_p() || !e.den().fits_ulong_p())
        throw std::domain_error("enc::pow: exponent out of range");
    long p = e.num().get_si();
    unsigned long q = e.den().get_ui();
    Rational xp = x.pow_int(p);
    if (q == 1) return Enclosure(xp);
    return root(xp, q, tol);
}

// Monotone extension to enclosure bases.
inline Enclosure pow(const Enclosure& x, const Rational& e, const Rational& tol = default_tol()) {
    Enclosure a = pow(x.lo, e, tol), b = pow(x.hi, e, tol);
    return e.sign() >= 0 ? Enclosure(a.lo, b.hi) : Enclosure(b.lo, a.hi);
}

// True iff s^e is rational, i.e. both parts of s^p are perfect q-th powers.
inline std::optional<Rational> exact_pow(const Rational& x, const Rational& e) {
    if (x.is_zero()) return e.sign() > 0 ? std::optional<Rational>(Rational(0)) : std::nullopt;
    if (x.sign() < 0) return std::nullopt;
    if (e.is_zero()) return Rational(1);
    if (!e.num().fits_slong_p() || !e.den().fits_ulong_p()) return std::nullopt;
    Rational xp = x.pow_int(e.num().get_si());
    return exact_root(xp, e.den().get_ui());
}

// e^x via argument reduction to [0,1) and a Taylor tail bound. The series
// remainder after N terms of e^r, r in [0,1), is < 2 r^(N+1)/(N+1)!.
inline Enclosure exp(const Rational& x, const Rational& tol = default_tol()) {
    if (tol.sign() <= 0) throw std::domain_error("enc::exp: tol must be positive");
    mpz_class m = x.floor();
    if (!m.fits_slong_p() || m > 256 || m < -256)
        throw std::domain_error("enc::exp: argument out of supported range");
    long mi = m.get_si();
    Rational r = x - Rational(m, 1);  // r in [0,1)
    // enclosure of e = sum 1/k! with remainder < 2/(N+1)!
    auto series = [&](const Rational& z, const Rational& want) {
        Rational term(1), sum(1);
        Rational rem;
        int k = 1;
        while (true) {
            term = term * z / Rational(k);
            sum += term;
            // remainder bound: next term * 1/(1 - z/(k+1)) <= 2*next for z<1, k>=1
            Rational next = term * z / Rational(k + 1);
            rem = next * Rational(2);
            if (rem < want || k > 200) break;
            ++k;
        }
        return Enclosure(sum, sum + rem);
    };
    Rational budget = tol / Rational(4);
    Enclosure er = series(r, budget);
    Enclosure ebase = series(Rational(1), budget / Rational(1 + (mi < 0 ? -mi : mi)));
    Enclosure scale(Rational(1));
    for (long i = 0; i < (mi < 0 ? -mi : mi); ++i) scale = scale * ebase;
    if (mi < 0) scale = Enclosure(Rational(1)) / scale;
    return er * scale;
}

// ln(y) for y > 0 via 2*atanh((y-1)/(y+1)) after power-of-two reduction,
// with the geometric tail bound for the atanh series.
inline Enclosure log(const Rational& y, const Rational& tol = default_tol()) {
    if (y.sign() <= 0) throw std::domain_error("enc::log: nonpositive argument");
    if (tol.sign() <= 0) throw std::domain_error("enc::log: tol must be positive");
    // reduce y = 2^k * y' with y' in [3/4, 3/2)
    long k = 0;
    Rational yp = y;
    const Rational lo34(3, 4), hi32(3, 2);
    while (yp >= hi32) { yp = yp / Rational(2); ++k; }
    while (yp < lo34) { yp = yp * Rational(2); --k; }
    auto atanh_enc = [&](const Rational& z, const Rational& want) {
        // sum z^(2j+1)/(2j+1), |z| < 1; tail < |z|^(2j+3)/(1-z^2)
        Rational z2 = z * z;
        Rational term = z, sum = z;
        int j = 0;
        Rational tail;
        while (true) {
            term = term * z2;
            ++j;
            sum += term / Rational(2 * j + 1);
            tail = term * z2 / ((Rational(1) - z2) * Rational(2 * j + 3));
            if (tail.abs() < want || j > 400) break;
        }
        if (z.sign() >= 0) return Enclosure(sum, sum + tail);
        return Enclosure(sum + tail, sum);  // tail is negative-side for z<0? keep hull safe
    };
    Rational budget = tol / Rational(4);
    Enclosure ln2(Rational(0));
    if (k != 0) {
        Enclosure a = atanh_enc(Rational(1, 3), budget / Rational(2 * (k < 0 ? -k : k)));
        ln2 = (a + a) * Rational(k);
    }
    Rational z = (yp - Rational(1)) / (yp + Rational(1));
    Enclosure a2 = atanh_enc(z, budget);
    Enclosure lnyp = a2 + a2;
    // widen symmetrically: atanh_enc's one-sided tail is correct for z>=0;
    // for z<0 the sum alternates sign handling above keeps containment.
    return lnyp + ln2;
}

inline Enclosure log(const Enclosure& y, const Rational& tol = default_tol()) {
    return Enclosure(log(y.lo, tol).lo, log(y.hi, tol).hi);
}

inline Enclosure exp(const Enclosure& x, const Rational& tol = default_tol()) {
    return Enclosure(exp(x.lo, tol).lo, exp(x.hi, tol).hi);
}

// atan by its alternating series, |x| <= 1; truncation error is bounded by
// the first dropped term.
inline Enclosure atan_series(const Rational& x, const Rational& tol) {
    Rational x2 = x * x, term = x, sum = x;
    int k = 0;
    Rational next;
    while (true) {
        term = term * x2;
        ++k;
        next = term / Rational(2 * k + 1);
        if (next.abs() < tol || k > 500) break;
        sum += (k % 2 == 1) ? -next : next;
    }
    return Enclosure(sum - next.abs(), sum + next.abs());
}

// pi via Machin's formula.
inline Enclosure pi(const Rational& tol = default_tol()) {
    Enclosure a = atan_series(Rational(1, 5), tol / Rational(64));
    Enclosure b = atan_series(Rational(1, 239), tol / Rational(16));
    return a * Rational(16) - b * Rational(4);
}

// arcsin on [-1, 1]. Series for |x| <= 1/2; otherwise the half-angle
// identity arcsin(x) = pi/2 - 2 arcsin(sqrt((1-x)/2)).
inline Enclosure asin(const Rational& x, const Rational& tol = default_tol()) {
    if (x.sign() < 0) return -asin(-x, tol);
    if (x > Rational(1)) throw std::domain_error("enc::asin: |x| > 1");
    if (x <= Rational(1, 2)) {
        // sum c_k x^(2k+1), c_k = (2k)! / (4^k (k!)^2 (2k+1)); ratio < x^2
        Rational x2 = x * x;
        Rational term = x, sum = x;  // term tracks c_k x^(2k+1) numerator-wise
        Rational coeff(1);
        int k = 0;
        Rational tail;
        while (true) {
            // c_{k+1}/c_k = (2k+1)^2 / ((2k+2)(2k+3))
            coeff = coeff * Rational((2 * k + 1) * (2 * k + 1), (2 * k + 2) * (2 * k + 3));
            term = term * x2;
            ++k;
            Rational add = coeff * term * Rational(1);
            sum += add;
            tail = add * x2 / (Rational(1) - x2);
            if (tail < tol || k > 500) break;
        }
        return Enclosure(sum, sum + tail);
    }
    Enclosure inner = sqrt(Rational((Rational(1) - x) / Rational(2)), tol / Rational(16));
    Enclosure rec(asin(inner.lo, tol / Rational(8)).lo, asin(min(inner.hi, Rational(1)), tol / Rational(8)).hi);
    return pi(tol / Rational(8)) * Rational(1, 2) - rec - rec;
}

inline Enclosure asin(const Enclosure& x, const Rational& tol = default_tol()) {
    Rational lo = max(x.lo, Rational(-1)), hi = min(x.hi, Rational(1));
    return Enclosure(asin(lo, tol).lo, asin(hi, tol).hi);
}

// asinh(x) = ln(x + sqrt(1 + x^2)), any sign.
inline Enclosure asinh(const Rational& x, const Rational& tol = default_tol()) {
    if (x.sign() < 0) return -asinh(-x, tol);
    if (x.is_zero()) return Enclosure(Rational(0));
    Enclosure s = sqrt(Rational(1) + x * x, tol / Rational(8));
    return log(s + x, tol / Rational(2));
}

// acosh(x) = ln(x + sqrt(x^2 - 1)), x >= 1.
inline Enclosure acosh(const Rational& x, const Rational& tol = default_tol()) {
    if (x < Rational(1)) throw std::domain_error("enc::acosh: x < 1");
    if (x == Rational(1)) return Enclosure(Rational(0));
    Enclosure s = sqrt(x * x - Rational(1), tol / Rational(8));
    return log(s + x, tol / Rational(2));
}

}  // namespace enc

}  // namespace rical
