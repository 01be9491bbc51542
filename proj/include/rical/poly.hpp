#pragma once

// Dense polynomials with rational coefficients, plus the exact sign/root
// machinery the piecewise calculus relies on: rational-root extraction for
// quadratics, Sturm chains for higher-degree sign tests, and exact extrema
// of quadratics on intervals.

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <vector>

#include "rical/enclosure.hpp"
#include "rical/rational.hpp"

namespace rical {

using Poly = std::vector<Rational>;  // c[0] + c[1] t + c[2] t^2 + ...

namespace poly {

inline Poly trimmed(Poly p) {
    while (!p.empty() && p.back().is_zero()) p.pop_back();
    return p;
}

inline int degree(const Poly& p) {
    for (int i = static_cast<int>(p.size()) - 1; i >= 0; --i)
        if (!p[static_cast<size_t>(i)].is_zero()) return i;
    return -1;  // zero polynomial
}

inline Rational eval(const Poly& p, const Rational& t) {
    Rational acc(0);
    for (auto it = p.rbegin(); it != p.rend(); ++it) acc = acc * t + *it;
    return acc;
}

inline Poly add(const Poly& a, const Poly& b) {
    Poly r(std::max(a.size(), b.size()), Rational(0));
    for (size_t i = 0; i < a.size(); ++i) r[i] += a[i];
    for (size_t i = 0; i < b.size(); ++i) r[i] += b[i];
    return trimmed(std::move(r));
}

inline Poly scale(Poly p, const Rational& c) {
    for (auto& x : p) x *= c;
    return trimmed(std::move(p));
}

inline Poly mul(const Poly& a, const Poly& b) {
    if (a.empty() || b.empty()) return {};
    Poly r(a.size() + b.size() - 1, Rational(0));
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    return trimmed(std::move(r));
}

inline Poly derivative(const Poly& p) {
    if (p.size() <= 1) return {};
    Poly r(p.size() - 1);
    for (size_t i = 1; i < p.size(); ++i) r[i - 1] = p[i] * Rational(static_cast<long>(i));
    return trimmed(std::move(r));
}

inline Poly antiderivative(const Poly& p) {
    Poly r(p.size() + 1, Rational(0));
    for (size_t i = 0; i < p.size(); ++i) r[i + 1] = p[i] / Rational(static_cast<long>(i + 1));
    return trimmed(std::move(r));
}

// p(s*t + d)
inline Poly compose_affine(const Poly& p, const Rational& s, const Rational& d) {
    Poly result{Rational(0)};
    Poly lin{d, s};
    Poly power{Rational(1)};
    for (size_t i = 0; i < p.size(); ++i) {
        result = add(result, scale(power, p[i]));
        if (i + 1 < p.size()) power = mul(power, lin);
    }
    return trimmed(std::move(result));
}

inline Rational integral(const Poly& p, const Rational& a, const Rational& b) {
    Poly F = antiderivative(p);
    return eval(F, b) - eval(F, a);
}

// Exact rational roots of a polynomial of degree <= 2. Returns nullopt when
// a quadratic has real irrational roots (callers fall back to enclosures).
// Sorted ascending, no duplicates; an empty vector means no real roots.
inline std::optional<std::vector<Rational>> rational_roots_deg2(const Poly& p_in) {
    Poly p = trimmed(p_in);
    int d = degree(p);
    if (d <= 0) return std::vector<Rational>{};  // constant: no isolated roots
    if (d == 1) return std::vector<Rational>{-p[0] / p[1]};
    const Rational &a = p[2], &b = p[1], &c = p[0];
    Rational disc = b * b - a * c * Rational(4);
    int s = disc.sign();
    if (s < 0) return std::vector<Rational>{};
    if (s == 0) return std::vector<Rational>{-b / (a * Rational(2))};
    auto sq = enc::exact_root(disc, 2);
    if (!sq) return std::nullopt;
    Rational r1 = (-b - *sq) / (a * Rational(2));
    Rational r2 = (-b + *sq) / (a * Rational(2));
    if (r1 > r2) std::swap(r1, r2);
    return std::vector<Rational>{r1, r2};
}

// Sturm chain sign-variation count at t.
inline int sign_variations(const std::vector<Poly>& chain, const Rational& t) {
    int var = 0, prev = 0;
    for (const auto& q : chain) {
        int s = eval(q, t).sign();
        if (s == 0) continue;
        if (prev != 0 && s != prev) ++var;
        prev = s;
    }
    return var;
}

inline std::vector<Poly> sturm_chain(const Poly& p_in) {
    std::vector<Poly> chain;
    Poly p = trimmed(p_in);
    if (degree(p) < 0) return chain;
    chain.push_back(p);
    Poly d = derivative(p);
    if (degree(d) < 0) return chain;
    chain.push_back(d);
    while (true) {
        const Poly& a = chain[chain.size() - 2];
        const Poly& b = chain.back();
        // polynomial remainder a mod b
        Poly r = a;
        while (degree(r) >= degree(b) && degree(r) >= 0) {
            int dr = degree(r), db = degree(b);
            Rational f = r[static_cast<size_t>(dr)] / b[static_cast<size_t>(db)];
            for (int i = 0; i <= db; ++i)
                r[static_cast<size_t>(dr - db + i)] -= f * b[static_cast<size_t>(i)];
            r = trimmed(std::move(r));
        }
        if (degree(r) < 0) break;
        chain.push_back(scale(r, Rational(-1)));
    }
    return chain;
}

// Number of distinct real roots in (a, b].
inline int root_count(const Poly& p, const Rational& a, const Rational& b) {
    auto chain = sturm_chain(p);
    if (chain.empty()) return 0;
    return sign_variations(chain, a) - sign_variations(chain, b);
}

// Isolating intervals (half-open (lo, hi]) for the distinct roots in (a, b].
inline std::vector<std::pair<Rational, Rational>> isolate_roots(const Poly& p, Rational a, Rational b) {
    std::vector<std::pair<Rational, Rational>> out;
    auto chain = sturm_chain(p);
    if (chain.empty()) return out;
    struct Seg { Rational a, b; int va, vb; };
    std::vector<Seg> stack{{a, b, sign_variations(chain, a), sign_variations(chain, b)}};
    while (!stack.empty()) {
        Seg s = stack.back();
        stack.pop_back();
        int n = s.va - s.vb;
        if (n <= 0) continue;
        if (n == 1) { out.push_back({s.a, s.b}); continue; }
        Rational m = (s.a + s.b) / Rational(2);
        int vm = sign_variations(chain, m);
        stack.push_back({s.a, m, s.va, vm});
        stack.push_back({m, s.b, vm, s.vb});
    }
    std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
    return out;
}

// Exact test: p(t) >= 0 for all t in [a, b].
inline bool nonneg_on(const Poly& p_in, const Rational& a, const Rational& b) {
    Poly p = trimmed(p_in);
    int d = degree(p);
    if (d < 0) return true;
    if (eval(p, a).sign() < 0 || eval(p, b).sign() < 0) return false;
    if (d <= 1) return true;  // affine: endpoint check suffices
    if (d == 2) {
        Rational v = -p[1] / (p[2] * Rational(2));  // vertex
        if (a < v && v < b && eval(p, v).sign() < 0) return false;
        return true;
    }
    // general: sample strictly between isolated roots of the square-free part
    Poly sf = p;  // Sturm handles multiplicities internally; sampling between
                  // isolating intervals catches every sign change
    auto iso = isolate_roots(sf, a, b);
    Rational prev = a;
    std::vector<Rational> samples;
    for (const auto& [lo, hi] : iso) {
        samples.push_back((prev + lo) / Rational(2));
        prev = hi;
    }
    samples.push_back((prev + b) / Rational(2));
    for (const auto& t : samples) {
        if (t < a || t > b) continue;
        if (eval(p, t).sign() < 0) return false;
    }
    // also evaluate at isolating endpoints (cheap, catches roots at samples)
    for (const auto& [lo, hi] : iso) {
        if (lo >= a && lo <= b && eval(p, lo).sign() < 0) return false;
        if (hi >= a && hi <= b && eval(p, hi).sign() < 0) return false;
    }
    return true;
}

// Exact min and max of a degree-<=2 polynomial on [a, b].
inline std::pair<Rational, Rational> minmax_on(const Poly& p_in, const Rational& a, const Rational& b) {
    Poly p = trimmed(p_in);
    Rational va = eval(p, a), vb = eval(p, b);
    Rational lo = min(va, vb), hi = max(va, vb);
    if (degree(p) == 2) {
        Rational v = -p[1] / (p[2] * Rational(2));
        if (a < v && v < b) {
            Rational pv = eval(p, v);
            lo = min(lo, pv);
            hi = max(hi, pv);
        }
    }
    return {lo, hi};
}

}  // namespace poly

}  // namespace rical
