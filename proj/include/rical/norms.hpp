#pragma once

// Rearrangement-invariant norms evaluated against exact rearrangements:
// Lorentz L^{P,p} by closed form, Orlicz/Luxemburg by certified bisection of
// the modular, and the endpoint L^1 / L^infinity norms exactly.
//
// Finite Lorentz values are carried as FormalPowerSum objects (rational
// multiples of rational powers of the rearrangement data), so dilation laws
// can be checked exactly; numeric values are certified enclosures, exact
// rationals whenever the exponents collapse.

#include <memory>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "rical/enclosure.hpp"
#include "rical/piecewise.hpp"
#include "rical/quadrature.hpp"
#include "rical/rearrange.hpp"

namespace rical {

// Finite certified value, or a divergence marker.
struct NormValue {
    Enclosure value;
    bool exact = false;     // value.lo == value.hi and provably equal to the norm
    bool diverges = false;  // +infinity sentinel; value is meaningless then

    static NormValue finite(Enclosure e) {
        NormValue v;
        v.exact = e.is_exact();
        v.value = std::move(e);
        return v;
    }
    static NormValue infinite() {
        NormValue v;
        v.diverges = true;
        return v;
    }
};

// ---------------------------------------------------------------------------
// Lorentz parameters: primary index P, fine index p (nullopt = infinity).

struct LorentzParams {
    Rational P;
    std::optional<Rational> p;  // nullopt: p = infinity

    LorentzParams(Rational P_, std::optional<Rational> p_) : P(std::move(P_)), p(std::move(p_)) {
        if (P < Rational(1)) throw std::invalid_argument("LorentzParams: P must be >= 1");
        if (P == Rational(1) && !(p && *p == Rational(1)))
            throw std::invalid_argument("LorentzParams: P = 1 requires p = 1");
        if (p && *p < Rational(1)) throw std::invalid_argument("LorentzParams: p must be >= 1");
    }

    bool p_is_integer() const { return p && p->is_integer() && p->num().fits_slong_p(); }
};

// Harmonic-mean target parameters: 1/P = 1/(2Q) + 1/(2R), 1/p = 1/(2q) + 1/(2r)
// with 1/infinity = 0 for the fine indices.
inline LorentzParams derive_lorentz_target(const Rational& Q, const std::optional<Rational>& q,
                                           const Rational& R, const std::optional<Rational>& r) {
    if (!(Q > Rational(1)) || !(R > Rational(1)))
        throw std::invalid_argument("derive_lorentz_target: Q, R must lie in (1, infinity)");
    for (const auto& fine : {q, r})
        if (fine && *fine < Rational(1))
            throw std::invalid_argument("derive_lorentz_target: fine indices must be >= 1");
    Rational invP = (Q.reciprocal() + R.reciprocal()) / Rational(2);
    Rational invp = ((q ? q->reciprocal() : Rational(0)) + (r ? r->reciprocal() : Rational(0))) / Rational(2);
    std::optional<Rational> p;
    if (!invp.is_zero()) p = invp.reciprocal();
    return LorentzParams(invP.reciprocal(), p);
}

// ---------------------------------------------------------------------------
// Lorentz norm.

// ||f||^p as a formal sum, for integer p >= 1:
//   integral of t^(p/P - 1) (f*(t))^p dt, expanded piecewise.
inline FormalPowerSum lorentz_power_formal(const RearrangedFunction& star, const Rational& P, long p) {
    FormalPowerSum acc;
    Rational e = Rational(p) / P - Rational(1);
    for (const auto& pc : star.fn().pieces())
        acc = acc + power_integral(pc.p, p, e, pc.lo, pc.hi);
    return acc;
}

namespace detail {

// ||s||_{P,p}^p for a nonnegative step s via the step closed form; p may be a
// non-integer rational here.
inline Enclosure lorentz_step_power(const StepFunction& s, const Rational& P, const Rational& p,
                                    const Rational& tol) {
    Enclosure acc{Rational(0)};
    if (s.is_zero()) return acc;
    size_t n = s.values().size();
    Rational per = tol / Rational(static_cast<long>(4 * n));
    Rational pP = p / P;
    Rational Pp = P / p;
    const auto& b = s.breakpoints();
    for (size_t i = 0; i < n; ++i) {
        const Rational& c = s.values()[i];
        if (c.is_zero()) continue;
        Enclosure cp = enc::pow(c, p, per);
        Enclosure tk = enc::pow(b[i + 1], pP, per);
        Enclosure tk0 = enc::pow(b[i], pP, per);
        acc = acc + cp * (tk - tk0) * Pp;
    }
    return acc;
}

}  // namespace detail

// Lorentz norm of f, evaluated through the exact rearrangement when it
// exists and through certified step envelopes otherwise.
inline NormValue lorentz_norm(const PiecewisePoly& f, const LorentzParams& prm,
                              const Rational& tol = enc::default_tol()) {
    if (f.is_zero()) return NormValue::finite(Enclosure(Rational(0)));
    // p = infinity: sup of t^(1/P) f*(t) piece by piece
    if (!prm.p) {
        RearrangedFunction star = rearrangement(f);
        Enclosure best(Rational(0));
        for (const auto& pc : star.fn().pieces()) {
            Enclosure s = sup_weighted_abs(pc.p, prm.P.reciprocal(), pc.lo, pc.hi, tol);
            best = Enclosure(max(best.lo, s.lo), max(best.hi, s.hi));
        }
        return NormValue::finite(best);
    }
    const Rational& p = *prm.p;
    auto finish = [&](const Enclosure& powsum, bool exact_power) {
        Enclosure val = enc::pow(powsum, p.reciprocal(), tol / Rational(4));
        NormValue out = NormValue::finite(val);
        out.exact = out.value.is_exact() && exact_power;
        return out;
    };
    if (prm.p_is_integer()) {
        try {
            RearrangedFunction star = rearrangement(f);
            FormalPowerSum fs = lorentz_power_formal(star, prm.P, p.num().get_si());
            return finish(fs.evaluate(tol / Rational(4)), true);
        } catch (const NeedsEnclosure&) {
            // fall through to envelopes
        }
    } else {
        try {
            RearrangedFunction star = rearrangement(f);
            if (star.fn().degree() <= 0) {
                StepFunction s = StepFunction::from_piecewise(star.fn());
                return finish(detail::lorentz_step_power(s, prm.P, p, tol / Rational(4)), true);
            }
        } catch (const NeedsEnclosure&) {
        }
    }
    // certified two-sided envelopes, refined geometrically
    Enclosure bracket{Rational(0)};
    for (int res = 16; res <= 4096; res *= 4) {
        EnclosureStep env = rearrangement_envelope(f, res);
        Enclosure lo = detail::lorentz_step_power(env.lower(), prm.P, p, tol / Rational(8));
        Enclosure hi = detail::lorentz_step_power(env.upper(), prm.P, p, tol / Rational(8));
        bracket = Enclosure(lo.lo, max(lo.lo, hi.hi));
        if (bracket.width() <= tol) break;
    }
    NormValue out = finish(bracket, false);
    out.exact = false;
    return out;
}

inline NormValue lorentz_norm(const StepFunction& f, const LorentzParams& prm,
                              const Rational& tol = enc::default_tol()) {
    return lorentz_norm(f.to_piecewise(), prm, tol);
}

// ---------------------------------------------------------------------------
// Endpoint norms.

enum class LpLimit { L1, Linf };

inline Rational lp_limit_norm(const PiecewisePoly& f, LpLimit which) {
    if (which == LpLimit::Linf) return f.sup_abs();
    return f.absolute().integral();
}

// ---------------------------------------------------------------------------
// Young functions and Orlicz (Luxemburg) norms.

struct YoungFunction {
    enum class Family { Power, PowerLog, ExpPower };
    Family family;
    Rational alpha;          // power exponent, >= 1
    Rational beta{0};        // log exponent for PowerLog, >= 0

    static YoungFunction power(Rational a) {
        if (a < Rational(1)) throw std::invalid_argument("YoungFunction: alpha must be >= 1");
        return {Family::Power, std::move(a), Rational(0)};
    }
    static YoungFunction power_log(Rational a, Rational b) {
        if (a < Rational(1) || b.sign() < 0)
            throw std::invalid_argument("YoungFunction: need alpha >= 1, beta >= 0");
        return {Family::PowerLog, std::move(a), std::move(b)};
    }
    static YoungFunction exp_power(Rational a) {
        if (a < Rational(1)) throw std::invalid_argument("YoungFunction: alpha must be >= 1");
        return {Family::ExpPower, std::move(a), Rational(0)};
    }

    // certified phi(t) for rational t >= 0
    Enclosure eval(const Rational& t, const Rational& tol = enc::default_tol()) const {
        if (t.sign() < 0) throw std::domain_error("YoungFunction: negative argument");
        if (t.is_zero()) return Enclosure(Rational(0));
        switch (family) {
            case Family::Power:
                return enc::pow(t, alpha, tol);
            case Family::PowerLog: {
                Enclosure p = enc::pow(t, alpha, tol / Rational(4));
                if (beta.is_zero()) return p;
                Enclosure lg = enc::log(Rational(1) + t, tol / Rational(4));
                Enclosure lgb = enc::pow(lg, beta, tol / Rational(4));
                return p * lgb;
            }
            case Family::ExpPower: {
                Enclosure a = enc::pow(t, alpha, tol / Rational(4));
                // guard against astronomically large modulars; the caller
                // treats hi_unbounded via eval_lower
                Enclosure e = enc::exp(a, tol / Rational(4));
                return e - Enclosure(Rational(1));
            }
        }
        throw std::logic_error("YoungFunction: unknown family");
    }

    // A certified lower bound that never overflows, used to certify that a
    // modular exceeds 1 even when the exact value is astronomically large.
    Rational eval_lower(const Rational& t) const {
        if (t.sign() <= 0) return Rational(0);
        switch (family) {
            case Family::Power: {
                mpz_class fl = alpha.floor();
                long e = fl.fits_slong_p() ? fl.get_si() : 1;
                return t >= Rational(1) ? t.pow_int(e) : Rational(0);
            }
            case Family::PowerLog: {
                mpz_class fl = alpha.floor();
                long e = fl.fits_slong_p() ? fl.get_si() : 1;
                Rational lg = t / (Rational(1) + t);  // log(1+t) >= t/(1+t)
                Rational lb = t >= Rational(1) ? t.pow_int(e) : Rational(0);
                // lg < 1, so rounding beta up keeps this a lower bound
                mpz_class bc = beta.ceil();
                long bce = bc.fits_slong_p() ? bc.get_si() : 1;
                return lb * lg.pow_int(bce);
            }
            case Family::ExpPower: {
                // e^(t^alpha) - 1 >= t^alpha >= t^floor(alpha) for t >= 1
                mpz_class fl = alpha.floor();
                long e = fl.fits_slong_p() ? fl.get_si() : 1;
                return t >= Rational(1) ? t.pow_int(e) : Rational(0);
            }
        }
        return Rational(0);
    }

    bool exact_for_integer_power() const {
        return family == Family::Power && alpha.is_integer() && alpha.num().fits_slong_p();
    }
};

namespace detail {

struct Modular {
    Enclosure value{Rational(0)};
    bool hi_valid = true;  // false: only the lower bound is meaningful
};

// integral of phi(|f|/lambda): exact rational pieces for integer-power
// Young functions; monotone Riemann brackets on monotone sub-pieces
// otherwise (resolution controls the bracket width).
inline Modular orlicz_modular(const PiecewisePoly& f, const YoungFunction& phi,
                              const Rational& lambda, int resolution, const Rational& tol) {
    Modular out;
    const Rational arg_cap(64);
    for (const auto& pc : f.pieces()) {
        // split into monotone sub-pieces of |f|/lambda
        std::vector<Rational> cuts{pc.lo, pc.hi};
        if (poly::degree(pc.p) == 2) {
            Rational v = -pc.p[1] / (pc.p[2] * Rational(2));
            if (pc.lo < v && v < pc.hi) cuts.insert(cuts.begin() + 1, v);
        }
        for (size_t i = 0; i + 1 < cuts.size(); ++i) {
            Rational lo = cuts[i], hi = cuts[i + 1];
            auto [mn0, mx0] = poly::minmax_on(pc.p, lo, hi);
            // |p| range
            Rational mn = mn0.sign() >= 0 ? mn0 : (mx0.sign() <= 0 ? -mx0 : Rational(0));
            Rational mx = max(mx0.abs(), mn0.abs());
            if (mx.is_zero()) continue;
            if (poly::degree(pc.p) <= 0) {
                Rational arg = mx / lambda;
                if (arg > arg_cap) {
                    out.value = out.value + Enclosure(phi.eval_lower(arg)) * (hi - lo);
                    out.hi_valid = false;
                } else {
                    out.value = out.value + phi.eval(arg, tol) * (hi - lo);
                }
                continue;
            }
            if (phi.exact_for_integer_power() && mn0.sign() >= 0) {
                // integral of (p/lambda)^alpha is an exact polynomial integral
                long a = phi.alpha.num().get_si();
                Poly q{Rational(1)};
                for (long k = 0; k < a; ++k) q = poly::mul(q, pc.p);
                Rational v = poly::integral(q, lo, hi) / lambda.pow_int(a);
                out.value = out.value + Enclosure(v);
                continue;
            }
            // monotone bracket: phi increasing, |p| monotone on [lo, hi]
            Rational w = (hi - lo) / Rational(resolution);
            for (int j = 0; j < resolution; ++j) {
                Rational l = lo + w * Rational(j), r = l + w;
                auto [a0, b0] = poly::minmax_on(pc.p, l, r);
                Rational amn = a0.sign() >= 0 ? a0 : (b0.sign() <= 0 ? -b0 : Rational(0));
                Rational amx = max(a0.abs(), b0.abs());
                Rational arg_hi = amx / lambda, arg_lo = amn / lambda;
                if (arg_hi > arg_cap) {
                    out.value = out.value + Enclosure(phi.eval_lower(arg_hi)) * w;
                    out.hi_valid = false;
                    continue;
                }
                Enclosure vlo = phi.eval(arg_lo, tol);
                Enclosure vhi = phi.eval(arg_hi, tol);
                out.value = out.value + Enclosure(vlo.lo, vhi.hi) * w;
            }
        }
    }
    return out;
}

}  // namespace detail

// Luxemburg norm inf{lambda : integral phi(|f|/lambda) <= 1} as a certified
// bracket of width <= tol; the modular at the returned hi is certified <= 1
// and at the returned lo certified > 1.
inline NormValue orlicz_norm(const PiecewisePoly& f, const YoungFunction& phi,
                             const Rational& tol = enc::default_tol()) {
    if (tol.sign() <= 0) throw std::invalid_argument("orlicz_norm: tol must be positive");
    if (f.is_zero()) return NormValue::finite(Enclosure(Rational(0)));
    // certified modular comparison against 1; returns +1 / -1 / 0(unknown)
    auto cmp1 = [&](const Rational& lambda) {
        Rational mtol = tol / Rational(64);
        for (int attempt = 0; attempt < 6; ++attempt, mtol = mtol / Rational(256)) {
            for (int res = 8; res <= 8192; res *= 4) {
                detail::Modular m = detail::orlicz_modular(f, phi, lambda, res, mtol);
                if (m.value.lo > Rational(1)) return +1;
                if (m.hi_valid && m.value.hi <= Rational(1)) return -1;
                if (f.degree() <= 0) break;  // step modulars do not refine with res
            }
        }
        return 0;
    };
    // bracket: modular(lo) > 1 >= modular(hi)
    Rational hi = max(f.sup_abs(), Rational(1));
    int guard = 0;
    while (cmp1(hi) >= 0) {
        hi = hi * Rational(2);
        if (++guard > 200) throw std::runtime_error("orlicz_norm: no finite upper bracket");
    }
    Rational lo = hi / Rational(2);
    while (cmp1(lo) <= 0) {
        lo = lo / Rational(2);
        if (++guard > 400) {
            // f may be "small" for phi: the norm is still positive for f != 0,
            // but the modular may never exceed 1 only for f = 0
            throw std::runtime_error("orlicz_norm: no positive lower bracket");
        }
    }
    while (hi - lo > tol) {
        Rational mid = (lo + hi) / Rational(2);
        int c = cmp1(mid);
        if (c > 0) lo = mid;
        else if (c < 0) hi = mid;
        else throw std::runtime_error("orlicz_norm: modular comparison undecidable at requested tolerance");
    }
    NormValue out;
    out.value = Enclosure(lo, hi);
    out.exact = false;
    return out;
}

inline NormValue orlicz_norm(const StepFunction& f, const YoungFunction& phi,
                             const Rational& tol = enc::default_tol()) {
    return orlicz_norm(f.to_piecewise(), phi, tol);
}

// ---------------------------------------------------------------------------
// Norm descriptors (tagged union used by the harness and the CL machinery).

struct NormDescriptor;

struct CLProductDesc {
    std::shared_ptr<NormDescriptor> X, Y;
    Rational theta;
};

struct NormDescriptor {
    enum class Kind { L1, Linf, Lorentz, Orlicz, CLProduct };
    Kind kind;
    std::optional<LorentzParams> lorentz;
    std::optional<YoungFunction> orlicz;
    std::optional<CLProductDesc> cl;

    static NormDescriptor l1() { return {Kind::L1, std::nullopt, std::nullopt, std::nullopt}; }
    static NormDescriptor linf() { return {Kind::Linf, std::nullopt, std::nullopt, std::nullopt}; }
    static NormDescriptor make_lorentz(LorentzParams p) {
        return {Kind::Lorentz, std::move(p), std::nullopt, std::nullopt};
    }
    static NormDescriptor make_orlicz(YoungFunction y) {
        return {Kind::Orlicz, std::nullopt, std::move(y), std::nullopt};
    }
    static NormDescriptor cl_product(NormDescriptor X, NormDescriptor Y, Rational theta);
};

inline NormDescriptor NormDescriptor::cl_product(NormDescriptor X, NormDescriptor Y, Rational theta) {
    if (X.kind == Kind::CLProduct || Y.kind == Kind::CLProduct)
        throw std::invalid_argument("NormDescriptor: products of products are unsupported");
    if (!(theta > Rational(0) && theta < Rational(1)))
        throw std::invalid_argument("NormDescriptor: theta must lie in (0,1)");
    NormDescriptor d{Kind::CLProduct, std::nullopt, std::nullopt, std::nullopt};
    d.cl = CLProductDesc{std::make_shared<NormDescriptor>(std::move(X)),
                         std::make_shared<NormDescriptor>(std::move(Y)), std::move(theta)};
    return d;
}

// Evaluate a non-product descriptor. (CL products are evaluated by the
// optimizer in calderon.hpp, which returns a certified upper bound.)
inline NormValue norm_value(const PiecewisePoly& f, const NormDescriptor& d,
                            const Rational& tol = enc::default_tol()) {
    switch (d.kind) {
        case NormDescriptor::Kind::L1: {
            Rational v = lp_limit_norm(f, LpLimit::L1);
            return NormValue::finite(Enclosure(v));
        }
        case NormDescriptor::Kind::Linf: {
            Rational v = lp_limit_norm(f, LpLimit::Linf);
            return NormValue::finite(Enclosure(v));
        }
        case NormDescriptor::Kind::Lorentz:
            return lorentz_norm(f, *d.lorentz, tol);
        case NormDescriptor::Kind::Orlicz:
            return orlicz_norm(f, *d.orlicz, tol);
        case NormDescriptor::Kind::CLProduct:
            throw std::invalid_argument("norm_value: CL product norms are evaluated via cl_norm_estimate");
    }
    throw std::logic_error("norm_value: unknown descriptor");
}

inline NormValue norm_value(const StepFunction& f, const NormDescriptor& d,
                            const Rational& tol = enc::default_tol()) {
    return norm_value(f.to_piecewise(), d, tol);
}

}  // namespace rical
