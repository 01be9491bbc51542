#pragma once

// Compactly supported piecewise polynomials of degree <= 2 with rational
// breakpoints and coefficients, and finitely-valued step functions. These
// carry every explicit function in the library: u (quadratic pieces),
// u' (affine), u'' (constant), rearrangements, and averaging images.
//
// Conventions: pieces are half-open [lo, hi), the function is 0 outside the
// union of pieces, and evaluation is right-continuous at breakpoints.

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "rical/enclosure.hpp"
#include "rical/poly.hpp"
#include "rical/rational.hpp"

namespace rical {

// Raised when an exact operation would require irrational breakpoints; the
// caller is expected to switch to the enclosure-valued path.
struct NeedsEnclosure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Piece {
    Rational lo, hi;
    Poly p;  // degree <= 2, coefficients in global coordinates
};

enum class Continuity { None, C0, C1 };

class PiecewisePoly {
public:
    PiecewisePoly() = default;

    static PiecewisePoly from_pieces(std::vector<Piece> pieces) {
        PiecewisePoly f;
        std::sort(pieces.begin(), pieces.end(),
                  [](const Piece& a, const Piece& b) { return a.lo < b.lo; });
        for (auto& pc : pieces) {
            if (pc.lo > pc.hi) throw std::invalid_argument("PiecewisePoly: inverted piece");
            if (poly::degree(pc.p) > 2) throw std::invalid_argument("PiecewisePoly: degree > 2");
            if (!f.pieces_.empty() && pc.lo < f.pieces_.back().hi)
                throw std::invalid_argument("PiecewisePoly: overlapping pieces");
            if (pc.lo == pc.hi) continue;
            pc.p = poly::trimmed(std::move(pc.p));
            if (poly::degree(pc.p) < 0) continue;  // zero piece: implicit
            f.pieces_.push_back(std::move(pc));
        }
        f.merge_adjacent();
        return f;
    }

    static PiecewisePoly zero() { return {}; }

    static PiecewisePoly indicator(const Rational& lo, const Rational& hi) {
        return from_pieces({{lo, hi, Poly{Rational(1)}}});
    }

    static PiecewisePoly constant(const Rational& c, const Rational& lo, const Rational& hi) {
        return from_pieces({{lo, hi, Poly{c}}});
    }

    const std::vector<Piece>& pieces() const { return pieces_; }
    bool is_zero() const { return pieces_.empty(); }

    // Right-continuous evaluation; 0 outside the support.
    Rational operator()(const Rational& t) const {
        for (const auto& pc : pieces_)
            if (pc.lo <= t && t < pc.hi) return poly::eval(pc.p, t);
        return Rational(0);
    }

    // Left limit at t (the value just below t).
    Rational eval_left(const Rational& t) const {
        for (const auto& pc : pieces_)
            if (pc.lo < t && t <= pc.hi) return poly::eval(pc.p, t);
        return Rational(0);
    }

    Rational integrate(const Rational& a, const Rational& b) const {
        if (a > b) throw std::invalid_argument("integrate: a > b");
        Rational acc(0);
        for (const auto& pc : pieces_) {
            Rational lo = max(a, pc.lo), hi = min(b, pc.hi);
            if (lo < hi) acc += poly::integral(pc.p, lo, hi);
        }
        return acc;
    }

    Rational integral() const {
        Rational acc(0);
        for (const auto& pc : pieces_) acc += poly::integral(pc.p, pc.lo, pc.hi);
        return acc;
    }

    PiecewisePoly differentiate() const {
        std::vector<Piece> out;
        for (const auto& pc : pieces_) out.push_back({pc.lo, pc.hi, poly::derivative(pc.p)});
        return from_pieces(std::move(out));
    }

    // The antiderivative F with F(base) = 0, continuous across breakpoints
    // and constant on the gaps. Input degree must be <= 1 so the result stays
    // in the representable family. F is represented on the hull of the
    // support; a constant tail beyond it is truncated (every integrand in
    // this library has zero net mass, so the tail is zero in practice).
    PiecewisePoly antidifferentiate(const Rational& base) const {
        for (const auto& pc : pieces_)
            if (poly::degree(pc.p) > 1)
                throw std::domain_error("antidifferentiate: antiderivative of a quadratic leaves the degree-2 family");
        if (pieces_.empty()) return zero();
        Rational lo = pieces_.front().lo;
        std::vector<Piece> out;
        Rational running = base <= lo ? Rational(0) : -integrate(lo, base);
        Rational prev_hi = lo;
        for (const auto& pc : pieces_) {
            if (pc.lo > prev_hi) out.push_back({prev_hi, pc.lo, Poly{running}});
            Poly F = poly::antiderivative(pc.p);
            Rational shift = running - poly::eval(F, pc.lo);
            out.push_back({pc.lo, pc.hi, poly::add(F, Poly{shift})});
            running += poly::integral(pc.p, pc.lo, pc.hi);
            prev_hi = pc.hi;
        }
        return from_pieces(std::move(out));
    }

    // |f| with breakpoints refined at sign changes. Throws NeedsEnclosure if
    // a quadratic piece changes sign at an irrational interior point.
    PiecewisePoly absolute() const {
        std::vector<Piece> out;
        for (const auto& pc : pieces_) {
            auto roots = poly::rational_roots_deg2(pc.p);
            if (!roots) {
                // roots are irrational; only a problem if one is interior
                auto [mn, mx] = poly::minmax_on(pc.p, pc.lo, pc.hi);
                if (mn.sign() < 0 && mx.sign() > 0)
                    throw NeedsEnclosure("absolute: quadratic piece changes sign at an irrational point");
                out.push_back({pc.lo, pc.hi, mn.sign() >= 0 ? pc.p : poly::scale(pc.p, Rational(-1))});
                continue;
            }
            std::vector<Rational> cuts{pc.lo};
            for (const auto& r : *roots)
                if (pc.lo < r && r < pc.hi) cuts.push_back(r);
            cuts.push_back(pc.hi);
            for (size_t i = 0; i + 1 < cuts.size(); ++i) {
                Rational m = (cuts[i] + cuts[i + 1]) / Rational(2);
                int s = poly::eval(pc.p, m).sign();
                if (s == 0) {
                    // piece is identically zero between consecutive roots only
                    // for the zero polynomial, which canonicalization removed;
                    // a midpoint root means a double root: sign from curvature
                    s = poly::degree(pc.p) == 2 ? pc.p[2].sign() : 1;
                }
                out.push_back({cuts[i], cuts[i + 1], s >= 0 ? pc.p : poly::scale(pc.p, Rational(-1))});
            }
        }
        return from_pieces(std::move(out));
    }

    // D_s f = f(s t), s > 0.
    PiecewisePoly dilate(const Rational& s) const {
        if (s.sign() <= 0) throw std::domain_error("dilate: scale must be positive");
        return compose_affine(s, Rational(0));
    }

    // f(s t + d) for s > 0.
    PiecewisePoly compose_affine(const Rational& s, const Rational& d) const {
        if (s.sign() <= 0) throw std::domain_error("compose_affine: scale must be positive");
        std::vector<Piece> out;
        for (const auto& pc : pieces_)
            out.push_back({(pc.lo - d) / s, (pc.hi - d) / s, poly::compose_affine(pc.p, s, d)});
        return from_pieces(std::move(out));
    }

    // f(t - d)
    PiecewisePoly translate(const Rational& d) const { return compose_affine(Rational(1), -d); }

    PiecewisePoly scale(const Rational& c) const {
        if (c.is_zero()) return zero();
        std::vector<Piece> out;
        for (const auto& pc : pieces_) out.push_back({pc.lo, pc.hi, poly::scale(pc.p, c)});
        return from_pieces(std::move(out));
    }

    PiecewisePoly operator+(const PiecewisePoly& o) const {
        std::vector<Rational> cuts = merged_breakpoints(*this, o);
        std::vector<Piece> out;
        for (size_t i = 0; i + 1 < cuts.size(); ++i) {
            Rational m = (cuts[i] + cuts[i + 1]) / Rational(2);
            Poly a = piece_poly_at(m), b = o.piece_poly_at(m);
            out.push_back({cuts[i], cuts[i + 1], poly::add(a, b)});
        }
        return from_pieces(std::move(out));
    }

    // Pointwise product; the degree of the result must still be <= 2.
    PiecewisePoly multiply(const PiecewisePoly& o) const {
        std::vector<Rational> cuts = merged_breakpoints(*this, o);
        std::vector<Piece> out;
        for (size_t i = 0; i + 1 < cuts.size(); ++i) {
            Rational m = (cuts[i] + cuts[i + 1]) / Rational(2);
            Poly prod = poly::mul(piece_poly_at(m), o.piece_poly_at(m));
            if (poly::degree(prod) > 2)
                throw std::domain_error("multiply: product degree exceeds 2");
            out.push_back({cuts[i], cuts[i + 1], std::move(prod)});
        }
        return from_pieces(std::move(out));
    }

    // Essential supremum of |f|, exact via per-piece vertex analysis.
    Rational sup_abs() const {
        Rational best(0);
        for (const auto& pc : pieces_) {
            auto [mn, mx] = poly::minmax_on(pc.p, pc.lo, pc.hi);
            best = max(best, max(mx.abs(), mn.abs()));
        }
        return best;
    }

    bool is_nonneg() const {
        for (const auto& pc : pieces_)
            if (!poly::nonneg_on(pc.p, pc.lo, pc.hi)) return false;
        return true;
    }

    // Convex hull of the support.
    std::optional<std::pair<Rational, Rational>> support() const {
        if (pieces_.empty()) return std::nullopt;
        return std::make_pair(pieces_.front().lo, pieces_.back().hi);
    }

    // Total length of the pieces (the support may have gaps).
    Rational support_measure() const {
        Rational acc(0);
        for (const auto& pc : pieces_) acc += pc.hi - pc.lo;
        return acc;
    }

    std::vector<Rational> breakpoints() const {
        std::vector<Rational> out;
        for (const auto& pc : pieces_) {
            if (out.empty() || out.back() != pc.lo) out.push_back(pc.lo);
            out.push_back(pc.hi);
        }
        return out;
    }

    int degree() const {
        int d = -1;
        for (const auto& pc : pieces_) d = std::max(d, poly::degree(pc.p));
        return d;
    }

    Continuity continuity() const {
        if (!junction_continuous(*this)) return Continuity::None;
        if (!junction_continuous(differentiate())) return Continuity::C0;
        return Continuity::C1;
    }

    bool operator==(const PiecewisePoly& o) const {
        if (pieces_.size() != o.pieces_.size()) return false;
        for (size_t i = 0; i < pieces_.size(); ++i) {
            const auto &a = pieces_[i], &b = o.pieces_[i];
            if (a.lo != b.lo || a.hi != b.hi) return false;
            if (poly::trimmed(a.p) != poly::trimmed(b.p)) return false;
        }
        return true;
    }

    static std::vector<Rational> merged_breakpoints(const PiecewisePoly& f, const PiecewisePoly& g) {
        std::vector<Rational> cuts = f.breakpoints();
        for (auto& t : g.breakpoints()) cuts.push_back(t);
        std::sort(cuts.begin(), cuts.end());
        cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
        return cuts;
    }

    // Polynomial of the piece containing t (zero polynomial outside).
    Poly piece_poly_at(const Rational& t) const {
        for (const auto& pc : pieces_)
            if (pc.lo <= t && t < pc.hi) return pc.p;
        return {};
    }

private:
    void merge_adjacent() {
        std::vector<Piece> merged;
        for (auto& pc : pieces_) {
            if (!merged.empty() && merged.back().hi == pc.lo &&
                poly::trimmed(merged.back().p) == poly::trimmed(pc.p)) {
                merged.back().hi = pc.hi;
            } else {
                merged.push_back(std::move(pc));
            }
        }
        pieces_ = std::move(merged);
    }

    static bool junction_continuous(const PiecewisePoly& f) {
        const auto& ps = f.pieces();
        for (size_t i = 0; i < ps.size(); ++i) {
            const auto& pc = ps[i];
            Rational left_end = poly::eval(pc.p, pc.hi);
            Rational right_start = poly::eval(pc.p, pc.lo);
            // boundary with previous piece or with the zero gap
            Rational before = (i > 0 && ps[i - 1].hi == pc.lo) ? poly::eval(ps[i - 1].p, pc.lo) : Rational(0);
            if (before != right_start) return false;
            bool glued_right = (i + 1 < ps.size() && ps[i + 1].lo == pc.hi);
            if (!glued_right && left_end != Rational(0)) return false;
        }
        return true;
    }

    std::vector<Piece> pieces_;
};

// Exact pointwise comparison f <= g everywhere (difference has degree <= 2).
inline bool pointwise_le(const PiecewisePoly& f, const PiecewisePoly& g) {
    PiecewisePoly diff = g + f.scale(Rational(-1));
    return diff.is_nonneg();
}

// ---------------------------------------------------------------------------
// Step functions: finitely many values on contiguous half-open intervals.

class StepFunction {
public:
    StepFunction() = default;

    // breakpoints t_0 < ... < t_N, values c_1..c_N on [t_{i-1}, t_i).
    StepFunction(std::vector<Rational> breakpoints, std::vector<Rational> values)
        : bps_(std::move(breakpoints)), vals_(std::move(values)) {
        if (bps_.size() != vals_.size() + 1)
            throw std::invalid_argument("StepFunction: breakpoints/values size mismatch");
        for (size_t i = 0; i + 1 < bps_.size(); ++i)
            if (!(bps_[i] < bps_[i + 1]))
                throw std::invalid_argument("StepFunction: breakpoints not strictly increasing");
        canonicalize();
    }

    static StepFunction zero() { return {}; }

    static StepFunction single(const Rational& value, const Rational& lo, const Rational& hi) {
        return StepFunction({lo, hi}, {value});
    }

    const std::vector<Rational>& breakpoints() const { return bps_; }
    const std::vector<Rational>& values() const { return vals_; }
    bool is_zero() const { return vals_.empty(); }
    size_t piece_count() const { return vals_.size(); }

    Rational operator()(const Rational& t) const {
        for (size_t i = 0; i < vals_.size(); ++i)
            if (bps_[i] <= t && t < bps_[i + 1]) return vals_[i];
        return Rational(0);
    }

    Rational eval_left(const Rational& t) const {
        for (size_t i = 0; i < vals_.size(); ++i)
            if (bps_[i] < t && t <= bps_[i + 1]) return vals_[i];
        return Rational(0);
    }

    PiecewisePoly to_piecewise() const {
        std::vector<Piece> out;
        for (size_t i = 0; i < vals_.size(); ++i)
            out.push_back({bps_[i], bps_[i + 1], Poly{vals_[i]}});
        return PiecewisePoly::from_pieces(std::move(out));
    }

    // Lossless when the input has degree 0 everywhere.
    static StepFunction from_piecewise(const PiecewisePoly& f) {
        if (f.degree() > 0) throw std::invalid_argument("StepFunction: input is not a step function");
        if (f.is_zero()) return zero();
        std::vector<Rational> bps, vals;
        for (const auto& pc : f.pieces()) {
            if (bps.empty()) {
                bps.push_back(pc.lo);
            } else if (bps.back() != pc.lo) {
                vals.push_back(Rational(0));  // explicit zero gap
                bps.push_back(pc.lo);
            }
            vals.push_back(poly::eval(pc.p, pc.lo));
            bps.push_back(pc.hi);
        }
        return StepFunction(std::move(bps), std::move(vals));
    }

    bool is_nonneg() const {
        for (const auto& v : vals_)
            if (v.sign() < 0) return false;
        return true;
    }

    // Nonincreasing as a function on (0, infinity), implicit zeros included.
    bool is_nonincreasing() const {
        if (vals_.empty()) return true;
        for (size_t i = 0; i + 1 < vals_.size(); ++i)
            if (vals_[i] < vals_[i + 1]) return false;
        if (bps_.front() > Rational(0) && vals_.front() > Rational(0)) return false;
        return vals_.back() >= Rational(0);
    }

    Rational integral() const {
        Rational acc(0);
        for (size_t i = 0; i < vals_.size(); ++i) acc += vals_[i] * (bps_[i + 1] - bps_[i]);
        return acc;
    }

    StepFunction scale(const Rational& c) const {
        if (c.is_zero() || is_zero()) return zero();
        auto vals = vals_;
        for (auto& v : vals) v *= c;
        return StepFunction(bps_, std::move(vals));
    }

    StepFunction dilate(const Rational& s) const {
        if (s.sign() <= 0) throw std::domain_error("dilate: scale must be positive");
        if (is_zero()) return zero();
        auto bps = bps_;
        for (auto& t : bps) t /= s;
        return StepFunction(std::move(bps), vals_);
    }

    bool operator==(const StepFunction& o) const { return bps_ == o.bps_ && vals_ == o.vals_; }

    // Common-refinement iteration over two step functions: calls
    // fn(lo, hi, v_this, v_other) on every interval where either is nonzero.
    template <typename Fn>
    static void zip(const StepFunction& a, const StepFunction& b, Fn&& fn) {
        std::vector<Rational> cuts;
        for (const auto& t : a.bps_) cuts.push_back(t);
        for (const auto& t : b.bps_) cuts.push_back(t);
        std::sort(cuts.begin(), cuts.end());
        cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
        for (size_t i = 0; i + 1 < cuts.size(); ++i) {
            Rational m = (cuts[i] + cuts[i + 1]) / Rational(2);
            fn(cuts[i], cuts[i + 1], a(m), b(m));
        }
    }

private:
    void canonicalize() {
        // merge equal adjacent values, drop zero ends
        std::vector<Rational> bps, vals;
        for (size_t i = 0; i < vals_.size(); ++i) {
            if (!vals.empty() && vals.back() == vals_[i]) {
                bps.back() = bps_[i + 1];
                continue;
            }
            if (vals.empty()) bps.push_back(bps_[i]);
            vals.push_back(vals_[i]);
            bps.push_back(bps_[i + 1]);
        }
        while (!vals.empty() && vals.front().is_zero()) {
            vals.erase(vals.begin());
            bps.erase(bps.begin());
        }
        while (!vals.empty() && vals.back().is_zero()) {
            vals.pop_back();
            bps.pop_back();
        }
        if (vals.empty()) {
            bps.clear();
        }
        bps_ = std::move(bps);
        vals_ = std::move(vals);
    }

    std::vector<Rational> bps_;
    std::vector<Rational> vals_;
};

// Step function with certified interval values, the output shape of
// operations whose exact values would be irrational.
struct EnclosureStep {
    std::vector<Rational> breakpoints;  // N+1
    std::vector<Enclosure> values;      // N

    StepFunction lower() const {
        std::vector<Rational> v;
        for (const auto& e : values) v.push_back(e.lo);
        return StepFunction(breakpoints, v);
    }
    StepFunction upper() const {
        std::vector<Rational> v;
        for (const auto& e : values) v.push_back(e.hi);
        return StepFunction(breakpoints, v);
    }
};

// sqrt(g*h) on the common refinement; exact where g*h is a rational square.
inline EnclosureStep geometric_mean(const StepFunction& g, const StepFunction& h,
                                    const Rational& tol = enc::default_tol()) {
    if (!g.is_nonneg() || !h.is_nonneg())
        throw std::domain_error("geometric_mean: inputs must be nonnegative");
    EnclosureStep out;
    StepFunction::zip(g, h, [&](const Rational& lo, const Rational& hi, const Rational& a, const Rational& b) {
        Enclosure v = enc::sqrt(a * b, tol);
        if (!out.breakpoints.empty() && out.breakpoints.back() != lo) {
            out.values.push_back(Enclosure(Rational(0)));
            out.breakpoints.push_back(lo);
        }
        if (out.breakpoints.empty()) out.breakpoints.push_back(lo);
        out.values.push_back(v);
        out.breakpoints.push_back(hi);
    });
    return out;
}

}  // namespace rical
