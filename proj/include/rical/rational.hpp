#pragma once

// Exact rational scalar, the substrate for every function representation in
// this library. Backed by GMP's mpq so numerators and denominators can grow
// without overflow; always kept in lowest terms with a positive denominator.

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace rical {

class Rational {
public:
    Rational() : v_(0) {}
    Rational(long n) : v_(n) {}
    Rational(int n) : v_(n) {}
    Rational(long n, long d) { assign(mpz_class(n), mpz_class(d)); }
    Rational(const mpz_class& n, const mpz_class& d) { assign(n, d); }
    explicit Rational(mpq_class q) : v_(std::move(q)) { v_.canonicalize(); }

    const mpz_class& num() const { return v_.get_num(); }
    const mpz_class& den() const { return v_.get_den(); }
    const mpq_class& raw() const { return v_; }

    bool is_zero() const { return sgn(v_) == 0; }
    bool is_integer() const { return v_.get_den() == 1; }
    int sign() const { return sgn(v_); }

    Rational operator-() const { return Rational(mpq_class(-v_)); }
    Rational operator+(const Rational& o) const { return Rational(mpq_class(v_ + o.v_)); }
    Rational operator-(const Rational& o) const { return Rational(mpq_class(v_ - o.v_)); }
    Rational operator*(const Rational& o) const { return Rational(mpq_class(v_ * o.v_)); }
    Rational operator/(const Rational& o) const {
        if (o.is_zero()) throw std::domain_error("Rational: division by zero");
        return Rational(mpq_class(v_ / o.v_));
    }
    Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
    Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
    Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
    Rational& operator/=(const Rational& o) { return *this = *this / o; }

    bool operator==(const Rational& o) const { return v_ == o.v_; }
    std::strong_ordering operator<=>(const Rational& o) const {
        int c = cmp(v_, o.v_);
        if (c < 0) return std::strong_ordering::less;
        if (c > 0) return std::strong_ordering::greater;
        return std::strong_ordering::equal;
    }

    Rational abs() const { return sign() < 0 ? -*this : *this; }

    Rational reciprocal() const {
        if (is_zero()) throw std::domain_error("Rational: reciprocal of zero");
        return Rational(mpq_class(1 / v_));
    }

    // Integer power; negative exponents require a nonzero base.
    Rational pow_int(long e) const {
        if (e == 0) return Rational(1);
        bool inv = e < 0;
        unsigned long k = inv ? static_cast<unsigned long>(-(e + 1)) + 1 : static_cast<unsigned long>(e);
        mpz_class n, d;
        mpz_pow_ui(n.get_mpz_t(), v_.get_num().get_mpz_t(), k);
        mpz_pow_ui(d.get_mpz_t(), v_.get_den().get_mpz_t(), k);
        Rational r(n, d);
        return inv ? r.reciprocal() : r;
    }

    mpz_class floor() const {
        mpz_class q;
        mpz_fdiv_q(q.get_mpz_t(), v_.get_num().get_mpz_t(), v_.get_den().get_mpz_t());
        return q;
    }
    mpz_class ceil() const {
        mpz_class q;
        mpz_cdiv_q(q.get_mpz_t(), v_.get_num().get_mpz_t(), v_.get_den().get_mpz_t());
        return q;
    }

    double to_double() const { return v_.get_d(); }

    // Canonical "p" or "p/q" form; round trips bit-exactly through parse().
    std::string str() const {
        if (is_integer()) return v_.get_num().get_str();
        return v_.get_num().get_str() + "/" + v_.get_den().get_str();
    }

    // Accepts "p", "p/q", and plain decimal/scientific literals such as
    // "0.25" or "1e-9" (parsed exactly, not through floating point).
    static Rational parse(std::string_view s);

private:
    void assign(const mpz_class& n, const mpz_class& d) {
        if (sgn(d) == 0) throw std::domain_error("Rational: zero denominator");
        v_ = mpq_class(n);
        v_ /= mpq_class(d);
    }

    mpq_class v_;
};

inline Rational min(const Rational& a, const Rational& b) { return a < b ? a : b; }
inline Rational max(const Rational& a, const Rational& b) { return a < b ? b : a; }

inline Rational Rational::parse(std::string_view s) {
    auto bad = [&] { return std::invalid_argument("Rational: cannot parse '" + std::string(s) + "'"); };
    if (s.empty()) throw bad();
    if (auto slash = s.find('/'); slash != std::string_view::npos) {
        std::string n(s.substr(0, slash)), d(s.substr(slash + 1));
        mpz_class nn, dd;
        if (nn.set_str(n, 10) != 0 || dd.set_str(d, 10) != 0) throw bad();
        return Rational(nn, dd);
    }
    // decimal / scientific form
    std::string_view rest = s;
    long exp10 = 0;
    if (auto e = rest.find_first_of("eE"); e != std::string_view::npos) {
        std::string es(rest.substr(e + 1));
        rest = rest.substr(0, e);
        try {
            size_t used = 0;
            exp10 = std::stol(es, &used);
            if (used != es.size()) throw bad();
        } catch (const std::logic_error&) {
            throw bad();
        }
    }
    std::string digits;
    long frac_digits = 0;
    bool seen_dot = false, seen_digit = false;
    size_t i = 0;
    if (i < rest.size() && (rest[i] == '+' || rest[i] == '-')) digits.push_back(rest[i++]);
    for (; i < rest.size(); ++i) {
        char c = rest[i];
        if (c == '.') {
            if (seen_dot) throw bad();
            seen_dot = true;
        } else if (c >= '0' && c <= '9') {
            digits.push_back(c);
            seen_digit = true;
            if (seen_dot) ++frac_digits;
        } else {
            throw bad();
        }
    }
    if (!seen_digit) throw bad();
    mpz_class mant;
    if (mant.set_str(digits, 10) != 0) throw bad();
    long net = exp10 - frac_digits;
    mpz_class scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(net < 0 ? -net : net));
    return net >= 0 ? Rational(mant * scale, 1) : Rational(mant, scale);
}

}  // namespace rical
