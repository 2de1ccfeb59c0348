#pragma once

#include <cstdint>
#include <numeric>
#include <string>

#include "fanomom/errors.hpp"

namespace fanomom {

/// Exact rational arithmetic on int64 numerator/denominator, always stored in
/// lowest terms with a positive denominator.  Used where exactness matters
/// (lattice polytope data, piecewise-linear weights); overflow throws rather
/// than wrapping.
class Rational {
  public:
    constexpr Rational() : num_(0), den_(1) {}
    Rational(std::int64_t n) : num_(n), den_(1) {}  // NOLINT: implicit by design
    Rational(std::int64_t n, std::int64_t d) : num_(n), den_(d) { reduce(); }

    std::int64_t num() const { return num_; }
    std::int64_t den() const { return den_; }

    double to_double() const {
        return static_cast<double>(num_) / static_cast<double>(den_);
    }

    Rational operator-() const { return Rational(-num_, den_); }

    friend Rational operator+(const Rational& a, const Rational& b) {
        return Rational(add_checked(mul_checked(a.num_, b.den_),
                                    mul_checked(b.num_, a.den_)),
                        mul_checked(a.den_, b.den_));
    }
    friend Rational operator-(const Rational& a, const Rational& b) {
        return a + (-b);
    }
    friend Rational operator*(const Rational& a, const Rational& b) {
        return Rational(mul_checked(a.num_, b.num_),
                        mul_checked(a.den_, b.den_));
    }
    friend Rational operator/(const Rational& a, const Rational& b) {
        if (b.num_ == 0)
            throw Error(ErrorCode::BadRational, "rational division by zero");
        return Rational(mul_checked(a.num_, b.den_),
                        mul_checked(a.den_, b.num_));
    }

    friend bool operator==(const Rational& a, const Rational& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend bool operator!=(const Rational& a, const Rational& b) {
        return !(a == b);
    }
    friend bool operator<(const Rational& a, const Rational& b) {
        // Denominators are positive, so cross-multiplication preserves order.
        return mul_checked(a.num_, b.den_) < mul_checked(b.num_, a.den_);
    }
    friend bool operator<=(const Rational& a, const Rational& b) {
        return a < b || a == b;
    }
    friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
    friend bool operator>=(const Rational& a, const Rational& b) {
        return b <= a;
    }

    /// "7", "-3/10", or a plain decimal such as "0.25" (exact: 25/100).
    static Rational parse(const std::string& s);

    /// "num/den" in lowest terms, or just "num" for integers.
    std::string str() const {
        if (den_ == 1) return std::to_string(num_);
        return std::to_string(num_) + "/" + std::to_string(den_);
    }

  private:
    void reduce() {
        if (den_ == 0)
            throw Error(ErrorCode::BadRational, "rational with zero denominator");
        if (den_ < 0) {
            num_ = -num_;
            den_ = -den_;
        }
        const std::int64_t g = std::gcd(num_ < 0 ? -num_ : num_, den_);
        if (g > 1) {
            num_ /= g;
            den_ /= g;
        }
    }

    static std::int64_t mul_checked(std::int64_t a, std::int64_t b) {
        std::int64_t r = 0;
        if (__builtin_mul_overflow(a, b, &r))
            throw Error(ErrorCode::BadRational, "rational overflow in multiply");
        return r;
    }
    static std::int64_t add_checked(std::int64_t a, std::int64_t b) {
        std::int64_t r = 0;
        if (__builtin_add_overflow(a, b, &r))
            throw Error(ErrorCode::BadRational, "rational overflow in add");
        return r;
    }

    std::int64_t num_;
    std::int64_t den_;
};

inline Rational Rational::parse(const std::string& s) {
    if (s.empty()) throw Error(ErrorCode::BadRational, "empty rational literal");
    const auto bad = [&] {
        return Error(ErrorCode::BadRational, "cannot parse rational: '" + s + "'");
    };
    auto parse_int = [&](const std::string& part) -> std::int64_t {
        if (part.empty()) throw bad();
        std::size_t pos = 0;
        std::int64_t v = 0;
        try {
            v = std::stoll(part, &pos);
        } catch (const std::exception&) {
            throw bad();
        }
        if (pos != part.size()) throw bad();
        return v;
    };
    const auto slash = s.find('/');
    if (slash != std::string::npos) {
        return Rational(parse_int(s.substr(0, slash)),
                        parse_int(s.substr(slash + 1)));
    }
    const auto dot = s.find('.');
    if (dot != std::string::npos) {
        const std::string head = s.substr(0, dot);
        const std::string frac = s.substr(dot + 1);
        if (frac.empty() || frac.size() > 18) throw bad();
        for (char c : frac)
            if (c < '0' || c > '9') throw bad();
        std::int64_t den = 1;
        for (std::size_t i = 0; i < frac.size(); ++i) den = mul_checked(den, 10);
        const bool neg = !head.empty() && head[0] == '-';
        const std::int64_t whole =
            (head.empty() || head == "-" || head == "+") ? 0 : parse_int(head);
        const std::int64_t fnum = parse_int(frac);
        const std::int64_t mag =
            add_checked(mul_checked(whole < 0 ? -whole : whole, den), fnum);
        return Rational(neg ? -mag : mag, den);
    }
    return Rational(parse_int(s));
}

}  // namespace fanomom
