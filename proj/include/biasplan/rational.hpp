#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>

namespace biasplan {

/// Exact fraction in lowest terms with a positive denominator.
class Rational {
public:
    Rational() = default;
    Rational(long value) : value_(value) {}
    Rational(int value) : value_(value) {}
    Rational(const mpz_class& num, const mpz_class& den);
    Rational(long num, long den);
    explicit Rational(mpq_class value);

    /// Accepts "17", "-3", "35/2", "17.5", "-0.125". Throws std::invalid_argument.
    static Rational parse(std::string_view text);

    [[nodiscard]] mpz_class numerator() const { return value_.get_num(); }
    [[nodiscard]] mpz_class denominator() const { return value_.get_den(); }
    [[nodiscard]] const mpq_class& raw() const { return value_; }

    [[nodiscard]] bool is_integer() const { return value_.get_den() == 1; }
    [[nodiscard]] int sign() const { return sgn(value_); }
    [[nodiscard]] Rational abs() const;
    [[nodiscard]] mpz_class floor() const;
    [[nodiscard]] mpz_class ceil() const;

    /// Exact power with a (possibly negative) integer exponent.
    [[nodiscard]] Rational pow(long exponent) const;

    /// "p/q", or "p" when the denominator is 1.
    [[nodiscard]] std::string str() const;
    [[nodiscard]] double to_double() const { return value_.get_d(); }

    Rational& operator+=(const Rational& o) { value_ += o.value_; return *this; }
    Rational& operator-=(const Rational& o) { value_ -= o.value_; return *this; }
    Rational& operator*=(const Rational& o) { value_ *= o.value_; return *this; }
    Rational& operator/=(const Rational& o);

    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
    friend Rational operator-(const Rational& a) { return Rational(mpq_class(-a.value_)); }

    friend bool operator==(const Rational& a, const Rational& b) { return a.value_ == b.value_; }
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
        const int c = cmp(a.value_, b.value_);
        return c < 0 ? std::strong_ordering::less
                     : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
    }

    friend std::ostream& operator<<(std::ostream& os, const Rational& r);

private:
    mpq_class value_{0};
};

struct RationalHash {
    std::size_t operator()(const Rational& r) const;
};

/// A rational or +infinity. Infinity compares above every finite value and
/// marks "no viable continuation".
class ExtRational {
public:
    ExtRational() = default;
    ExtRational(Rational value) : finite_(true), value_(std::move(value)) {}
    ExtRational(long value) : ExtRational(Rational(value)) {}
    ExtRational(int value) : ExtRational(Rational(value)) {}

    static ExtRational infinity() {
        ExtRational e;
        e.finite_ = false;
        return e;
    }

    [[nodiscard]] bool is_finite() const { return finite_; }
    [[nodiscard]] bool is_infinite() const { return !finite_; }
    /// Precondition: finite.
    [[nodiscard]] const Rational& value() const;
    [[nodiscard]] std::string str() const { return finite_ ? value_.str() : "inf"; }

    friend ExtRational operator+(const ExtRational& a, const ExtRational& b) {
        if (!a.finite_ || !b.finite_) return infinity();
        return ExtRational(a.value_ + b.value_);
    }

    friend bool operator==(const ExtRational& a, const ExtRational& b) {
        if (a.finite_ != b.finite_) return false;
        return !a.finite_ || a.value_ == b.value_;
    }
    friend std::strong_ordering operator<=>(const ExtRational& a, const ExtRational& b) {
        if (!a.finite_ || !b.finite_) {
            if (a.finite_ == b.finite_) return std::strong_ordering::equal;
            return a.finite_ ? std::strong_ordering::less : std::strong_ordering::greater;
        }
        return a.value_ <=> b.value_;
    }

    friend std::ostream& operator<<(std::ostream& os, const ExtRational& r);

private:
    bool finite_ = true;
    Rational value_{};
};

}  // namespace biasplan
