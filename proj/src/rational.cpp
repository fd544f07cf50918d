#include "biasplan/rational.hpp"

#include <cctype>
#include <functional>
#include <ostream>
#include <stdexcept>

namespace biasplan {

namespace {

bool all_digits(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s) {
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    }
    return true;
}

[[noreturn]] void bad_literal(std::string_view text) {
    throw std::invalid_argument("malformed number '" + std::string(text) + "'");
}

}  // namespace

Rational::Rational(const mpz_class& num, const mpz_class& den) {
    if (den == 0) throw std::domain_error("rational with zero denominator");
    value_ = mpq_class(num, den);
    value_.canonicalize();
}

Rational::Rational(long num, long den) : Rational(mpz_class(num), mpz_class(den)) {}

Rational::Rational(mpq_class value) : value_(std::move(value)) { value_.canonicalize(); }

Rational Rational::parse(std::string_view text) {
    std::string_view body = text;
    bool negative = false;
    if (!body.empty() && (body.front() == '-' || body.front() == '+')) {
        negative = body.front() == '-';
        body.remove_prefix(1);
    }
    Rational result;
    if (auto slash = body.find('/'); slash != std::string_view::npos) {
        auto num = body.substr(0, slash);
        auto den = body.substr(slash + 1);
        if (!all_digits(num) || !all_digits(den)) bad_literal(text);
        mpz_class d{std::string(den)};
        if (d == 0) bad_literal(text);
        result = Rational(mpz_class(std::string(num)), d);
    } else if (auto dot = body.find('.'); dot != std::string_view::npos) {
        auto whole = body.substr(0, dot);
        auto frac = body.substr(dot + 1);
        if (whole.empty()) whole = "0";
        if (!all_digits(whole) || !all_digits(frac)) bad_literal(text);
        mpz_class scale;
        mpz_ui_pow_ui(scale.get_mpz_t(), 10, frac.size());
        mpz_class num = mpz_class(std::string(whole)) * scale + mpz_class(std::string(frac));
        result = Rational(num, scale);
    } else {
        if (!all_digits(body)) bad_literal(text);
        result = Rational(mpz_class(std::string(body)), mpz_class(1));
    }
    return negative ? -result : result;
}

Rational Rational::abs() const { return Rational(mpq_class(::abs(value_))); }

mpz_class Rational::floor() const {
    mpz_class q;
    mpz_fdiv_q(q.get_mpz_t(), value_.get_num_mpz_t(), value_.get_den_mpz_t());
    return q;
}

mpz_class Rational::ceil() const {
    mpz_class q;
    mpz_cdiv_q(q.get_mpz_t(), value_.get_num_mpz_t(), value_.get_den_mpz_t());
    return q;
}

Rational Rational::pow(long exponent) const {
    if (exponent < 0) {
        if (value_ == 0) throw std::domain_error("zero to a negative power");
        return (Rational(1) / *this).pow(-exponent);
    }
    mpz_class num, den;
    const auto e = static_cast<unsigned long>(exponent);
    mpz_pow_ui(num.get_mpz_t(), value_.get_num_mpz_t(), e);
    mpz_pow_ui(den.get_mpz_t(), value_.get_den_mpz_t(), e);
    return Rational(num, den);
}

std::string Rational::str() const {
    if (is_integer()) return value_.get_num().get_str();
    return value_.get_num().get_str() + "/" + value_.get_den().get_str();
}

Rational& Rational::operator/=(const Rational& o) {
    if (o.value_ == 0) throw std::domain_error("division by zero");
    value_ /= o.value_;
    return *this;
}

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

std::size_t RationalHash::operator()(const Rational& r) const {
    const std::size_t h1 = mpz_fdiv_ui(r.raw().get_num_mpz_t(), 1000000007UL);
    const std::size_t h2 = mpz_fdiv_ui(r.raw().get_den_mpz_t(), 998244353UL);
    return h1 * 1315423911u ^ (h2 + 0x9e3779b97f4a7c15ULL + (h1 << 6) + (h1 >> 2));
}

const Rational& ExtRational::value() const {
    if (!finite_) throw std::logic_error("value() of infinite ExtRational");
    return value_;
}

std::ostream& operator<<(std::ostream& os, const ExtRational& r) { return os << r.str(); }

}  // namespace biasplan
