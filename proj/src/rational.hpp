#pragma once

#include <gmpxx.h>

#include <optional>
#include <stdexcept>
#include <string>

namespace pmx {

/// Exact rational scalar. All gadget constants and constraint values are kept
/// exact; doubles only appear at the PolymatrixGame boundary.
using Rational = mpq_class;

inline Rational make_rational(long num, long den) {
    if (den == 0) throw std::invalid_argument("rational with zero denominator");
    Rational q(num, den);
    q.canonicalize();
    return q;
}

/// Parses a decimal string ("0.125", "-3", "2/9") into an exact rational.
inline Rational parse_rational(const std::string& text) {
    auto bad = [&]() -> std::invalid_argument {
        return std::invalid_argument("not a rational literal: '" + text + "'");
    };
    if (text.empty()) throw bad();
    auto slash = text.find('/');
    if (slash != std::string::npos) {
        Rational q;
        if (q.set_str(text, 10) != 0) throw bad();
        if (q.get_den() == 0) throw bad();
        q.canonicalize();
        return q;
    }
    std::string digits;
    digits.reserve(text.size());
    long frac_digits = 0;
    bool seen_dot = false, seen_digit = false;
    std::size_t i = 0;
    if (text[i] == '+' || text[i] == '-') {
        if (text[i] == '-') digits.push_back('-');
        ++i;
    }
    for (; i < text.size(); ++i) {
        char c = text[i];
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
    mpz_class num(digits, 10);
    mpz_class den(1);
    for (long d = 0; d < frac_digits; ++d) den *= 10;
    Rational q(num, den);
    q.canonicalize();
    return q;
}

inline std::string rational_to_string(const Rational& q) {
    return q.get_str();
}

/// Exact conversion: every finite double is a dyadic rational.
inline Rational rational_from_double(double x) {
    return Rational(x);
}

}  // namespace pmx
