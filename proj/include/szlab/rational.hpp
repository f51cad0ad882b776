#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cctype>
#include <string>

#include "errors.hpp"

namespace szlab {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

inline Int rat_num(const Rat& r) { return boost::multiprecision::numerator(r); }
inline Int rat_den(const Rat& r) { return boost::multiprecision::denominator(r); }

// Canonical wire form: "p/q" with q > 0 and gcd(p,q)=1, or plain "p" when q=1.
inline std::string rat_to_string(const Rat& r) {
    if (rat_den(r) == 1) return rat_num(r).str();
    return rat_num(r).str() + "/" + rat_den(r).str();
}

// Accepts "p/q", plain integers, and decimal literals ("0.25", "-3.5e-2").
inline Rat parse_rational(const std::string& text) {
    if (text.empty()) throw InvalidArgument("parse_rational: empty string");
    const auto slash = text.find('/');
    if (slash != std::string::npos) {
        const std::string p = text.substr(0, slash), q = text.substr(slash + 1);
        if (p.empty() || q.empty()) throw InvalidArgument("parse_rational: malformed '" + text + "'");
        Int num(p), den(q);
        if (den == 0) throw InvalidArgument("parse_rational: zero denominator in '" + text + "'");
        return Rat(num, den);
    }
    // decimal / scientific form
    std::string mantissa = text;
    long long exp10 = 0;
    const auto epos = text.find_first_of("eE");
    if (epos != std::string::npos) {
        mantissa = text.substr(0, epos);
        exp10 = std::stoll(text.substr(epos + 1));
    }
    std::string digits;
    long long frac_digits = 0;
    bool seen_dot = false, seen_digit = false;
    std::size_t i = 0;
    if (i < mantissa.size() && (mantissa[i] == '+' || mantissa[i] == '-')) {
        if (mantissa[i] == '-') digits += '-';
        ++i;
    }
    for (; i < mantissa.size(); ++i) {
        const char c = mantissa[i];
        if (c == '.') {
            if (seen_dot) throw InvalidArgument("parse_rational: malformed '" + text + "'");
            seen_dot = true;
        } else if (std::isdigit(static_cast<unsigned char>(c))) {
            digits += c;
            seen_digit = true;
            if (seen_dot) ++frac_digits;
        } else {
            throw InvalidArgument("parse_rational: malformed '" + text + "'");
        }
    }
    if (!seen_digit) throw InvalidArgument("parse_rational: malformed '" + text + "'");
    Int num(digits.empty() || digits == "-" ? "0" : digits);
    Int den = 1;
    const long long net = exp10 - frac_digits;
    Int ten = 10;
    for (long long k = 0; k < (net >= 0 ? net : -net); ++k) {
        if (net >= 0) num *= ten; else den *= ten;
    }
    return Rat(num, den);
}

}  // namespace szlab
