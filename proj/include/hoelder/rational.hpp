#pragma once

// Exact integer/rational arithmetic primitives shared by every module:
// GMP-backed numbers, string parsing ("p/q", integers, decimals, exponent
// notation) and deterministic decimal rendering.

#include <gmpxx.h>

#include <cstdlib>
#include <stdexcept>
#include <string>

namespace hoelder {

using Int = mpz_class;
using Rat = mpq_class;

struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed textual/JSON input.
struct ParseError : Error {
    explicit ParseError(const std::string& msg) : Error(msg) {}
};

// A sequence generator could not produce a requested term.
struct EvalError : Error {
    explicit EvalError(const std::string& msg) : Error(msg) {}
};

// Matrix/complex shape mismatch.
struct DimensionError : Error {
    explicit DimensionError(const std::string& msg) : Error(msg) {}
};

// An operation was invoked without its gate established.
struct PreconditionError : Error {
    explicit PreconditionError(const std::string& msg) : Error(msg) {}
};

// A guaranteed-solvable step failed; message carries the witness.
struct InternalError : Error {
    explicit InternalError(const std::string& msg) : Error(msg) {}
};

inline Rat make_rat(Int num, Int den) {
    if (den == 0) throw ParseError("rational with zero denominator");
    Rat r(std::move(num), std::move(den));
    r.canonicalize();
    return r;
}

inline Int ipow10(unsigned long k) {
    Int r;
    mpz_ui_pow_ui(r.get_mpz_t(), 10, k);
    return r;
}

// Accepts optional sign, digits, optional ".digits", optional exponent
// ("e"/"E" with optional sign). Returns exact value.
inline Rat parse_decimal(const std::string& s) {
    std::size_t i = 0;
    bool neg = false;
    if (i < s.size() && (s[i] == '+' || s[i] == '-')) neg = (s[i++] == '-');
    std::string int_part, frac_part;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) int_part += s[i++];
    if (i < s.size() && s[i] == '.') {
        ++i;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) frac_part += s[i++];
    }
    long exp10 = 0;
    if (i < s.size() && (s[i] == 'e' || s[i] == 'E')) {
        ++i;
        bool eneg = false;
        if (i < s.size() && (s[i] == '+' || s[i] == '-')) eneg = (s[i++] == '-');
        if (i >= s.size()) throw ParseError("empty exponent in '" + s + "'");
        std::string edig;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) edig += s[i++];
        if (edig.empty()) throw ParseError("empty exponent in '" + s + "'");
        exp10 = std::strtol(edig.c_str(), nullptr, 10);
        if (eneg) exp10 = -exp10;
    }
    if (i != s.size() || (int_part.empty() && frac_part.empty()))
        throw ParseError("malformed number '" + s + "'");
    Int mant(int_part.empty() ? "0" : int_part);
    for (char c : frac_part) mant = mant * 10 + (c - '0');
    long shift = exp10 - static_cast<long>(frac_part.size());
    Rat r;
    if (shift >= 0)
        r = Rat(mant * ipow10(static_cast<unsigned long>(shift)));
    else
        r = make_rat(mant, ipow10(static_cast<unsigned long>(-shift)));
    if (neg) r = -r;
    return r;
}

// Accepts "p/q", plain integers, and decimal/exponent notation.
inline Rat parse_rat(const std::string& s) {
    if (s.empty()) throw ParseError("empty rational literal");
    auto slash = s.find('/');
    if (slash != std::string::npos) {
        std::string sp = s.substr(0, slash), sq = s.substr(slash + 1);
        if (sp.empty() || sq.empty()) throw ParseError("malformed rational '" + s + "'");
        try {
            return make_rat(Int(sp), Int(sq));
        } catch (const std::invalid_argument&) {
            throw ParseError("malformed rational '" + s + "'");
        }
    }
    return parse_decimal(s);
}

// "p/q" (or "p" when the denominator is 1).
inline std::string rat_string(const Rat& r) {
    return r.get_str();
}

inline int digit_count(const Int& v) {
    if (v == 0) return 1;
    return static_cast<int>(mpz_sizeinbase(mpz_class(abs(v)).get_mpz_t(), 10));
}

// Deterministic rendering with `sig` significant digits, round half away
// from zero. Positional notation for moderate exponents, otherwise
// "d.dd...e+XX".
inline std::string decimal_string(const Rat& x, int sig = 12) {
    if (sig < 1) sig = 1;
    if (x == 0) return "0";
    bool neg = x < 0;
    Int p = abs(x.get_num()), q = x.get_den();
    // e = floor(log10(p/q)), found by guess + correction.
    int e = digit_count(p) - digit_count(q);
    auto scaled = [&](int ee) {
        // round(p * 10^(sig-1-ee) / q), half away from zero
        int k = sig - 1 - ee;
        Int num = p, den = q;
        if (k >= 0) num *= ipow10(static_cast<unsigned long>(k));
        else den *= ipow10(static_cast<unsigned long>(-k));
        Int m = (2 * num + den) / (2 * den);
        return m;
    };
    Int m = scaled(e);
    Int lo = ipow10(static_cast<unsigned long>(sig - 1)), hi = ipow10(static_cast<unsigned long>(sig));
    while (m >= hi) { ++e; m = scaled(e); }
    while (m < lo) { --e; m = scaled(e); }
    if (m >= hi) { ++e; m = scaled(e); }  // rounding bumped back up
    std::string digits = m.get_str();
    std::string out;
    if (e >= -4 && e < sig + 6) {
        if (e >= sig - 1) {
            out = digits + std::string(static_cast<std::size_t>(e - sig + 1), '0');
        } else if (e >= 0) {
            out = digits.substr(0, static_cast<std::size_t>(e + 1)) + "." + digits.substr(static_cast<std::size_t>(e + 1));
        } else {
            out = "0." + std::string(static_cast<std::size_t>(-e - 1), '0') + digits;
        }
        // trim trailing zeros of a fractional part
        if (out.find('.') != std::string::npos) {
            while (out.back() == '0') out.pop_back();
            if (out.back() == '.') out.pop_back();
        }
    } else {
        out = digits.substr(0, 1);
        std::string rest = digits.substr(1);
        while (!rest.empty() && rest.back() == '0') rest.pop_back();
        if (!rest.empty()) out += "." + rest;
        out += "e" + std::string(e >= 0 ? "+" : "-") + std::to_string(e >= 0 ? e : -e);
    }
    return neg ? "-" + out : out;
}

}  // namespace hoelder
