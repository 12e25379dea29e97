#pragma once

// Exact scalars. Everything in qdm is computed over Q with GMP rationals.

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace qdm {

using Rational = mpq_class;
using Integer = mpz_class;

/// Base class of every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline Rational make_rational(long num, long den = 1) {
    Rational r(num, den);
    r.canonicalize();
    return r;
}

/// Parses "p", "-p" or "p/q". Throws Error on anything else or q == 0.
inline Rational parse_rational(std::string_view text) {
    std::string s(text);
    if (s.empty()) throw Error("empty rational literal");
    auto slash = s.find('/');
    auto valid_int = [](const std::string& t) {
        if (t.empty()) return false;
        std::size_t i = (t[0] == '-' || t[0] == '+') ? 1 : 0;
        if (i == t.size()) return false;
        for (; i < t.size(); ++i)
            if (t[i] < '0' || t[i] > '9') return false;
        return true;
    };
    std::string num = slash == std::string::npos ? s : s.substr(0, slash);
    std::string den = slash == std::string::npos ? "1" : s.substr(slash + 1);
    if (!valid_int(num) || !valid_int(den) || den[0] == '-' || den[0] == '+')
        throw Error("malformed rational literal '" + s + "'");
    if (num[0] == '+') num.erase(0, 1);
    Integer n(num), d(den);
    if (d == 0) throw Error("zero denominator in '" + s + "'");
    Rational r(n, d);
    r.canonicalize();
    return r;
}

/// Canonical text form: "p" for integers, "p/q" otherwise.
inline std::string to_string(const Rational& r) { return r.get_str(); }

inline bool is_integer(const Rational& r) { return r.get_den() == 1; }

inline long to_long(const Rational& r) {
    if (!is_integer(r) || !r.get_num().fits_slong_p())
        throw Error("rational " + r.get_str() + " is not a machine integer");
    return r.get_num().get_si();
}

inline Rational factorial(long n) {
    Integer f = 1;
    for (long i = 2; i <= n; ++i) f *= i;
    return Rational(f);
}

inline Rational pow_rational(const Rational& base, long exp) {
    Rational r = 1;
    for (long i = 0; i < exp; ++i) r *= base;
    return r;
}

} // namespace qdm
