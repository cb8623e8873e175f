#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace sympleq {

// Exact arithmetic everywhere in the algebra kernel. Group elements coming
// from matrix exponentials are the only place doubles enter (see numeric.hpp).
using Rat = mpq_class;
using Int = mpz_class;

struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline Rat rat_of(long num, long den = 1) {
    if (den == 0) throw std::invalid_argument("rational with zero denominator");
    Rat r(num, den);
    r.canonicalize();
    return r;
}

// Accepts "p", "-p" or "p/q" in base 10.
inline Rat rat_parse(const std::string& s) {
    Rat r;
    if (s.empty() || r.set_str(s, 10) != 0)
        throw ValidationError("malformed rational literal: '" + s + "'");
    if (r.get_den() == 0)
        throw ValidationError("rational with zero denominator: '" + s + "'");
    r.canonicalize();
    return r;
}

inline std::string rat_str(const Rat& r) { return r.get_str(); }

inline double rat_to_double(const Rat& r) { return r.get_d(); }

inline bool rat_is_zero(const Rat& r) { return sgn(r) == 0; }

inline Int factorial(unsigned n) {
    Int f = 1;
    for (unsigned i = 2; i <= n; ++i) f *= i;
    return f;
}

inline Int binomial(unsigned n, unsigned k) {
    if (k > n) return 0;
    Int b;
    mpz_bin_uiui(b.get_mpz_t(), n, k);
    return b;
}

}  // namespace sympleq
