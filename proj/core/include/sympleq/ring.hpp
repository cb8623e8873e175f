#pragma once

#include "sympleq/rational.hpp"

namespace sympleq {

// Coefficient-ring hooks used by the generic polynomial kernel. The kernel is
// instantiated with exact rationals, doubles (numeric orbit matching) and
// base-coordinate polynomials (invariant fields of symbol families).

inline bool ring_is_zero(const Rat& r) { return rat_is_zero(r); }
inline Rat ring_neg(const Rat& r) { return -r; }
inline Rat ring_mul_int(const Rat& r, const Int& n) { return r * Rat(n); }
inline Rat ring_div_int(const Rat& r, const Int& n) { return r / Rat(n); }
inline Rat coeff_scale(const Rat& c, const Rat& s) { return c * s; }
inline double ring_to_double(const Rat& r) { return rat_to_double(r); }

inline bool ring_is_zero(double r) { return r == 0.0; }
inline double ring_neg(double r) { return -r; }
inline double ring_mul_int(double r, const Int& n) { return r * n.get_d(); }
inline double ring_div_int(double r, const Int& n) { return r / n.get_d(); }
inline double coeff_scale(double c, const Rat& s) { return c * rat_to_double(s); }
inline double ring_to_double(double r) { return r; }

template <class R>
R ring_one();
template <>
inline Rat ring_one<Rat>() { return Rat(1); }
template <>
inline double ring_one<double>() { return 1.0; }

}  // namespace sympleq
