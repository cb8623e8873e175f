#pragma once

#include <vector>

#include "sympleq/base_poly.hpp"
#include "sympleq/exact_linalg.hpp"
#include "sympleq/fiber_poly.hpp"

namespace sympleq {

// Symbol fields are FiberPoly<Polynomial>: fiber-homogeneous polynomials whose
// coefficients are polynomials in the same number of base coordinates.

inline SymTensorField field_constant(const HomogeneousPoly& P) {
    SymTensorField f(P.dim(), P.degree());
    for (const auto& [m, c] : P.terms()) f.add_term(m, Polynomial::constant(c, P.dim()));
    return f;
}

inline HomogeneousPoly field_eval_base(const SymTensorField& T, const std::vector<Rat>& point) {
    HomogeneousPoly p(T.dim(), T.degree());
    for (const auto& [m, c] : T.terms()) p.add_term(m, c.eval(point));
    return p;
}

inline NumericPoly field_eval_base_numeric(const SymTensorField& T, const std::vector<double>& point) {
    NumericPoly p(T.dim(), T.degree());
    for (const auto& [m, c] : T.terms()) p.add_term(m, c.eval_double(point));
    return p;
}

inline SymTensorField field_base_partial(const SymTensorField& T, std::size_t i) {
    SymTensorField r(T.dim(), T.degree());
    for (const auto& [m, c] : T.terms()) r.add_term(m, c.partial(i));
    return r;
}

inline SymTensorField field_scale(const SymTensorField& T, const Polynomial& s) {
    SymTensorField r(T.dim(), T.degree());
    for (const auto& [m, c] : T.terms()) r.add_term(m, c * s);
    return r;
}

// Fiber substitution xi -> M xi with an exact constant matrix.
inline SymTensorField field_substitute_fiber(const SymTensorField& T, const Mat<Rat>& M) {
    SymTensorField r(T.dim(), T.degree());
    for (const auto& [m, c] : T.terms()) {
        HomogeneousPoly expanded =
            substitute_linear(HomogeneousPoly::monomial(T.dim(), m, Rat(1)), M);
        for (const auto& [m2, c2] : expanded.terms()) r.add_term(m2, c.scaled(c2));
    }
    return r;
}

inline SymTensorField field_substitute_base_affine(const SymTensorField& T, const Mat<Rat>& A,
                                                   const std::vector<Rat>& b) {
    SymTensorField r(T.dim(), T.degree());
    for (const auto& [m, c] : T.terms()) r.add_term(m, c.promoted(T.dim()).substitute_affine(A, b));
    return r;
}

// Transport of a contravariant symbol field under the affine point map
// u = L x + c: sigma'(u, xi) = sigma(L^{-1}(u - c), L^T xi).
inline SymTensorField transport_symbol_field(const SymTensorField& T, const Mat<Rat>& L,
                                             const std::vector<Rat>& c) {
    Mat<Rat> Linv = invert_exact(L);
    std::vector<Rat> b(T.dim(), Rat(0));
    for (std::size_t i = 0; i < T.dim(); ++i) {
        for (std::size_t j = 0; j < T.dim(); ++j) b[i] -= Linv[i][j] * c[j];
    }
    SymTensorField fiber_done = field_substitute_fiber(T, mat_transpose(L));
    return field_substitute_base_affine(fiber_done, Linv, b);
}

}  // namespace sympleq
