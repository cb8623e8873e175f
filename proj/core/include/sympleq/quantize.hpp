#pragma once

#include <map>
#include <vector>

#include "sympleq/connection.hpp"
#include "sympleq/diff_operator.hpp"
#include "sympleq/multi_index.hpp"
#include "sympleq/tensor_field.hpp"

namespace sympleq {

// (d_nabla^s)^k f written out on the jet of f: a map beta -> W_beta where
// (d_nabla^s)^k f = sum_beta (d^beta f) W_beta and each W_beta is a covariant
// degree-k tensor in the polynomial representation.
using JetCoefficients = std::map<MultiIndex, SymTensorField, GrlexLess>;

inline JetCoefficients sym_cov_derivative_power(const Connection& conn, unsigned k) {
    std::size_t d = conn.dim();
    JetCoefficients cur;
    cur.emplace(MultiIndex(d),
                SymTensorField::monomial(d, MultiIndex(d), Polynomial::constant(Rat(1), d)));
    for (unsigned step = 0; step < k; ++step) {
        JetCoefficients next;
        auto add = [&](const MultiIndex& beta, const SymTensorField& piece) {
            if (piece.is_zero()) return;
            auto it = next.find(beta);
            if (it == next.end())
                next.emplace(beta, piece);
            else
                it->second = it->second + piece;
        };
        for (const auto& [beta, W] : cur) {
            for (std::size_t i = 0; i < d; ++i) {
                SymTensorField zi =
                    SymTensorField::monomial(d, MultiIndex::unit(d, i), Polynomial::scalar(Rat(1)));
                // d_i of (d^beta f) W = d^{beta+e_i} f W + d^beta f (d_i W),
                // minus the Christoffel correction on W.
                add(beta + MultiIndex::unit(d, i), zi * W);
                SymTensorField corr = field_base_partial(W, i) - derivation_apply(conn.gamma(i), W);
                add(beta, zi * corr);
            }
        }
        cur = std::move(next);
    }
    return cur;
}

// Q(H)(f) = (1/k!) <H, (d_nabla^s)^k f> with the pairing that makes the flat
// contracts hold: <xi^alpha, zeta^beta> = alpha! [alpha = beta].
inline DiffOperator quantize(const SymTensorField& H, const Connection& conn) {
    if (H.dim() != conn.dim()) throw std::invalid_argument("symbol/connection dimension mismatch");
    std::size_t d = H.dim();
    unsigned k = H.degree();
    JetCoefficients W = sym_cov_derivative_power(conn, k);
    Int kfact = factorial(k);
    DiffOperator A(d, k);
    for (const auto& [beta, piece] : W) {
        Polynomial b(d);
        for (const auto& [alpha, w] : piece.terms()) {
            Polynomial h = H.coeff(alpha);
            if (h.is_zero()) continue;
            b = b + (h * w).scaled(Rat(alpha.factorial_product()) / Rat(kfact));
        }
        if (!b.is_zero()) A.add_coeff(beta, b);
    }
    return A;
}

// Iterated peeling A -> [sigma_k, ..., sigma_0]; reconstruction
// sum_i quantize(sigma_i, conn) returns A exactly.
inline std::vector<SymTensorField> total_symbol(const DiffOperator& A, const Connection& conn) {
    std::vector<SymTensorField> out;
    DiffOperator rest = A;
    for (int m = static_cast<int>(A.order()); m >= 0; --m) {
        SymTensorField s = rest.symbol_at_degree(static_cast<unsigned>(m));
        out.push_back(s);
        if (!s.is_zero()) rest = rest - quantize(s, conn);
        for (const auto& [alpha, c] : rest.coeffs())
            if (alpha.degree() >= static_cast<unsigned>(m) && !c.is_zero())
                throw std::logic_error("total symbol peeling failed to cancel the top order");
    }
    return out;
}

inline DiffOperator quantize_sum(const std::vector<SymTensorField>& sigmas, const Connection& conn) {
    DiffOperator A(conn.dim(), sigmas.empty() ? 0 : sigmas.front().degree());
    for (const auto& s : sigmas)
        if (!s.is_zero()) A = A + quantize(s, conn);
    return A;
}

}  // namespace sympleq
