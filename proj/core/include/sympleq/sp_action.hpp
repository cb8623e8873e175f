#pragma once

#include <string>
#include <vector>

#include "sympleq/exact_linalg.hpp"
#include "sympleq/fiber_poly.hpp"
#include "sympleq/linear_map.hpp"
#include "sympleq/multi_index.hpp"

namespace sympleq {

// A first-order derivation with linear coefficients, X = sum C[a][b] xi_b d/dxi_a,
// realized by its coefficient matrix C. The sp(2n) basis fields are
//   b+_{ij} = y_i d/dx_j + y_j d/dx_i,
//   b-_{ij} = -x_i d/dy_j - x_j d/dy_i,
//   c_{ij}  = x_i d/dx_j - y_j d/dy_i,
// in coordinates (x_1..x_n, y_1..y_n).
struct SpGenerator {
    std::string label;
    Mat<Rat> field;  // derivation coefficient matrix C
};

inline std::vector<SpGenerator> sp_basis(std::size_t n) {
    std::size_t d = 2 * n;
    std::vector<SpGenerator> gens;
    gens.reserve(n * (2 * n + 1));
    auto x = [&](std::size_t i) { return i; };
    auto y = [&](std::size_t i) { return n + i; };
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
            Mat<Rat> C = mat_zero<Rat>(d, d);
            C[x(j)][y(i)] += 1;
            C[x(i)][y(j)] += 1;
            gens.push_back({"b+" + std::to_string(i + 1) + std::to_string(j + 1), std::move(C)});
        }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
            Mat<Rat> C = mat_zero<Rat>(d, d);
            C[y(j)][x(i)] += -1;
            C[y(i)][x(j)] += -1;
            gens.push_back({"b-" + std::to_string(i + 1) + std::to_string(j + 1), std::move(C)});
        }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            Mat<Rat> C = mat_zero<Rat>(d, d);
            C[x(j)][x(i)] += 1;
            C[y(i)][y(j)] += -1;
            gens.push_back({"c" + std::to_string(i + 1) + std::to_string(j + 1), std::move(C)});
        }
    return gens;
}

// Infinitesimal left action of a matrix M on polynomials:
//   rho(M)P = d/dt|_0 P(exp(-tM) xi) = -sum M[a][b] xi_b d/dxi_a P.
template <class R>
FiberPoly<R> rho_apply(const Mat<Rat>& M, const FiberPoly<R>& P) {
    std::size_t d = M.size();
    Mat<Rat> C = mat_zero<Rat>(d, d);
    for (std::size_t a = 0; a < d; ++a)
        for (std::size_t b = 0; b < d; ++b) C[a][b] = -M[a][b];
    return derivation_apply(C, P);
}

// Matrix in the exp chart whose rho-action equals the generator field.
inline Mat<Rat> chart_matrix(const SpGenerator& g) {
    Mat<Rat> M = g.field;
    for (auto& row : M)
        for (auto& v : row) v = -v;
    return M;
}

// Coordinate Hamiltonian derivation of a quadric (unscaled):
//   X_Q = sum_i (dQ/dy_i d/dx_i - dQ/dx_i d/dy_i).
inline Mat<Rat> hamiltonian_field(const HomogeneousPoly& Q2) {
    if (Q2.degree() != 2) throw std::invalid_argument("hamiltonian derivation requires a degree-2 polynomial");
    if (Q2.dim() % 2 != 0) throw std::invalid_argument("hamiltonian derivation requires even dimension");
    std::size_t n = Q2.dim() / 2, d = Q2.dim();
    Mat<Rat> C = mat_zero<Rat>(d, d);
    for (std::size_t i = 0; i < n; ++i) {
        HomogeneousPoly dy = Q2.partial(n + i);  // linear
        HomogeneousPoly dx = Q2.partial(i);
        for (std::size_t b = 0; b < d; ++b) {
            C[i][b] += dy.coeff(MultiIndex::unit(d, b));
            C[n + i][b] -= dx.coeff(MultiIndex::unit(d, b));
        }
    }
    return C;
}

// Matrix of the derivation X = sum C[a][b] xi_b d/dxi_a on S^q in the
// graded-lex monomial basis: column j holds the expansion of X(basis[j]).
inline Mat<Rat> derivation_matrix_on_degree(const Mat<Rat>& C, unsigned q) {
    std::size_t d = C.size();
    std::vector<MultiIndex> basis = monomial_basis(d, q);
    std::map<MultiIndex, std::size_t, GrlexLess> pos;
    for (std::size_t i = 0; i < basis.size(); ++i) pos.emplace(basis[i], i);
    Mat<Rat> M = mat_zero<Rat>(basis.size(), basis.size());
    for (std::size_t j = 0; j < basis.size(); ++j) {
        HomogeneousPoly img =
            derivation_apply(C, HomogeneousPoly::monomial(d, basis[j], Rat(1)));
        for (const auto& [m, c] : img.terms()) M[pos.at(m)][j] = c;
    }
    return M;
}

// Columns are the generator-field images of P expanded in the monomial basis
// of its degree; the rank is the dimension of the infinitesimal sp-orbit.
inline Mat<Rat> orbit_span_matrix(const HomogeneousPoly& P) {
    if (P.dim() % 2 != 0) throw std::invalid_argument("sp orbit requires even dimension");
    std::size_t n = P.dim() / 2;
    std::vector<MultiIndex> basis = monomial_basis(P.dim(), P.degree());
    std::map<MultiIndex, std::size_t, GrlexLess> pos;
    for (std::size_t i = 0; i < basis.size(); ++i) pos.emplace(basis[i], i);
    std::vector<SpGenerator> gens = sp_basis(n);
    Mat<Rat> M = mat_zero<Rat>(basis.size(), gens.size());
    for (std::size_t j = 0; j < gens.size(); ++j) {
        HomogeneousPoly img = derivation_apply(gens[j].field, P);
        for (const auto& [m, c] : img.terms()) M[pos.at(m)][j] = c;
    }
    return M;
}

inline std::size_t sp_orbit_dimension(const HomogeneousPoly& P) {
    if (P.is_zero()) return 0;
    return rank_exact(orbit_span_matrix(P));
}

}  // namespace sympleq
