#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "sympleq/connection.hpp"
#include "sympleq/exact_linalg.hpp"
#include "sympleq/sp_action.hpp"
#include "sympleq/tensor_field.hpp"

namespace sympleq {

// d_i sigma is not tangent to the sp-orbit of sigma: the symbol field cannot
// have constant type, no symplectic connection can preserve it.
struct NotConstantType : std::runtime_error {
    explicit NotConstantType(const std::string& what) : std::runtime_error(what) {}
};

// The stabilizer of the symbol is positive-dimensional; a preserving
// connection is not unique (or the orbit is not regular).
struct NonRegular : std::runtime_error {
    explicit NonRegular(const std::string& what) : std::runtime_error(what) {}
};

// The degree-by-degree symbolic solve did not close under the degree cap.
struct WagnerInconclusive : std::runtime_error {
    explicit WagnerInconclusive(const std::string& what) : std::runtime_error(what) {}
};

namespace detail {

// Shared solve: express rhs in the span of the generator-field images of P.
// Returns the sp-basis coordinates of the solution.
struct OrbitSolver {
    std::vector<SpGenerator> gens;
    std::vector<MultiIndex> basis;
    std::map<MultiIndex, std::size_t, GrlexLess> pos;
    Mat<Rat> span;  // columns = generator images of the anchor symbol

    OrbitSolver(const HomogeneousPoly& anchor, const std::string& where) {
        std::size_t d = anchor.dim();
        if (d % 2 != 0) throw std::invalid_argument("Wagner solve requires Darboux coordinates (even dim)");
        gens = sp_basis(d / 2);
        basis = monomial_basis(d, anchor.degree());
        for (std::size_t i = 0; i < basis.size(); ++i) pos.emplace(basis[i], i);
        span = mat_zero<Rat>(basis.size(), gens.size());
        for (std::size_t j = 0; j < gens.size(); ++j) {
            HomogeneousPoly img = derivation_apply(gens[j].field, anchor);
            for (const auto& [m, c] : img.terms()) span[pos.at(m)][j] = c;
        }
        LinearSolveResult probe = solve_exact(span, std::vector<Rat>(basis.size(), Rat(0)));
        if (probe.kernel_dim != 0)
            throw NonRegular("symbol stabilizer has positive dimension " + where +
                             " (kernel dim " + std::to_string(probe.kernel_dim) + ")");
    }

    // Coordinates t with sum_a t_a X_a(anchor) = rhs, or NotConstantType.
    std::vector<Rat> solve(const HomogeneousPoly& rhs, const std::string& where) const {
        std::vector<Rat> b(basis.size(), Rat(0));
        for (const auto& [m, c] : rhs.terms()) b[pos.at(m)] = c;
        LinearSolveResult res = solve_exact(span, b);
        if (!res.consistent)
            throw NotConstantType("derivative of the symbol is not tangent to the sp-orbit " + where);
        return res.solution;
    }

    // The sp chart matrix M = sum_a t_a M_a whose rho-action matches the
    // generator combination.
    Mat<Rat> chart_combination(const std::vector<Rat>& t) const {
        std::size_t d = gens.empty() ? 0 : gens[0].field.size();
        Mat<Rat> M = mat_zero<Rat>(d, d);
        for (std::size_t a = 0; a < gens.size(); ++a) {
            if (rat_is_zero(t[a])) continue;
            for (std::size_t r = 0; r < d; ++r)
                for (std::size_t c = 0; c < d; ++c) M[r][c] -= t[a] * gens[a].field[r][c];
        }
        return M;
    }
};

}  // namespace detail

// Pointwise Wagner solve: the unique G_i in sp(2n) with rho(G_i) sigma = d_i sigma
// at the given base point, returned as Christoffel matrices
// Gamma^k_{ij} = (G_i)_{jk}. Exact at rational points.
inline std::vector<Mat<Rat>> wagner_gamma_at(const SymTensorField& sigma,
                                             const std::vector<Rat>& point) {
    std::size_t d = sigma.dim();
    HomogeneousPoly anchor = field_eval_base(sigma, point);
    std::string where = "at base point (";
    for (std::size_t i = 0; i < point.size(); ++i) where += (i ? "," : "") + rat_str(point[i]);
    where += ")";
    if (anchor.is_zero()) throw NonRegular("symbol vanishes " + where);
    detail::OrbitSolver solver(anchor, where);
    std::vector<Mat<Rat>> gamma(d, mat_zero<Rat>(d, d));
    for (std::size_t i = 0; i < d; ++i) {
        HomogeneousPoly rhs = field_eval_base(field_base_partial(sigma, i), point);
        std::vector<Rat> t = solver.solve(rhs, where);
        Mat<Rat> G = solver.chart_combination(t);
        for (std::size_t j = 0; j < d; ++j)
            for (std::size_t k = 0; k < d; ++k) gamma[i][k][j] = G[j][k];
    }
    return gamma;
}

// Symbolic Wagner solve around the base origin, degree by degree in the base
// variables. Requires the symbol to be regular at the origin; returns the
// unique polynomial connection with nabla sigma = 0 when one exists below the
// degree cap.
inline Connection wagner_connection_symbolic(const SymTensorField& sigma, unsigned degree_cap = 0) {
    std::size_t d = sigma.dim();
    unsigned base_degree = 0;
    for (const auto& [m, c] : sigma.terms()) base_degree = std::max(base_degree, c.degree());
    if (degree_cap == 0) degree_cap = 2 * base_degree + 4;

    std::vector<Rat> origin(d, Rat(0));
    HomogeneousPoly anchor = field_eval_base(sigma, origin);
    if (anchor.is_zero()) throw NonRegular("symbol vanishes at the base origin");
    detail::OrbitSolver solver(anchor, "at the base origin");

    Connection conn(d);
    for (std::size_t i = 0; i < d; ++i) {
        SymTensorField residual = field_base_partial(sigma, i);
        Mat<Polynomial> Gi = mat_zero<Polynomial>(d, d);
        for (unsigned deg = 0; deg <= degree_cap && !residual.is_zero(); ++deg) {
            // Base monomials of this degree present in the residual.
            std::vector<MultiIndex> gammas;
            for (const auto& [fm, c] : residual.terms()) {
                Polynomial cp = c.promoted(d);
                for (const auto& [bm, v] : cp.terms())
                    if (bm.degree() == deg) {
                        bool seen = false;
                        for (const auto& g : gammas) seen = seen || g == bm;
                        if (!seen) gammas.push_back(bm);
                    }
            }
            for (const MultiIndex& g : gammas) {
                HomogeneousPoly rhs(d, sigma.degree());
                for (const auto& [fm, c] : residual.terms()) {
                    Rat v = c.promoted(d).coeff(g);
                    if (!rat_is_zero(v)) rhs.add_term(fm, v);
                }
                if (rhs.is_zero()) continue;
                std::vector<Rat> t = solver.solve(rhs, "at base degree " + std::to_string(deg) +
                                                           " monomial " + g.str());
                Mat<Rat> M = solver.chart_combination(t);
                Polynomial mono(d);
                mono.add_term(g, Rat(1));
                for (std::size_t r = 0; r < d; ++r)
                    for (std::size_t s = 0; s < d; ++s)
                        if (!rat_is_zero(M[r][s])) Gi[r][s] = Gi[r][s] + mono.scaled(M[r][s]);
                // residual -= a^g * rho(M) sigma
                SymTensorField contrib = rho_apply(M, sigma);
                residual = residual - field_scale(contrib, mono);
            }
        }
        if (!residual.is_zero())
            throw WagnerInconclusive("no polynomial connection of base degree <= " +
                                     std::to_string(degree_cap) + " preserves the symbol");
        for (std::size_t j = 0; j < d; ++j)
            for (std::size_t k = 0; k < d; ++k) conn.set_gamma(i, k, j, Gi[j][k]);
    }
    return conn;
}

// nabla sigma for diagnostics and tests.
inline bool preserves_symbol(const Connection& conn, const SymTensorField& sigma) {
    for (std::size_t i = 0; i < conn.dim(); ++i)
        if (!cov_deriv_contravariant(conn, sigma, i).is_zero()) return false;
    return true;
}

}  // namespace sympleq
