#pragma once

#include <functional>
#include <stdexcept>
#include <vector>

#include "sympleq/base_poly.hpp"
#include "sympleq/exact_linalg.hpp"
#include "sympleq/tensor_field.hpp"

namespace sympleq {

// Affine connection in the cotangent bundle as Christoffel data with
// polynomial entries: gamma(i)[k][j] = Gamma^k_{ij}, with the convention
// (nabla theta)_{ij} = d_i theta_j - Gamma^k_{ij} theta_k on 1-forms.
class Connection {
public:
    explicit Connection(std::size_t dim)
        : dim_(dim), gamma_(dim, mat_zero<Polynomial>(dim, dim)) {}

    static Connection flat(std::size_t dim) { return Connection(dim); }

    std::size_t dim() const { return dim_; }
    const Mat<Polynomial>& gamma(std::size_t i) const { return gamma_.at(i); }

    void set_gamma(std::size_t i, std::size_t k, std::size_t j, const Polynomial& v) {
        gamma_.at(i).at(k).at(j) = v.is_zero() ? Polynomial(dim_) : v.promoted(dim_);
    }

    bool is_flat() const {
        for (const auto& gi : gamma_)
            for (const auto& row : gi)
                for (const auto& v : row)
                    if (!v.is_zero()) return false;
        return true;
    }

    bool operator==(const Connection& o) const { return dim_ == o.dim_ && gamma_ == o.gamma_; }

private:
    std::size_t dim_;
    std::vector<Mat<Polynomial>> gamma_;
};

// nabla_i on covariant symmetric tensors in the polynomial representation.
inline SymTensorField cov_deriv_covariant(const Connection& conn, const SymTensorField& T,
                                          std::size_t i) {
    return field_base_partial(T, i) - derivation_apply(conn.gamma(i), T);
}

// nabla_i on contravariant symmetric tensors (symbols).
inline SymTensorField cov_deriv_contravariant(const Connection& conn, const SymTensorField& S,
                                              std::size_t i) {
    return field_base_partial(S, i) + derivation_apply(mat_transpose(conn.gamma(i)), S);
}

// Symmetrized covariant differential d_nabla^s: degree m covariant tensors to
// degree m+1; the degree-0 case is the plain differential.
inline SymTensorField sym_cov_derivative(const SymTensorField& T, const Connection& conn) {
    std::size_t d = conn.dim();
    SymTensorField out(d, T.degree() + 1);
    for (std::size_t i = 0; i < d; ++i) {
        SymTensorField di = cov_deriv_covariant(conn, T, i);
        if (di.is_zero()) continue;
        out = out + SymTensorField::monomial(d, MultiIndex::unit(d, i), Polynomial::scalar(Rat(1))) * di;
    }
    return out;
}

// T^k_{ij} = Gamma^k_{ij} - Gamma^k_{ji}; result indexed [k][i][j].
inline std::vector<Mat<Polynomial>> torsion(const Connection& conn) {
    std::size_t d = conn.dim();
    std::vector<Mat<Polynomial>> t(d, mat_zero<Polynomial>(d, d));
    for (std::size_t k = 0; k < d; ++k)
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j)
                t[k][i][j] = conn.gamma(i)[k][j] - conn.gamma(j)[k][i];
    return t;
}

// R^l_{kij} = d_i Gamma^l_{jk} - d_j Gamma^l_{ik}
//           + Gamma^l_{im} Gamma^m_{jk} - Gamma^l_{jm} Gamma^m_{ik},
// indexed [l][k][i][j].
inline std::vector<std::vector<Mat<Polynomial>>> curvature(const Connection& conn) {
    std::size_t d = conn.dim();
    std::vector<std::vector<Mat<Polynomial>>> R(
        d, std::vector<Mat<Polynomial>>(d, mat_zero<Polynomial>(d, d)));
    for (std::size_t l = 0; l < d; ++l)
        for (std::size_t k = 0; k < d; ++k)
            for (std::size_t i = 0; i < d; ++i)
                for (std::size_t j = 0; j < d; ++j) {
                    Polynomial v = conn.gamma(j)[l][k].partial(i) - conn.gamma(i)[l][k].partial(j);
                    for (std::size_t m = 0; m < d; ++m)
                        v = v + conn.gamma(i)[l][m] * conn.gamma(j)[m][k] -
                            conn.gamma(j)[l][m] * conn.gamma(i)[m][k];
                    R[l][k][i][j] = v;
                }
    return R;
}

inline bool tensor_is_zero(const std::vector<Mat<Polynomial>>& t) {
    for (const auto& m : t)
        for (const auto& row : m)
            for (const auto& v : row)
                if (!v.is_zero()) return false;
    return true;
}

inline bool tensor_is_zero(const std::vector<std::vector<Mat<Polynomial>>>& t) {
    for (const auto& m : t)
        if (!tensor_is_zero(m)) return false;
    return true;
}

// Transport of a connection under the affine point map u = L x + c (no
// second-derivative term since the map is affine):
//   Gamma'^k_{ij}(u) = L^k_c (L^{-1})^a_i (L^{-1})^b_j Gamma^c_{ab}(L^{-1}(u-c)).
inline Connection transport_connection_affine(const Connection& conn, const Mat<Rat>& L,
                                              const std::vector<Rat>& c) {
    std::size_t d = conn.dim();
    Mat<Rat> Linv = invert_exact(L);
    std::vector<Rat> b(d, Rat(0));
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) b[i] -= Linv[i][j] * c[j];
    Connection out(d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t k = 0; k < d; ++k)
            for (std::size_t j = 0; j < d; ++j) {
                Polynomial v(d);
                for (std::size_t a = 0; a < d; ++a)
                    for (std::size_t bb = 0; bb < d; ++bb)
                        for (std::size_t cc = 0; cc < d; ++cc) {
                            const Polynomial& g = conn.gamma(a)[cc][bb];
                            if (g.is_zero()) continue;
                            Rat w = L[k][cc] * Linv[a][i] * Linv[bb][j];
                            if (rat_is_zero(w)) continue;
                            v = v + g.promoted(d).substitute_affine(Linv, b).scaled(w);
                        }
                out.set_gamma(i, k, j, v);
            }
    return out;
}

struct DegenerateSymbol : std::domain_error {
    using std::domain_error::domain_error;
};

// Coefficient matrix H^{ij} of a fiber-quadratic symbol sigma2 = H^{ij} xi_i xi_j.
inline Mat<Polynomial> quadratic_symbol_matrix(const SymTensorField& s2) {
    if (s2.degree() != 2) throw std::invalid_argument("quadratic symbol expected");
    std::size_t d = s2.dim();
    Mat<Polynomial> H = mat_zero<Polynomial>(d, d);
    for (std::size_t i = 0; i < d; ++i) {
        H[i][i] = s2.coeff(MultiIndex::unit(d, i) + MultiIndex::unit(d, i)).promoted(d);
        for (std::size_t j = i + 1; j < d; ++j) {
            Polynomial half = s2.coeff(MultiIndex::unit(d, i) + MultiIndex::unit(d, j)).scaled(Rat(1, 2));
            H[i][j] = half.promoted(d);
            H[j][i] = H[i][j];
        }
    }
    return H;
}

// Levi-Civita connection of the (pseudo-)metric inverse to a nondegenerate
// fiber-quadratic symbol, evaluated exactly at one base point.
inline Connection levi_civita_at_point(const SymTensorField& s2, const std::vector<Rat>& point) {
    std::size_t d = s2.dim();
    Mat<Polynomial> H = quadratic_symbol_matrix(s2);
    Mat<Rat> Hv = mat_zero<Rat>(d, d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) Hv[i][j] = H[i][j].eval(point);
    Mat<Rat> g;
    try {
        g = invert_exact(Hv);
    } catch (const std::domain_error&) {
        throw DegenerateSymbol("second-order symbol is degenerate at the evaluation point");
    }
    // dg = -g (dH) g per direction.
    std::vector<Mat<Rat>> dg(d);
    for (std::size_t m = 0; m < d; ++m) {
        Mat<Rat> dH = mat_zero<Rat>(d, d);
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j) dH[i][j] = H[i][j].partial(m).eval(point);
        Mat<Rat> tmp = mat_mul(g, mat_mul(dH, g));
        dg[m] = mat_zero<Rat>(d, d);
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j) dg[m][i][j] = -tmp[i][j];
    }
    Connection out(d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j)
            for (std::size_t k = 0; k < d; ++k) {
                Rat v(0);
                for (std::size_t l = 0; l < d; ++l)
                    v += Hv[k][l] * (dg[i][j][l] + dg[j][i][l] - dg[l][i][j]);
                v /= 2;
                if (!rat_is_zero(v)) out.set_gamma(i, k, j, Polynomial::constant(v, d));
            }
    return out;
}

// Symbolic Levi-Civita: available when det H is a nonzero constant, so the
// inverse metric has polynomial entries.
inline Connection levi_civita_symbolic(const SymTensorField& s2) {
    std::size_t d = s2.dim();
    Mat<Polynomial> H = quadratic_symbol_matrix(s2);
    // det and adjugate by cofactor expansion; desk-scale dimensions only.
    std::function<Polynomial(const Mat<Polynomial>&)> det = [&](const Mat<Polynomial>& m) {
        std::size_t k = m.size();
        if (k == 1) return m[0][0];
        Polynomial s(d);
        for (std::size_t c = 0; c < k; ++c) {
            Mat<Polynomial> sub(k - 1, std::vector<Polynomial>(k - 1));
            for (std::size_t r = 1; r < k; ++r) {
                std::size_t cc = 0;
                for (std::size_t c2 = 0; c2 < k; ++c2) {
                    if (c2 == c) continue;
                    sub[r - 1][cc++] = m[r][c2];
                }
            }
            Polynomial term = m[0][c] * det(sub);
            s = (c % 2 == 0) ? s + term : s - term;
        }
        return s;
    };
    Polynomial dH = det(H);
    if (dH.is_zero()) throw DegenerateSymbol("second-order symbol has identically zero determinant");
    if (dH.degree() != 0)
        throw DegenerateSymbol("symbolic Levi-Civita needs constant determinant; use pointwise mode");
    Rat det_c = dH.eval(std::vector<Rat>(d, Rat(0)));
    // g = adj(H) / det.
    Mat<Polynomial> g = mat_zero<Polynomial>(d, d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) {
            Mat<Polynomial> sub(d - 1, std::vector<Polynomial>(d - 1));
            for (std::size_t r = 0, rr = 0; r < d; ++r) {
                if (r == j) continue;
                for (std::size_t c = 0, cc = 0; c < d; ++c) {
                    if (c == i) continue;
                    sub[rr][cc++] = H[r][c];
                }
                ++rr;
            }
            Polynomial cof = d == 1 ? Polynomial::constant(Rat(1), d) : det(sub);
            if ((i + j) % 2 == 1) cof = cof.negated();
            g[i][j] = cof.scaled(Rat(1) / det_c);
        }
    Connection out(d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j)
            for (std::size_t k = 0; k < d; ++k) {
                Polynomial v(d);
                for (std::size_t l = 0; l < d; ++l)
                    v = v + H[k][l] * (g[j][l].partial(i) + g[i][l].partial(j) - g[i][j].partial(l));
                out.set_gamma(i, k, j, v.scaled(Rat(1, 2)));
            }
    return out;
}

}  // namespace sympleq
