#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "sympleq/exact_linalg.hpp"
#include "sympleq/fiber_poly.hpp"

namespace sympleq {

using DMat = std::vector<std::vector<double>>;

inline DMat dmat_zero(std::size_t r, std::size_t c) { return DMat(r, std::vector<double>(c, 0.0)); }

inline DMat dmat_identity(std::size_t n) {
    DMat m = dmat_zero(n, n);
    for (std::size_t i = 0; i < n; ++i) m[i][i] = 1.0;
    return m;
}

inline DMat dmat_from_rat(const Mat<Rat>& a) {
    DMat m(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        m[i].resize(a[i].size());
        for (std::size_t j = 0; j < a[i].size(); ++j) m[i][j] = rat_to_double(a[i][j]);
    }
    return m;
}

inline DMat dmat_mul(const DMat& a, const DMat& b) {
    std::size_t n = a.size(), k = b.size(), m = b.empty() ? 0 : b[0].size();
    DMat c = dmat_zero(n, m);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t p = 0; p < k; ++p) {
            double apk = a[i][p];
            if (apk == 0.0) continue;
            for (std::size_t j = 0; j < m; ++j) c[i][j] += apk * b[p][j];
        }
    return c;
}

inline DMat dmat_scale(const DMat& a, double s) {
    DMat c = a;
    for (auto& row : c)
        for (auto& v : row) v *= s;
    return c;
}

inline DMat dmat_add(const DMat& a, const DMat& b) {
    DMat c = a;
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < a[i].size(); ++j) c[i][j] += b[i][j];
    return c;
}

inline DMat dmat_transpose(const DMat& a) {
    if (a.empty()) return a;
    DMat t = dmat_zero(a[0].size(), a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < a[i].size(); ++j) t[j][i] = a[i][j];
    return t;
}

inline double dmat_max_abs(const DMat& a) {
    double m = 0;
    for (const auto& row : a)
        for (double v : row) m = std::max(m, std::fabs(v));
    return m;
}

inline double dmat_frobenius(const DMat& a) {
    double s = 0;
    for (const auto& row : a)
        for (double v : row) s += v * v;
    return std::sqrt(s);
}

// Gaussian elimination with partial pivoting.
inline std::vector<double> dmat_solve(DMat a, std::vector<double> b) {
    std::size_t n = a.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t i = col + 1; i < n; ++i)
            if (std::fabs(a[i][col]) > std::fabs(a[piv][col])) piv = i;
        if (std::fabs(a[piv][col]) < 1e-300) throw std::domain_error("singular linear system");
        std::swap(a[piv], a[col]);
        std::swap(b[piv], b[col]);
        for (std::size_t i = col + 1; i < n; ++i) {
            double f = a[i][col] / a[col][col];
            if (f == 0.0) continue;
            for (std::size_t j = col; j < n; ++j) a[i][j] -= f * a[col][j];
            b[i] -= f * b[col];
        }
    }
    std::vector<double> x(n, 0.0);
    for (std::size_t i = n; i-- > 0;) {
        double s = b[i];
        for (std::size_t j = i + 1; j < n; ++j) s -= a[i][j] * x[j];
        x[i] = s / a[i][i];
    }
    return x;
}

inline DMat dmat_inverse(const DMat& a) {
    std::size_t n = a.size();
    DMat inv = dmat_zero(n, n);
    for (std::size_t c = 0; c < n; ++c) {
        std::vector<double> e(n, 0.0);
        e[c] = 1.0;
        std::vector<double> x = dmat_solve(a, e);
        for (std::size_t i = 0; i < n; ++i) inv[i][c] = x[i];
    }
    return inv;
}

// Matrix exponential by scaling and squaring with a Pade(6) approximant;
// plenty for the 4x4 charts used here.
inline DMat dmat_exp(const DMat& m) {
    std::size_t n = m.size();
    double norm = 0;
    for (const auto& row : m) {
        double s = 0;
        for (double v : row) s += std::fabs(v);
        norm = std::max(norm, s);
    }
    int squarings = 0;
    DMat a = m;
    if (norm > 0.5) {
        squarings = static_cast<int>(std::ceil(std::log2(norm / 0.5)));
        a = dmat_scale(m, std::ldexp(1.0, -squarings));
    }
    // Pade(6): N = sum c_k A^k, D = sum (-1)^k c_k A^k.
    static const double c[] = {1.0, 0.5, 5.0 / 44.0, 1.0 / 66.0, 1.0 / 792.0, 1.0 / 15840.0, 1.0 / 665280.0};
    DMat apow = dmat_identity(n);
    DMat N = dmat_identity(n);
    DMat D = dmat_identity(n);
    for (int k = 1; k <= 6; ++k) {
        apow = dmat_mul(apow, a);
        N = dmat_add(N, dmat_scale(apow, c[k]));
        D = dmat_add(D, dmat_scale(apow, (k % 2 == 0 ? 1.0 : -1.0) * c[k]));
    }
    DMat r = dmat_mul(dmat_inverse(D), N);
    for (int s = 0; s < squarings; ++s) r = dmat_mul(r, r);
    return r;
}

inline NumericPoly numeric_poly(const HomogeneousPoly& p) {
    NumericPoly q(p.dim(), p.degree());
    for (const auto& [m, c] : p.terms()) q.add_term(m, rat_to_double(c));
    return q;
}

// Coefficient-vector l2 norm over the full monomial basis.
inline double coeff_norm(const NumericPoly& p) {
    double s = 0;
    for (const auto& [m, c] : p.terms()) s += c * c;
    return std::sqrt(s);
}

inline double coeff_distance(const NumericPoly& a, const NumericPoly& b) {
    return coeff_norm(a - b);
}

}  // namespace sympleq
