#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "sympleq/rational.hpp"

namespace sympleq {

template <class R>
using Mat = std::vector<std::vector<R>>;

template <class R>
Mat<R> mat_zero(std::size_t rows, std::size_t cols) {
    return Mat<R>(rows, std::vector<R>(cols, R()));
}

inline Mat<Rat> rat_identity(std::size_t n) {
    Mat<Rat> m = mat_zero<Rat>(n, n);
    for (std::size_t i = 0; i < n; ++i) m[i][i] = 1;
    return m;
}

template <class R>
Mat<R> mat_transpose(const Mat<R>& a) {
    if (a.empty()) return a;
    Mat<R> t(a[0].size(), std::vector<R>(a.size()));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < a[i].size(); ++j) t[j][i] = a[i][j];
    return t;
}

template <class R>
Mat<R> mat_mul(const Mat<R>& a, const Mat<R>& b) {
    std::size_t n = a.size(), k = b.size(), m = b.empty() ? 0 : b[0].size();
    Mat<R> c(n, std::vector<R>(m, R()));
    for (std::size_t i = 0; i < n; ++i) {
        if (a[i].size() != k) throw std::invalid_argument("matrix product shape mismatch");
        for (std::size_t p = 0; p < k; ++p) {
            const R& apk = a[i][p];
            for (std::size_t j = 0; j < m; ++j) c[i][j] = c[i][j] + apk * b[p][j];
        }
    }
    return c;
}

template <class R>
Mat<R> mat_add(const Mat<R>& a, const Mat<R>& b) {
    Mat<R> c = a;
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < a[i].size(); ++j) c[i][j] = a[i][j] + b[i][j];
    return c;
}

template <class R>
R mat_trace(const Mat<R>& a) {
    R t = R();
    for (std::size_t i = 0; i < a.size(); ++i) t = t + a[i][i];
    return t;
}

// Trace of the k-th power, k >= 1.
template <class R>
R mat_trace_power(const Mat<R>& a, unsigned k) {
    if (k == 0) throw std::invalid_argument("trace power requires k >= 1");
    Mat<R> p = a;
    for (unsigned i = 1; i < k; ++i) p = mat_mul(p, a);
    return mat_trace(p);
}

// Double matrices are powered in extended precision: the traces cancel
// heavily and plain doubles lose too much under conjugated inputs.
inline double mat_trace_power(const Mat<double>& a, unsigned k) {
    if (k == 0) throw std::invalid_argument("trace power requires k >= 1");
    std::size_t n = a.size();
    using LD = long double;
    std::vector<std::vector<LD>> base(n, std::vector<LD>(n)), p;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) base[i][j] = a[i][j];
    p = base;
    for (unsigned s = 1; s < k; ++s) {
        std::vector<std::vector<LD>> q(n, std::vector<LD>(n, LD(0)));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t m = 0; m < n; ++m) {
                LD pim = p[i][m];
                if (pim == 0) continue;
                for (std::size_t j = 0; j < n; ++j) q[i][j] += pim * base[m][j];
            }
        p = std::move(q);
    }
    LD t = 0;
    for (std::size_t i = 0; i < n; ++i) t += p[i][i];
    return static_cast<double>(t);
}

// Fraction-free rank over the rationals: rows are scaled to integers and
// reduced by the Bareiss scheme, so no pivot decision ever touches a float.
inline std::size_t rank_exact(Mat<Rat> m) {
    std::size_t rows = m.size();
    if (rows == 0) return 0;
    std::size_t cols = m[0].size();
    Mat<Int> a(rows, std::vector<Int>(cols));
    for (std::size_t i = 0; i < rows; ++i) {
        Int l = 1;
        for (std::size_t j = 0; j < cols; ++j) l = lcm(l, Int(m[i][j].get_den()));
        for (std::size_t j = 0; j < cols; ++j) {
            Rat v = m[i][j] * Rat(l);
            a[i][j] = v.get_num();
        }
    }
    std::size_t rank = 0;
    Int prev = 1;
    for (std::size_t col = 0; col < cols && rank < rows; ++col) {
        std::size_t piv = rank;
        while (piv < rows && a[piv][col] == 0) ++piv;
        if (piv == rows) continue;
        std::swap(a[piv], a[rank]);
        for (std::size_t i = rank + 1; i < rows; ++i) {
            for (std::size_t j = col + 1; j < cols; ++j)
                a[i][j] = (a[rank][col] * a[i][j] - a[i][col] * a[rank][j]) / prev;
            a[i][col] = 0;
        }
        prev = a[rank][col];
        ++rank;
    }
    return rank;
}

inline Rat det_exact(Mat<Rat> a) {
    std::size_t n = a.size();
    Rat det(1);
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        while (piv < n && rat_is_zero(a[piv][col])) ++piv;
        if (piv == n) return Rat(0);
        if (piv != col) {
            std::swap(a[piv], a[col]);
            det = -det;
        }
        det *= a[col][col];
        Rat inv = Rat(1) / a[col][col];
        for (std::size_t i = col + 1; i < n; ++i) {
            if (rat_is_zero(a[i][col])) continue;
            Rat f = a[i][col] * inv;
            for (std::size_t j = col; j < n; ++j) a[i][j] -= f * a[col][j];
        }
    }
    return det;
}

struct LinearSolveResult {
    bool consistent = false;
    std::vector<Rat> solution;   // a particular solution when consistent
    std::size_t kernel_dim = 0;  // dimension of the solution space of Ax = 0
};

// Exact Gauss-Jordan solve of the (possibly overdetermined) system A x = b.
inline LinearSolveResult solve_exact(Mat<Rat> a, std::vector<Rat> b) {
    std::size_t rows = a.size();
    std::size_t cols = rows == 0 ? 0 : a[0].size();
    if (b.size() != rows) throw std::invalid_argument("rhs length mismatch");
    std::vector<std::size_t> pivot_col;
    std::size_t r = 0;
    for (std::size_t col = 0; col < cols && r < rows; ++col) {
        std::size_t piv = r;
        while (piv < rows && rat_is_zero(a[piv][col])) ++piv;
        if (piv == rows) continue;
        std::swap(a[piv], a[r]);
        std::swap(b[piv], b[r]);
        Rat inv = Rat(1) / a[r][col];
        for (std::size_t j = col; j < cols; ++j) a[r][j] *= inv;
        b[r] *= inv;
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == r || rat_is_zero(a[i][col])) continue;
            Rat f = a[i][col];
            for (std::size_t j = col; j < cols; ++j) a[i][j] -= f * a[r][j];
            b[i] -= f * b[r];
        }
        pivot_col.push_back(col);
        ++r;
    }
    LinearSolveResult res;
    res.kernel_dim = cols - pivot_col.size();
    for (std::size_t i = r; i < rows; ++i)
        if (!rat_is_zero(b[i])) return res;  // inconsistent
    res.consistent = true;
    res.solution.assign(cols, Rat(0));
    for (std::size_t i = 0; i < pivot_col.size(); ++i) res.solution[pivot_col[i]] = b[i];
    return res;
}

inline Mat<Rat> invert_exact(const Mat<Rat>& m) {
    std::size_t n = m.size();
    Mat<Rat> a = m;
    Mat<Rat> inv = rat_identity(n);
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        while (piv < n && rat_is_zero(a[piv][col])) ++piv;
        if (piv == n) throw std::domain_error("singular matrix");
        std::swap(a[piv], a[col]);
        std::swap(inv[piv], inv[col]);
        Rat s = Rat(1) / a[col][col];
        for (std::size_t j = 0; j < n; ++j) {
            a[col][j] *= s;
            inv[col][j] *= s;
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (i == col || rat_is_zero(a[i][col])) continue;
            Rat f = a[i][col];
            for (std::size_t j = 0; j < n; ++j) {
                a[i][j] -= f * a[col][j];
                inv[i][j] -= f * inv[col][j];
            }
        }
    }
    return inv;
}

}  // namespace sympleq
