#pragma once

#include <stdexcept>
#include <vector>

#include "sympleq/exact_linalg.hpp"
#include "sympleq/fiber_poly.hpp"
#include "sympleq/rational.hpp"

namespace sympleq {

struct SingularMap : std::domain_error {
    using std::domain_error::domain_error;
};

// Canonical symplectic form matrix in coordinates (x_1..x_n, y_1..y_n):
// Omega(e_{x_i}, e_{y_i}) = 1.
inline Mat<Rat> symplectic_form_matrix(std::size_t n) {
    Mat<Rat> J = mat_zero<Rat>(2 * n, 2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        J[i][n + i] = 1;
        J[n + i][i] = -1;
    }
    return J;
}

// Exact invertible linear change of fiber variables.
class LinearMap {
public:
    explicit LinearMap(Mat<Rat> m) : m_(std::move(m)) {
        if (m_.empty()) throw std::invalid_argument("empty matrix");
        for (const auto& row : m_)
            if (row.size() != m_.size()) throw std::invalid_argument("matrix must be square");
    }

    static LinearMap identity(std::size_t d) { return LinearMap(rat_identity(d)); }

    std::size_t dim() const { return m_.size(); }
    const Mat<Rat>& matrix() const { return m_; }
    Rat det() const { return det_exact(m_); }

    LinearMap inverse() const {
        try {
            return LinearMap(invert_exact(m_));
        } catch (const std::domain_error&) {
            throw SingularMap("linear map is singular");
        }
    }

    LinearMap operator*(const LinearMap& o) const { return LinearMap(mat_mul(m_, o.m_)); }

    bool is_symplectic() const {
        std::size_t d = dim();
        if (d % 2 != 0) return false;
        Mat<Rat> J = symplectic_form_matrix(d / 2);
        Mat<Rat> lhs = mat_mul(mat_transpose(m_), mat_mul(J, m_));
        return lhs == J;
    }

private:
    Mat<Rat> m_;
};

// Left action (g.P)(xi) = P(g^{-1} xi), so (gh).P = g.(h.P).
inline HomogeneousPoly act(const LinearMap& g, const HomogeneousPoly& P) {
    if (g.dim() != P.dim()) throw std::invalid_argument("group element dimension mismatch");
    return substitute_linear(P, g.inverse().matrix());
}

// Variant for an element given by its inverse (avoids a second inversion).
inline HomogeneousPoly act_by_inverse(const Mat<Rat>& g_inv, const HomogeneousPoly& P) {
    return substitute_linear(P, g_inv);
}

}  // namespace sympleq
