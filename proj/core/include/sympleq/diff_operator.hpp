#pragma once

#include <map>
#include <stdexcept>
#include <vector>

#include "sympleq/base_poly.hpp"
#include "sympleq/exact_linalg.hpp"
#include "sympleq/fiber_poly.hpp"
#include "sympleq/multi_index.hpp"
#include "sympleq/tensor_field.hpp"

namespace sympleq {

// Scalar linear differential operator A = sum_{|alpha| <= k} a_alpha d^alpha
// with polynomial coefficients in the base coordinates.
class DiffOperator {
public:
    using CoeffMap = std::map<MultiIndex, Polynomial, GrlexLess>;

    DiffOperator(std::size_t dim, unsigned order) : dim_(dim), order_(order) {}

    std::size_t dim() const { return dim_; }
    unsigned order() const { return order_; }
    const CoeffMap& coeffs() const { return coeffs_; }
    bool is_zero() const { return coeffs_.empty(); }

    void set_coeff(const MultiIndex& alpha, const Polynomial& a) {
        if (alpha.dim() != dim_) throw std::invalid_argument("operator coefficient dimension mismatch");
        if (alpha.degree() > order_)
            throw ValidationError("coefficient index " + alpha.str() + " exceeds declared order " +
                                  std::to_string(order_));
        if (a.is_zero())
            coeffs_.erase(alpha);
        else
            coeffs_[alpha] = a.promoted(dim_);
    }

    void add_coeff(const MultiIndex& alpha, const Polynomial& a) { set_coeff(alpha, coeff(alpha) + a); }

    Polynomial coeff(const MultiIndex& alpha) const {
        auto it = coeffs_.find(alpha);
        return it == coeffs_.end() ? Polynomial(dim_) : it->second;
    }

    unsigned effective_order() const {
        unsigned k = 0;
        for (const auto& [a, c] : coeffs_) k = std::max(k, a.degree());
        return k;
    }

    Polynomial apply(const Polynomial& f) const {
        Polynomial g(dim_);
        Polynomial ff = f.promoted(dim_);
        for (const auto& [alpha, a] : coeffs_) g = g + a * ff.partial_multi(alpha);
        return g;
    }

    // The fiber-degree-m part of the total coefficient data as a tensor field.
    SymTensorField symbol_at_degree(unsigned m) const {
        SymTensorField s(dim_, m);
        for (const auto& [alpha, a] : coeffs_)
            if (alpha.degree() == m) s.add_term(alpha, a);
        return s;
    }

    SymTensorField principal_symbol() const { return symbol_at_degree(order_); }

    DiffOperator operator-(const DiffOperator& o) const {
        if (dim_ != o.dim_) throw std::invalid_argument("operator dimension mismatch");
        DiffOperator r(dim_, std::max(order_, o.order_));
        for (const auto& [a, c] : coeffs_) r.add_coeff(a, c);
        for (const auto& [a, c] : o.coeffs_) r.add_coeff(a, c.negated());
        return r;
    }

    DiffOperator operator+(const DiffOperator& o) const {
        if (dim_ != o.dim_) throw std::invalid_argument("operator dimension mismatch");
        DiffOperator r(dim_, std::max(order_, o.order_));
        for (const auto& [a, c] : coeffs_) r.add_coeff(a, c);
        for (const auto& [a, c] : o.coeffs_) r.add_coeff(a, c);
        return r;
    }

    bool operator==(const DiffOperator& o) const { return dim_ == o.dim_ && coeffs_ == o.coeffs_; }

    // Pushforward under the affine point map u = L x + c:
    // B(g) = A(g o phi) o phi^{-1}, so B = sum_alpha (a_alpha o phi^{-1}) (L^T d)^alpha.
    DiffOperator transport_affine(const Mat<Rat>& L, const std::vector<Rat>& c) const {
        Mat<Rat> Linv = invert_exact(L);
        std::vector<Rat> b(dim_, Rat(0));
        for (std::size_t i = 0; i < dim_; ++i)
            for (std::size_t j = 0; j < dim_; ++j) b[i] -= Linv[i][j] * c[j];
        DiffOperator r(dim_, order_);
        for (const auto& [alpha, a] : coeffs_) {
            Polynomial moved = a.promoted(dim_).substitute_affine(Linv, b);
            HomogeneousPoly expansion =
                substitute_linear(HomogeneousPoly::monomial(dim_, alpha, Rat(1)), mat_transpose(L));
            for (const auto& [beta, w] : expansion.terms()) r.add_coeff(beta, moved.scaled(w));
        }
        return r;
    }

private:
    std::size_t dim_;
    unsigned order_;
    CoeffMap coeffs_;
};

}  // namespace sympleq
