#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <vector>

#include "sympleq/base_poly.hpp"
#include "sympleq/multi_index.hpp"
#include "sympleq/rational.hpp"
#include "sympleq/ring.hpp"

namespace sympleq {

inline bool ring_is_zero_mixed(const Rat& r) { return rat_is_zero(r); }
inline bool ring_is_zero_mixed(double r) { return r == 0.0; }
inline bool ring_is_zero_mixed(const Polynomial& p) { return p.is_zero(); }

inline Rat mixed_mul(const Rat& m, const Rat& c) { return m * c; }
inline double mixed_mul(double m, double c) { return m * c; }
inline double mixed_mul(const Rat& m, double c) { return rat_to_double(m) * c; }
inline Polynomial mixed_mul(const Rat& m, const Polynomial& c) { return c.scaled(m); }
inline Polynomial mixed_mul(const Polynomial& m, const Polynomial& c) { return m * c; }

// Homogeneous polynomial of fixed degree in d fiber variables over a
// coefficient ring R. R = Rat gives the exact symbol algebra, R = double the
// numeric path of the orbit matcher and R = Polynomial a symbol field whose
// coefficients depend polynomially on the base point.
template <class R>
class FiberPoly {
public:
    using TermMap = std::map<MultiIndex, R, GrlexLess>;

    FiberPoly() : dim_(0), degree_(0) {}
    FiberPoly(std::size_t dim, unsigned degree) : dim_(dim), degree_(degree) {}

    static FiberPoly monomial(std::size_t dim, const MultiIndex& m, R coef) {
        FiberPoly p(dim, m.degree());
        p.add_term(m, std::move(coef));
        return p;
    }

    std::size_t dim() const { return dim_; }
    unsigned degree() const { return degree_; }
    bool is_zero() const { return terms_.empty(); }
    const TermMap& terms() const { return terms_; }
    std::size_t term_count() const { return terms_.size(); }

    R coeff(const MultiIndex& m) const {
        auto it = terms_.find(m);
        return it == terms_.end() ? R() : it->second;
    }

    void add_term(const MultiIndex& m, const R& c) {
        if (m.dim() != dim_) throw std::invalid_argument("fiber monomial dimension mismatch");
        if (m.degree() != degree_)
            throw ValidationError("non-homogeneous term " + m.str() + " in degree-" +
                                  std::to_string(degree_) + " polynomial");
        auto it = terms_.find(m);
        if (it == terms_.end()) {
            if (!ring_is_zero_mixed(c)) terms_.emplace(m, c);
        } else {
            it->second = it->second + c;
            if (ring_is_zero_mixed(it->second)) terms_.erase(it);
        }
    }

    FiberPoly operator+(const FiberPoly& o) const {
        if (is_zero()) return o;
        if (o.is_zero()) return *this;
        check_space(o);
        if (degree_ != o.degree_) throw std::invalid_argument("cannot add polynomials of different degrees");
        FiberPoly r = *this;
        for (const auto& [m, c] : o.terms_) r.add_term(m, c);
        return r;
    }

    FiberPoly operator-(const FiberPoly& o) const { return *this + o.negated(); }

    FiberPoly negated() const {
        FiberPoly r(dim_, degree_);
        for (const auto& [m, c] : terms_) r.terms_.emplace(m, ring_neg(c));
        return r;
    }

    FiberPoly scaled(const Rat& s) const {
        FiberPoly r(dim_, degree_);
        if (rat_is_zero(s)) return r;
        for (const auto& [m, c] : terms_) r.add_term(m, coeff_scale(c, s));
        return r;
    }

    FiberPoly scaled_by(const R& s) const {
        FiberPoly r(dim_, degree_);
        for (const auto& [m, c] : terms_) r.add_term(m, c * s);
        return r;
    }

    FiberPoly mul_int(const Int& n) const {
        FiberPoly r(dim_, degree_);
        if (n == 0) return r;
        for (const auto& [m, c] : terms_) r.terms_.emplace(m, ring_mul_int(c, n));
        return r;
    }

    FiberPoly div_int(const Int& n) const {
        if (n == 0) throw std::invalid_argument("division by zero");
        FiberPoly r(dim_, degree_);
        for (const auto& [m, c] : terms_) r.terms_.emplace(m, ring_div_int(c, n));
        return r;
    }

    FiberPoly operator*(const FiberPoly& o) const {
        check_space(o);
        FiberPoly r(dim_, degree_ + o.degree_);
        for (const auto& [m1, c1] : terms_)
            for (const auto& [m2, c2] : o.terms_) r.add_term(m1 + m2, c1 * c2);
        return r;
    }

    FiberPoly partial(std::size_t i) const {
        if (i >= dim_) throw std::out_of_range("variable index out of range");
        FiberPoly r(dim_, degree_ == 0 ? 0 : degree_ - 1);
        for (const auto& [m, c] : terms_) {
            if (m[i] == 0) continue;
            MultiIndex mm = m;
            unsigned e = mm[i];
            mm[i] = e - 1;
            r.add_term(mm, ring_mul_int(c, Int(e)));
        }
        return r;
    }

    FiberPoly partial_multi(const MultiIndex& beta) const {
        FiberPoly r = *this;
        for (std::size_t i = 0; i < beta.dim(); ++i)
            for (unsigned j = 0; j < beta[i]; ++j) r = r.partial(i);
        return r;
    }

    // Two zero polynomials compare equal whatever their recorded degree.
    bool operator==(const FiberPoly& o) const {
        if (is_zero() && o.is_zero()) return true;
        return dim_ == o.dim_ && degree_ == o.degree_ && terms_ == o.terms_;
    }

    std::string str(const std::vector<std::string>& names = {}) const;

private:
    void check_space(const FiberPoly& o) const {
        if (dim_ != o.dim_) throw std::invalid_argument("fiber dimension mismatch");
    }

    std::size_t dim_;
    unsigned degree_;
    TermMap terms_;
};

using HomogeneousPoly = FiberPoly<Rat>;
using NumericPoly = FiberPoly<double>;
using SymTensorField = FiberPoly<Polynomial>;  // fiber poly over base polynomials

// P(M xi): substitution of a linear change of the fiber variables, for the
// scalar rings. Symbol fields get their own transport in tensor_field.hpp.
template <class R>
FiberPoly<R> substitute_linear(const FiberPoly<R>& P, const std::vector<std::vector<R>>& M) {
    static_assert(std::is_same_v<R, Rat> || std::is_same_v<R, double>);
    std::size_t d = P.dim();
    if (M.size() != d) throw std::invalid_argument("substitution matrix shape mismatch");
    std::vector<FiberPoly<R>> linear(d);
    for (std::size_t i = 0; i < d; ++i) {
        if (M[i].size() != d) throw std::invalid_argument("substitution matrix shape mismatch");
        FiberPoly<R> li(d, 1);
        for (std::size_t j = 0; j < d; ++j) li.add_term(MultiIndex::unit(d, j), M[i][j]);
        linear[i] = li;
    }
    std::vector<std::vector<FiberPoly<R>>> pow(d);
    for (std::size_t i = 0; i < d; ++i)
        pow[i].push_back(FiberPoly<R>::monomial(d, MultiIndex(d), R(1)));
    auto power = [&](std::size_t i, unsigned e) -> const FiberPoly<R>& {
        while (pow[i].size() <= e) pow[i].push_back(pow[i].back() * linear[i]);
        return pow[i][e];
    };
    FiberPoly<R> r(d, P.degree());
    for (const auto& [m, c] : P.terms()) {
        FiberPoly<R> t = FiberPoly<R>::monomial(d, MultiIndex(d), c);
        for (std::size_t i = 0; i < d; ++i)
            if (m[i] > 0) t = t * power(i, m[i]);
        r = r + t;
    }
    return r;
}

// Derivation X = sum_{a,b} C[a][b] xi_b d/dxi_a applied to P. The matrix ring
// RM multiplies into R (Rat into anything, Polynomial into Polynomial).
template <class RM, class R>
FiberPoly<R> derivation_apply(const std::vector<std::vector<RM>>& C, const FiberPoly<R>& P) {
    std::size_t d = P.dim();
    if (C.size() != d) throw std::invalid_argument("derivation matrix shape mismatch");
    FiberPoly<R> out(d, P.degree());
    for (std::size_t a = 0; a < d; ++a) {
        FiberPoly<R> dp = P.partial(a);
        if (dp.is_zero()) continue;
        for (std::size_t b = 0; b < d; ++b) {
            if (ring_is_zero_mixed(C[a][b])) continue;
            for (const auto& [m, c] : dp.terms())
                out.add_term(m + MultiIndex::unit(d, b), mixed_mul(C[a][b], c));
        }
    }
    return out;
}

template <class R>
std::string FiberPoly<R>::str(const std::vector<std::string>& names) const {
    if (is_zero()) return "0";
    auto name = [&](std::size_t i) {
        if (i < names.size()) return names[i];
        return "z" + std::to_string(i + 1);
    };
    std::string s;
    for (const auto& [m, c] : terms_) {
        if (!s.empty()) s += " + ";
        if constexpr (std::is_same_v<R, Rat>) {
            s += rat_str(c);
        } else if constexpr (std::is_same_v<R, double>) {
            s += std::to_string(c);
        } else {
            s += "(" + c.str() + ")";
        }
        for (std::size_t i = 0; i < m.dim(); ++i) {
            if (m[i] == 0) continue;
            s += "*" + name(i);
            if (m[i] > 1) s += "^" + std::to_string(m[i]);
        }
    }
    return s;
}

}  // namespace sympleq
