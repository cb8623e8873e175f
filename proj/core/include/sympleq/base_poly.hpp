#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "sympleq/multi_index.hpp"
#include "sympleq/rational.hpp"
#include "sympleq/ring.hpp"

namespace sympleq {

// Polynomial in the base coordinates with exact rational coefficients, not
// necessarily homogeneous. Serves as the coefficient ring for operators,
// Christoffel data and invariant fields. A default-constructed value is the
// universal zero: it is compatible with any dimension.
class Polynomial {
public:
    using TermMap = std::map<MultiIndex, Rat, GrlexLess>;

    Polynomial() : dim_(0) {}
    explicit Polynomial(std::size_t dim) : dim_(dim) {}

    static Polynomial constant(const Rat& c, std::size_t dim) {
        Polynomial p(dim);
        p.add_term(MultiIndex(dim), c);
        return p;
    }
    // Dimension-agnostic constant; binary operations promote it as needed.
    static Polynomial scalar(const Rat& c) { return constant(c, 0); }
    static Polynomial variable(std::size_t dim, std::size_t i) {
        Polynomial p(dim);
        p.add_term(MultiIndex::unit(dim, i), Rat(1));
        return p;
    }

    std::size_t dim() const { return dim_; }
    bool is_zero() const { return terms_.empty(); }
    const TermMap& terms() const { return terms_; }

    unsigned degree() const {  // 0 for the zero polynomial
        unsigned d = 0;
        for (const auto& [m, c] : terms_) d = std::max(d, m.degree());
        return d;
    }

    Rat coeff(const MultiIndex& m) const {
        auto it = terms_.find(m);
        return it == terms_.end() ? Rat(0) : it->second;
    }

    void add_term(const MultiIndex& m, const Rat& c) {
        if (m.dim() != dim_) throw std::invalid_argument("polynomial term dimension mismatch");
        auto it = terms_.find(m);
        if (it == terms_.end()) {
            if (!rat_is_zero(c)) terms_.emplace(m, c);
        } else {
            it->second += c;
            if (rat_is_zero(it->second)) terms_.erase(it);
        }
    }

    Polynomial operator+(const Polynomial& o) const {
        std::size_t d = align(*this, o);
        Polynomial r(d);
        for (const auto& [m, c] : promoted(d).terms_) r.add_term(m, c);
        for (const auto& [m, c] : o.promoted(d).terms_) r.add_term(m, c);
        return r;
    }

    Polynomial operator-(const Polynomial& o) const { return *this + o.negated(); }

    Polynomial operator*(const Polynomial& o) const {
        std::size_t d = align(*this, o);
        Polynomial a = promoted(d), b = o.promoted(d);
        Polynomial r(d);
        for (const auto& [m1, c1] : a.terms_)
            for (const auto& [m2, c2] : b.terms_) r.add_term(m1 + m2, c1 * c2);
        return r;
    }

    Polynomial scaled(const Rat& s) const {
        Polynomial r(dim_);
        if (rat_is_zero(s)) return r;
        for (const auto& [m, c] : terms_) r.terms_.emplace(m, c * s);
        return r;
    }

    Polynomial negated() const { return scaled(Rat(-1)); }

    Polynomial partial(std::size_t i) const {
        if (dim_ == 0) return Polynomial();  // scalars differentiate to zero
        Polynomial r(dim_);
        for (const auto& [m, c] : terms_) {
            if (m[i] == 0) continue;
            MultiIndex mm = m;
            unsigned e = mm[i];
            mm[i] = e - 1;
            r.add_term(mm, c * Rat(static_cast<long>(e)));
        }
        return r;
    }

    Polynomial partial_multi(const MultiIndex& beta) const {
        Polynomial r = *this;
        for (std::size_t i = 0; i < beta.dim(); ++i)
            for (unsigned j = 0; j < beta[i]; ++j) r = r.partial(i);
        return r;
    }

    Rat eval(const std::vector<Rat>& x) const {
        if (dim_ == 0) return is_zero() ? Rat(0) : terms_.begin()->second;
        if (x.size() != dim_) throw std::invalid_argument("evaluation point dimension mismatch");
        Rat s(0);
        for (const auto& [m, c] : terms_) {
            Rat t = c;
            for (std::size_t i = 0; i < m.dim(); ++i)
                for (unsigned j = 0; j < m[i]; ++j) t *= x[i];
            s += t;
        }
        return s;
    }

    double eval_double(const std::vector<double>& x) const {
        double s = 0;
        for (const auto& [m, c] : terms_) {
            double t = rat_to_double(c);
            for (std::size_t i = 0; i < m.dim(); ++i)
                for (unsigned j = 0; j < m[i]; ++j) t *= x[i];
            s += t;
        }
        return s;
    }

    // f(A x + b): substitution of an exact affine change of coordinates.
    Polynomial substitute_affine(const std::vector<std::vector<Rat>>& A,
                                 const std::vector<Rat>& b) const {
        if (is_zero()) return *this;
        std::size_t d = dim_;
        if (A.size() != d || b.size() != d) throw std::invalid_argument("affine substitution shape mismatch");
        std::vector<Polynomial> subs(d);
        for (std::size_t i = 0; i < d; ++i) {
            Polynomial s = Polynomial::constant(b[i], d);
            for (std::size_t j = 0; j < d; ++j)
                s = s + Polynomial::variable(d, j).scaled(A[i][j]);
            subs[i] = s;
        }
        // Cache powers of each substituted variable.
        std::vector<std::vector<Polynomial>> pow(d);
        for (std::size_t i = 0; i < d; ++i) pow[i].push_back(Polynomial::constant(Rat(1), d));
        auto power = [&](std::size_t i, unsigned e) -> const Polynomial& {
            while (pow[i].size() <= e) pow[i].push_back(pow[i].back() * subs[i]);
            return pow[i][e];
        };
        Polynomial r(d);
        for (const auto& [m, c] : terms_) {
            Polynomial t = Polynomial::constant(c, d);
            for (std::size_t i = 0; i < d; ++i)
                if (m[i] > 0) t = t * power(i, m[i]);
            r = r + t;
        }
        return r;
    }

    bool operator==(const Polynomial& o) const {
        if (is_zero() && o.is_zero()) return true;
        if (dim_ == o.dim_) return terms_ == o.terms_;
        if (dim_ == 0) return promoted(o.dim_).terms() == o.terms_;
        if (o.dim_ == 0) return terms_ == o.promoted(dim_).terms();
        return false;
    }

    std::string str(const std::string& var = "a") const;

    // Rebuilds a dim-0 scalar in the given ambient dimension.
    Polynomial promoted(std::size_t d) const {
        if (dim_ == d) return *this;
        if (dim_ != 0) throw std::invalid_argument("polynomial dimension mismatch");
        return is_zero() ? Polynomial(d) : constant(terms_.begin()->second, d);
    }

private:
    // Dim-0 values are scalars compatible with any ambient dimension.
    static std::size_t align(const Polynomial& a, const Polynomial& b) {
        if (a.dim_ == 0) return b.dim_;
        if (b.dim_ == 0) return a.dim_;
        if (a.dim_ != b.dim_) throw std::invalid_argument("polynomial dimension mismatch");
        return a.dim_;
    }

    std::size_t dim_;
    TermMap terms_;
};

inline Polynomial operator*(const Rat& s, const Polynomial& p) { return p.scaled(s); }

template <>
inline Polynomial ring_one<Polynomial>() { return Polynomial::scalar(Rat(1)); }

// Ring hooks so Polynomial can act as a coefficient ring for fiber polynomials.
inline bool ring_is_zero(const Polynomial& p) { return p.is_zero(); }
inline Polynomial ring_neg(const Polynomial& p) { return p.negated(); }
inline Polynomial ring_mul_int(const Polynomial& p, const Int& n) { return p.scaled(Rat(n)); }
inline Polynomial ring_div_int(const Polynomial& p, const Int& n) { return p.scaled(Rat(1) / Rat(n)); }
inline Polynomial coeff_scale(const Polynomial& p, const Rat& s) { return p.scaled(s); }

inline std::string Polynomial::str(const std::string& var) const {
    if (is_zero()) return "0";
    std::string s;
    for (const auto& [m, c] : terms_) {
        if (!s.empty()) s += " + ";
        s += rat_str(c);
        for (std::size_t i = 0; i < m.dim(); ++i) {
            if (m[i] == 0) continue;
            s += "*" + var + std::to_string(i + 1);
            if (m[i] > 1) s += "^" + std::to_string(m[i]);
        }
    }
    return s;
}

}  // namespace sympleq
