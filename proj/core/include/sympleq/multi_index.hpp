#pragma once

#include <cstdint>
#include <functional>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

#include "sympleq/rational.hpp"

namespace sympleq {

// Exponent vector of a monomial in d variables. Ordered graded-lex: lower
// total degree first, ties broken so that within a degree x1^k comes first
// and xd^k last (monomial_basis(2,2) = [x^2, xy, y^2]).
class MultiIndex {
public:
    MultiIndex() = default;
    explicit MultiIndex(std::size_t dim) : e_(dim, 0) {}
    MultiIndex(std::initializer_list<unsigned> e) : e_(e.begin(), e.end()) {}
    explicit MultiIndex(std::vector<unsigned> e) : e_(std::move(e)) {}

    static MultiIndex unit(std::size_t dim, std::size_t i) {
        MultiIndex m(dim);
        m.e_.at(i) = 1;
        return m;
    }

    std::size_t dim() const { return e_.size(); }
    unsigned operator[](std::size_t i) const { return e_[i]; }
    unsigned& operator[](std::size_t i) { return e_[i]; }

    unsigned degree() const {
        unsigned s = 0;
        for (unsigned v : e_) s += v;
        return s;
    }

    MultiIndex operator+(const MultiIndex& o) const {
        check_dim(o);
        MultiIndex r = *this;
        for (std::size_t i = 0; i < e_.size(); ++i) r.e_[i] += o.e_[i];
        return r;
    }

    // Componentwise difference; throws if any component would go negative.
    MultiIndex operator-(const MultiIndex& o) const {
        check_dim(o);
        MultiIndex r = *this;
        for (std::size_t i = 0; i < e_.size(); ++i) {
            if (o.e_[i] > r.e_[i]) throw std::invalid_argument("multi-index subtraction underflow");
            r.e_[i] -= o.e_[i];
        }
        return r;
    }

    bool contains(const MultiIndex& o) const {
        check_dim(o);
        for (std::size_t i = 0; i < e_.size(); ++i)
            if (o.e_[i] > e_[i]) return false;
        return true;
    }

    bool operator==(const MultiIndex& o) const = default;

    const std::vector<unsigned>& entries() const { return e_; }

    std::string str() const {
        std::string s = "(";
        for (std::size_t i = 0; i < e_.size(); ++i) {
            if (i) s += ",";
            s += std::to_string(e_[i]);
        }
        return s + ")";
    }

    Int factorial_product() const {  // alpha! = prod alpha_i!
        Int f = 1;
        for (unsigned v : e_) f *= factorial(v);
        return f;
    }

private:
    void check_dim(const MultiIndex& o) const {
        if (e_.size() != o.e_.size()) throw std::invalid_argument("multi-index dimension mismatch");
    }
    std::vector<unsigned> e_;
};

inline bool grlex_less(const MultiIndex& a, const MultiIndex& b) {
    unsigned da = a.degree(), db = b.degree();
    if (da != db) return da < db;
    // Same degree: lexicographically larger exponent vector sorts first.
    for (std::size_t i = 0; i < a.dim() && i < b.dim(); ++i) {
        if (a[i] != b[i]) return a[i] > b[i];
    }
    return a.dim() < b.dim();
}

struct GrlexLess {
    bool operator()(const MultiIndex& a, const MultiIndex& b) const { return grlex_less(a, b); }
};

// multinomial(|m|; m) = |m|! / prod m_i!
inline Int multinomial(const MultiIndex& m) {
    return factorial(m.degree()) / m.factorial_product();
}

// All multi-indices of dimension d and total degree exactly k, graded-lex
// order. Size C(d+k-1, k).
inline std::vector<MultiIndex> monomial_basis(std::size_t d, unsigned k) {
    if (d == 0) throw std::invalid_argument("monomial_basis: dimension must be positive");
    std::vector<MultiIndex> out;
    MultiIndex cur(d);
    // Depth-first: assign the first variable the largest remaining exponent.
    std::function<void(std::size_t, unsigned)> rec = [&](std::size_t pos, unsigned rem) {
        if (pos + 1 == d) {
            cur[pos] = rem;
            out.push_back(cur);
            return;
        }
        for (int v = static_cast<int>(rem); v >= 0; --v) {
            cur[pos] = static_cast<unsigned>(v);
            rec(pos + 1, rem - static_cast<unsigned>(v));
        }
    };
    rec(0, k);
    return out;
}

}  // namespace sympleq
