#pragma once

#include <functional>
#include <map>
#include <stdexcept>
#include <vector>

#include "sympleq/fiber_poly.hpp"
#include "sympleq/multi_index.hpp"
#include "sympleq/rational.hpp"

namespace sympleq {

// Enumerates all multi-indices of dimension `parts` and total degree `total`.
inline void for_each_composition(unsigned total, std::size_t parts,
                                 const std::function<void(const MultiIndex&)>& fn) {
    MultiIndex cur(parts);
    std::function<void(std::size_t, unsigned)> rec = [&](std::size_t pos, unsigned rem) {
        if (pos + 1 == parts) {
            cur[pos] = rem;
            fn(cur);
            return;
        }
        for (unsigned v = 0; v <= rem; ++v) {
            cur[pos] = v;
            rec(pos + 1, rem - v);
        }
    };
    if (parts > 0) rec(0, total);
}

namespace detail {

// Memoized iterated partials, keyed by the full derivative multi-index.
template <class R>
class DerivativeTable {
public:
    explicit DerivativeTable(const FiberPoly<R>& p) { cache_.emplace(MultiIndex(p.dim()), p); }

    const FiberPoly<R>& get(const MultiIndex& beta) {
        auto it = cache_.find(beta);
        if (it != cache_.end()) return it->second;
        for (std::size_t i = 0; i < beta.dim(); ++i) {
            if (beta[i] == 0) continue;
            MultiIndex prev = beta;
            prev[i] -= 1;
            FiberPoly<R> d = get(prev).partial(i);
            return cache_.emplace(beta, std::move(d)).first->second;
        }
        throw std::logic_error("unreachable");
    }

private:
    std::map<MultiIndex, FiberPoly<R>, GrlexLess> cache_;
};

}  // namespace detail

// Symplectic transvectant of order r in canonical coordinates
// (x_1..x_n, y_1..y_n):
//
//   [P,Q]_r = 2^{-r} sum_{l=0}^{r} sum_{|lv|=l} sum_{|mv|=r-l} (-1)^{r-l}
//             C(r,l) C(l;lv) C(r-l;mv) d^rP/dx^lv dy^mv  d^rQ/dx^mv dy^lv.
//
// Degree law deg P + deg Q - 2r; zero when r > min(deg P, deg Q).
template <class R>
FiberPoly<R> symplectic_transvectant(const FiberPoly<R>& P, const FiberPoly<R>& Q, int r) {
    if (P.dim() != Q.dim()) throw std::invalid_argument("transvectant of polynomials over different spaces");
    if (P.dim() % 2 != 0) throw std::invalid_argument("symplectic transvectant requires even dimension");
    if (r < 0) throw std::invalid_argument("transvectant order must be nonnegative");
    std::size_t n = P.dim() / 2;
    unsigned ur = static_cast<unsigned>(r);
    int out_deg = static_cast<int>(P.degree()) + static_cast<int>(Q.degree()) - 2 * r;
    if (out_deg < 0 || ur > std::min(P.degree(), Q.degree()))
        return FiberPoly<R>(P.dim(), out_deg < 0 ? 0 : static_cast<unsigned>(out_deg));

    detail::DerivativeTable<R> dP(P), dQ(Q);
    auto full_index = [&](const MultiIndex& xs, const MultiIndex& ys) {
        MultiIndex f(2 * n);
        for (std::size_t i = 0; i < n; ++i) {
            f[i] = xs[i];
            f[n + i] = ys[i];
        }
        return f;
    };

    FiberPoly<R> acc(P.dim(), static_cast<unsigned>(out_deg));
    for (unsigned l = 0; l <= ur; ++l) {
        Int c_rl = binomial(ur, l);
        bool negative = (ur - l) % 2 == 1;
        for_each_composition(l, n, [&](const MultiIndex& lv) {
            Int c_l = multinomial(lv);
            for_each_composition(ur - l, n, [&](const MultiIndex& mv) {
                const FiberPoly<R>& dp = dP.get(full_index(lv, mv));
                if (dp.is_zero()) return;
                const FiberPoly<R>& dq = dQ.get(full_index(mv, lv));
                if (dq.is_zero()) return;
                Int w = c_rl * c_l * multinomial(mv);
                if (negative) w = -w;
                acc = acc + (dp * dq).mul_int(w);
            });
        });
    }
    Int two_r = Int(1) << ur;
    return acc.div_int(two_r);
}

// Poisson bracket sum_i (dP/dx_i dQ/dy_i - dP/dy_i dQ/dx_i). Equals
// 2 [P,Q]_1 under the 2^{-r} normalization of the coordinate formula.
template <class R>
FiberPoly<R> poisson_bracket(const FiberPoly<R>& P, const FiberPoly<R>& Q) {
    if (P.dim() != Q.dim()) throw std::invalid_argument("poisson bracket over different spaces");
    if (P.dim() % 2 != 0) throw std::invalid_argument("poisson bracket requires even dimension");
    std::size_t n = P.dim() / 2;
    int out_deg = static_cast<int>(P.degree()) + static_cast<int>(Q.degree()) - 2;
    FiberPoly<R> acc(P.dim(), out_deg < 0 ? 0 : static_cast<unsigned>(out_deg));
    if (out_deg < 0) return acc;
    for (std::size_t i = 0; i < n; ++i) {
        acc = acc + P.partial(i) * Q.partial(n + i) - P.partial(n + i) * Q.partial(i);
    }
    return acc;
}

// Metric transvectant in orthonormal coordinates:
//   (P,Q)_m = sum_{|mv|=m} C(m;mv) d^mP/dx^mv d^mQ/dx^mv.
template <class R>
FiberPoly<R> metric_transvectant(const FiberPoly<R>& P, const FiberPoly<R>& Q, int m) {
    if (P.dim() != Q.dim()) throw std::invalid_argument("transvectant of polynomials over different spaces");
    if (m < 0) throw std::invalid_argument("transvectant order must be nonnegative");
    unsigned um = static_cast<unsigned>(m);
    int out_deg = static_cast<int>(P.degree()) + static_cast<int>(Q.degree()) - 2 * m;
    if (out_deg < 0 || um > std::min(P.degree(), Q.degree()))
        return FiberPoly<R>(P.dim(), out_deg < 0 ? 0 : static_cast<unsigned>(out_deg));

    detail::DerivativeTable<R> dP(P), dQ(Q);
    FiberPoly<R> acc(P.dim(), static_cast<unsigned>(out_deg));
    for_each_composition(um, P.dim(), [&](const MultiIndex& mv) {
        const FiberPoly<R>& dp = dP.get(mv);
        if (dp.is_zero()) return;
        const FiberPoly<R>& dq = dQ.get(mv);
        if (dq.is_zero()) return;
        acc = acc + (dp * dq).mul_int(multinomial(mv));
    });
    return acc;
}

}  // namespace sympleq
