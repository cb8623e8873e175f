#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "sympleq/numeric.hpp"
#include "sympleq/sp_action.hpp"
#include "sympleq/tensor_field.hpp"
#include "sympleq/trace_invariants.hpp"

namespace sympleq {

enum class SignatureComparison { Distinct, Indistinguishable };

struct SignatureWitness {
    InvariantLabel label;
    double value_a = 0;
    double value_b = 0;
};

// Distinct is a proof of non-equivalence; Indistinguishable is inconclusive.
template <class R>
SignatureComparison signature_match(const std::vector<SignatureEntry<R>>& a,
                                    const std::vector<SignatureEntry<R>>& b, double tol,
                                    SignatureWitness* witness = nullptr) {
    if (a.size() != b.size()) throw LabelError("signature label sets differ in size");
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (!(a[i].label == b[i].label)) throw LabelError("signature label sets differ");
        double va = ring_to_double(a[i].value);
        double vb = ring_to_double(b[i].value);
        double scale = 1.0 + std::max(std::fabs(va), std::fabs(vb));
        if (std::fabs(va - vb) > tol * scale) {
            if (witness) *witness = {a[i].label, va, vb};
            return SignatureComparison::Distinct;
        }
    }
    return SignatureComparison::Indistinguishable;
}

struct MatchConfig {
    int restarts = 20;
    int max_iters = 150;
    double damping = 1e-3;     // initial Levenberg-Marquardt lambda
    double tolerance = 1e-6;   // accepted residual (coefficient l2 norm)
    std::uint64_t seed = 1;
    double start_scale = 0.6;  // stddev of the sp-chart start coordinates
    double signature_tol = 1e-9;
};

struct MatchResult {
    enum class Verdict { Matched, SignatureMismatch, NoMatchFound };
    Verdict verdict;
    DMat g;                    // group element for Matched
    std::vector<double> chart; // sp-basis coordinates of log g
    double residual = 0;       // best coefficient-norm residual
    double symplectic_defect = 0;  // ||g^T J g - J||_F
    int winning_restart = -1;
    SignatureWitness witness;  // for SignatureMismatch
};

namespace detail {

struct SpChart {
    std::vector<Mat<Rat>> gens_exact;
    std::vector<DMat> gens;
    std::size_t dim = 0;

    explicit SpChart(std::size_t n) {
        for (const auto& g : sp_basis(n)) {
            Mat<Rat> M = chart_matrix(g);
            gens_exact.push_back(M);
            gens.push_back(dmat_from_rat(M));
        }
        dim = gens.size();
    }

    DMat combination(const std::vector<double>& t) const {
        std::size_t d = gens.empty() ? 0 : gens[0].size();
        DMat M = dmat_zero(d, d);
        for (std::size_t a = 0; a < t.size(); ++a)
            if (t[a] != 0.0)
                for (std::size_t i = 0; i < d; ++i)
                    for (std::size_t j = 0; j < d; ++j) M[i][j] += t[a] * gens[a][i][j];
        return M;
    }
};

// (exp(M).P)(xi) = P(exp(-M) xi): act through the inverse exponential, which
// is exact in the chart (no matrix inversion error).
inline NumericPoly act_chart(const SpChart& chart, const std::vector<double>& t,
                             const NumericPoly& P) {
    DMat Minv = chart.combination(t);
    for (auto& row : Minv)
        for (auto& v : row) v = -v;
    return substitute_linear(P, dmat_exp(Minv));
}

}  // namespace detail

inline double symplectic_defect(const DMat& g) {
    std::size_t d = g.size();
    DMat J = dmat_from_rat(symplectic_form_matrix(d / 2));
    DMat lhs = dmat_mul(dmat_transpose(g), dmat_mul(J, g));
    double s = 0;
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) {
            double diff = lhs[i][j] - J[i][j];
            s += diff * diff;
        }
    return std::sqrt(s);
}

// Damped least squares over the sp(2n) exponential chart with deterministic
// multi-start: minimizes ||exp(sum t_a M_a).P - Q||^2 in coefficient space.
// NoMatchFound is inconclusive, never a proof of non-equivalence.
inline MatchResult orbit_match(const HomogeneousPoly& P, const HomogeneousPoly& Q,
                               const MatchConfig& cfg = {}) {
    if (P.dim() != Q.dim()) throw std::invalid_argument("orbit match dimension mismatch");
    if (P.degree() != Q.degree())
        throw std::invalid_argument("orbit match requires symbols of equal degree");
    // Signature pre-filter: a Distinct exact signature refutes equivalence.
    {
        SignatureWitness w;
        auto sa = invariant_signature(P);
        auto sb = invariant_signature(Q);
        if (signature_match(sa, sb, cfg.signature_tol, &w) == SignatureComparison::Distinct) {
            MatchResult r;
            r.verdict = MatchResult::Verdict::SignatureMismatch;
            r.witness = w;
            return r;
        }
    }

    detail::SpChart chart(P.dim() / 2);
    NumericPoly Pn = numeric_poly(P);
    NumericPoly Qn = numeric_poly(Q);
    std::size_t nparams = chart.dim;

    std::vector<MultiIndex> basis = monomial_basis(P.dim(), P.degree());
    auto residual_vec = [&](const std::vector<double>& t) {
        NumericPoly moved = detail::act_chart(chart, t, Pn);
        std::vector<double> r(basis.size());
        for (std::size_t i = 0; i < basis.size(); ++i)
            r[i] = moved.coeff(basis[i]) - Qn.coeff(basis[i]);
        return r;
    };
    auto norm2 = [](const std::vector<double>& v) {
        double s = 0;
        for (double x : v) s += x * x;
        return s;
    };

    MatchResult best;
    best.verdict = MatchResult::Verdict::NoMatchFound;
    best.residual = std::numeric_limits<double>::infinity();

    for (int restart = 0; restart < cfg.restarts; ++restart) {
        std::mt19937_64 rng(cfg.seed + static_cast<std::uint64_t>(restart) * 0x9E3779B97F4A7C15ull);
        std::normal_distribution<double> gauss(0.0, cfg.start_scale);
        std::vector<double> t(nparams, 0.0);
        if (restart > 0)
            for (auto& v : t) v = gauss(rng);

        std::vector<double> r = residual_vec(t);
        double f = norm2(r);
        double lambda = cfg.damping;
        for (int iter = 0; iter < cfg.max_iters; ++iter) {
            // Numerical Jacobian, central differences.
            const double h = 1e-6;
            DMat Jt = dmat_zero(basis.size(), nparams);
            for (std::size_t a = 0; a < nparams; ++a) {
                std::vector<double> tp = t, tm = t;
                tp[a] += h;
                tm[a] -= h;
                std::vector<double> rp = residual_vec(tp), rm = residual_vec(tm);
                for (std::size_t i = 0; i < basis.size(); ++i) Jt[i][a] = (rp[i] - rm[i]) / (2 * h);
            }
            DMat JT = dmat_transpose(Jt);
            DMat JTJ = dmat_mul(JT, Jt);
            std::vector<double> g(nparams, 0.0);
            for (std::size_t a = 0; a < nparams; ++a)
                for (std::size_t i = 0; i < basis.size(); ++i) g[a] += JT[a][i] * r[i];
            bool accepted = false;
            for (int tries = 0; tries < 12 && !accepted; ++tries) {
                DMat A = JTJ;
                for (std::size_t a = 0; a < nparams; ++a) A[a][a] += lambda;
                std::vector<double> step;
                try {
                    step = dmat_solve(A, g);
                } catch (const std::domain_error&) {
                    lambda *= 10;
                    continue;
                }
                std::vector<double> tn = t;
                for (std::size_t a = 0; a < nparams; ++a) tn[a] -= step[a];
                std::vector<double> rn = residual_vec(tn);
                double fn = norm2(rn);
                if (fn < f) {  // accepted steps are monotone in the residual
                    t = tn;
                    r = rn;
                    f = fn;
                    lambda = std::max(lambda / 3, 1e-14);
                    accepted = true;
                } else {
                    lambda *= 10;
                }
            }
            if (!accepted || std::sqrt(f) < cfg.tolerance * 1e-3) break;
        }
        double res = std::sqrt(f);
        if (res < best.residual) {
            best.residual = res;
            best.chart = t;
            best.winning_restart = restart;
        }
        if (best.residual < cfg.tolerance * 1e-3) break;  // early out, already well below
    }

    best.g = dmat_exp(chart.combination(best.chart));
    best.symplectic_defect = symplectic_defect(best.g);
    // Matched promises residual <= tolerance AND an element that is
    // symplectic to within 1e-10.
    if (best.residual <= cfg.tolerance && best.symplectic_defect <= 1e-10)
        best.verdict = MatchResult::Verdict::Matched;
    return best;
}

struct TypeWitness {
    std::vector<Rat> point_a;
    std::vector<Rat> point_b;
    InvariantLabel label;
    bool orbit_dim_jump = false;
};

struct ConstantTypeReport {
    bool constant = true;  // evidence only; variation is a proof of non-constant type
    TypeWitness witness;
};

// Evaluates the exact invariant signature at every grid point and compares
// against the first point. Signatures are orbit invariants, so any variation
// refutes constant type; agreement is necessary-condition evidence only.
inline ConstantTypeReport constant_type_test(const SymTensorField& field,
                                             const std::vector<std::vector<Rat>>& grid,
                                             double tol = 0.0) {
    if (grid.empty()) throw std::invalid_argument("constant type test needs a nonempty grid");
    ConstantTypeReport rep;
    std::vector<SignatureEntry<Rat>> ref = invariant_signature(field_eval_base(field, grid.front()));
    for (std::size_t g = 1; g < grid.size(); ++g) {
        std::vector<SignatureEntry<Rat>> cur = invariant_signature(field_eval_base(field, grid[g]));
        for (std::size_t i = 0; i < ref.size(); ++i) {
            bool differ;
            if (tol == 0.0)
                differ = !(ref[i].value == cur[i].value);
            else {
                double va = rat_to_double(ref[i].value), vb = rat_to_double(cur[i].value);
                differ = std::fabs(va - vb) > tol * (1.0 + std::max(std::fabs(va), std::fabs(vb)));
            }
            if (differ) {
                rep.constant = false;
                rep.witness.point_a = grid.front();
                rep.witness.point_b = grid[g];
                rep.witness.label = ref[i].label;
                rep.witness.orbit_dim_jump = ref[i].label.family == InvariantLabel::Family::OrbitDim;
                return rep;
            }
        }
    }
    return rep;
}

}  // namespace sympleq
