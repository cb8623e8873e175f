#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sympleq/diff_operator.hpp"
#include "sympleq/numeric.hpp"
#include "sympleq/trace_invariants.hpp"

namespace sympleq {

struct NotAdjusted : std::runtime_error {
    explicit NotAdjusted(const std::string& what) : std::runtime_error(what) {}
};

// A zero-order invariant of the operator as a polynomial function on the base:
// a trace invariant evaluated on the base-dependent principal symbol.
struct InvariantField {
    InvariantLabel label;
    Polynomial value;
};

inline InvariantField symbol_invariant_field(const DiffOperator& A, const InvariantLabel& label) {
    if (label.family == InvariantLabel::Family::OrbitDim)
        throw LabelError("orbit dimension is not admissible as an invariant field");
    SymTensorField symbol = A.principal_symbol();
    Polynomial v = evaluate_label(symbol, label).promoted(A.dim());
    return {label, v};
}

inline Polynomial poly_det(const Mat<Polynomial>& m) {
    std::size_t k = m.size();
    if (k == 0) return Polynomial::scalar(Rat(1));
    if (k == 1) return m[0][0];
    Polynomial s;
    for (std::size_t c = 0; c < k; ++c) {
        if (m[0][c].is_zero()) continue;
        Mat<Polynomial> sub(k - 1, std::vector<Polynomial>(k - 1));
        for (std::size_t r = 1; r < k; ++r)
            for (std::size_t c2 = 0, cc = 0; c2 < k; ++c2)
                if (c2 != c) sub[r - 1][cc++] = m[r][c2];
        Polynomial term = m[0][c] * poly_det(sub);
        s = (c % 2 == 0) ? s + term : s - term;
    }
    return s;
}

// Coefficient invariants of A on the invariant chart I = (I_1..I_n). The raw
// values (1/alpha!) A(I^alpha) mix in lower-order coefficients through
// A(y^alpha)/alpha! = sum_{beta <= alpha} A~_beta y^{alpha-beta}/(alpha-beta)!,
// so the triangular system is inverted to isolate A~_alpha, the actual
// coefficient of A in the chart coordinates. With the identity chart I_i = x_i
// this returns the coefficients a_alpha exactly.
inline std::map<MultiIndex, Polynomial, GrlexLess> model_coefficients(
    const DiffOperator& A, const std::vector<InvariantField>& I) {
    std::size_t n = A.dim();
    if (I.size() != n)
        throw NotAdjusted("need exactly " + std::to_string(n) + " invariant fields, got " +
                          std::to_string(I.size()));
    // Adjustedness, symbolic part: Jacobian determinant not identically zero.
    Mat<Polynomial> jac(n, std::vector<Polynomial>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) jac[i][j] = I[i].value.promoted(n).partial(j);
    if (poly_det(jac).is_zero())
        throw NotAdjusted("chosen invariants have identically degenerate Jacobian");

    std::map<MultiIndex, Polynomial, GrlexLess> powers;
    powers.emplace(MultiIndex(n), Polynomial::constant(Rat(1), n));
    std::function<const Polynomial&(const MultiIndex&)> power =
        [&](const MultiIndex& alpha) -> const Polynomial& {
        auto it = powers.find(alpha);
        if (it != powers.end()) return it->second;
        for (std::size_t i = 0; i < n; ++i) {
            if (alpha[i] == 0) continue;
            MultiIndex prev = alpha;
            prev[i] -= 1;
            Polynomial p = power(prev) * I[i].value;
            return powers.emplace(alpha, std::move(p)).first->second;
        }
        throw std::logic_error("unreachable");
    };

    std::map<MultiIndex, Polynomial, GrlexLess> out;
    for (unsigned m = 0; m <= A.order(); ++m)
        for (const MultiIndex& alpha : monomial_basis(n, m)) {
            Polynomial v = A.apply(power(alpha)).scaled(Rat(1) / Rat(alpha.factorial_product()));
            for (const auto& [beta, done] : out) {
                if (!(alpha.contains(beta)) || beta == alpha) continue;
                MultiIndex diff = alpha - beta;
                v = v - done * power(diff).scaled(Rat(1) / Rat(diff.factorial_product()));
            }
            out.emplace(alpha, v);
        }
    return out;
}

struct GridSpec {
    struct Axis {
        Rat lo, hi;
        unsigned count = 1;
    };
    std::vector<Axis> axes;

    std::vector<std::vector<Rat>> points() const {
        if (axes.empty()) throw std::invalid_argument("empty grid");
        std::vector<std::vector<Rat>> pts;
        std::vector<Rat> cur(axes.size());
        std::function<void(std::size_t)> rec = [&](std::size_t i) {
            if (i == axes.size()) {
                pts.push_back(cur);
                return;
            }
            const Axis& ax = axes[i];
            if (ax.count == 0) throw std::invalid_argument("grid axis with zero points");
            for (unsigned s = 0; s < ax.count; ++s) {
                cur[i] = ax.count == 1
                             ? ax.lo
                             : ax.lo + (ax.hi - ax.lo) * Rat(static_cast<long>(s)) /
                                   Rat(static_cast<long>(ax.count - 1));
                rec(i + 1);
            }
        };
        rec(0);
        return pts;
    }

    std::vector<double> spacing() const {
        std::vector<double> h;
        for (const Axis& ax : axes)
            h.push_back(ax.count <= 1 ? 1.0
                                      : rat_to_double((ax.hi - ax.lo)) / static_cast<double>(ax.count - 1));
        return h;
    }
};

struct ModelSample {
    std::vector<Rat> x;  // base point
    std::vector<Rat> y;  // chart invariants I_1..I_n at x
    std::vector<Rat> Y;  // coefficient invariants I_alpha at x, in alpha order
};

// Sampled image of phi_A: x -> (I(x), I_alpha(x)), with the exact fields
// embedded so comparisons can evaluate off the samples.
struct ModelSurface {
    std::size_t n = 0;
    unsigned order = 0;
    std::vector<std::string> chart_labels;
    std::vector<MultiIndex> alpha_order;
    std::vector<ModelSample> samples;
    bool has_fields = false;
    std::vector<Polynomial> chart_fields;
    std::vector<Polynomial> alpha_fields;  // parallel to alpha_order
};

inline ModelSurface model_surface(const DiffOperator& A, const std::vector<InvariantField>& I,
                                  const std::vector<std::vector<Rat>>& grid) {
    if (grid.empty()) throw std::invalid_argument("model surface needs a nonempty grid");
    std::size_t n = A.dim();
    auto coeffs = model_coefficients(A, I);  // throws NotAdjusted on symbolic degeneracy

    Mat<Polynomial> jac(n, std::vector<Polynomial>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) jac[i][j] = I[i].value.promoted(n).partial(j);
    Polynomial jdet = poly_det(jac);

    ModelSurface S;
    S.n = n;
    S.order = A.order();
    for (const auto& f : I) S.chart_labels.push_back(f.label.str());
    for (const auto& [alpha, v] : coeffs) {
        S.alpha_order.push_back(alpha);
        S.alpha_fields.push_back(v);
    }
    for (const auto& f : I) S.chart_fields.push_back(f.value.promoted(n));
    S.has_fields = true;

    for (const auto& x : grid) {
        if (x.size() != n) throw std::invalid_argument("grid point dimension mismatch");
        if (rat_is_zero(jdet.eval(x))) {
            std::string s = "(";
            for (std::size_t i = 0; i < x.size(); ++i) s += (i ? "," : "") + rat_str(x[i]);
            throw NotAdjusted("invariant chart degenerates at sample point " + s + ")");
        }
        ModelSample smp;
        smp.x = x;
        for (const auto& f : S.chart_fields) smp.y.push_back(f.eval(x));
        for (const auto& f : S.alpha_fields) smp.Y.push_back(f.eval(x));
        S.samples.push_back(std::move(smp));
    }
    std::sort(S.samples.begin(), S.samples.end(), [](const ModelSample& a, const ModelSample& b) {
        for (std::size_t i = 0; i < a.y.size(); ++i) {
            if (a.y[i] < b.y[i]) return true;
            if (b.y[i] < a.y[i]) return false;
        }
        return false;
    });
    for (std::size_t i = 0; i + 1 < S.samples.size(); ++i)
        if (S.samples[i].y == S.samples[i + 1].y)
            throw NotAdjusted("two sample points share the same invariant coordinates");
    return S;
}

struct EquivalenceVerdict {
    enum class Status { ModelsCoincide, ModelsDistinct, Inconclusive };
    Status status = Status::Inconclusive;
    std::string reason;
    // Distinct witness.
    std::vector<double> witness_y;
    int witness_alpha = -1;  // index into alpha_order, -1 = none
    double deviation = 0;
    // Coincide evidence.
    double max_model_deviation = 0;
    double omega_residual = 0;
    std::vector<std::pair<std::vector<double>, std::vector<double>>> psi_samples;
};

namespace detail {

inline std::vector<double> to_dvec(const std::vector<Rat>& v) {
    std::vector<double> d(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) d[i] = rat_to_double(v[i]);
    return d;
}

inline double dist2(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
    return s;
}

// Newton inversion of the polynomial chart map I(x) = y.
inline std::optional<std::vector<double>> invert_chart(const std::vector<Polynomial>& fields,
                                                       const std::vector<double>& y,
                                                       std::vector<double> x0) {
    std::size_t n = fields.size();
    Mat<Polynomial> jac(n, std::vector<Polynomial>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) jac[i][j] = fields[i].partial(j);
    std::vector<double> x = std::move(x0);
    for (int iter = 0; iter < 60; ++iter) {
        std::vector<double> r(n);
        double rn = 0;
        for (std::size_t i = 0; i < n; ++i) {
            r[i] = fields[i].eval_double(x) - y[i];
            rn = std::max(rn, std::fabs(r[i]) / (1.0 + std::fabs(y[i])));
        }
        if (rn < 1e-13) return x;
        DMat J = dmat_zero(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) J[i][j] = jac[i][j].eval_double(x);
        std::vector<double> step;
        try {
            step = dmat_solve(J, r);
        } catch (const std::domain_error&) {
            return std::nullopt;
        }
        for (std::size_t j = 0; j < n; ++j) x[j] -= step[j];
    }
    return std::nullopt;
}

// Local affine least-squares machinery for sampled clouds. Anisotropic grids
// can make the nearest few points collinear, so the stencil grows until the
// normal matrix is genuinely well conditioned.
struct AffineFit {
    std::vector<double> constant;  // fitted values at the center, per component
    DMat slope;                    // d(value)/d(x), rows = components
};

inline std::optional<AffineFit> fit_affine_cloud(
    const std::vector<std::vector<double>>& xs, const std::vector<std::vector<double>>& values,
    const std::vector<double>& center) {
    std::size_t n = center.size();
    if (xs.empty() || xs.size() != values.size()) return std::nullopt;
    std::size_t comps = values.front().size();
    std::vector<std::pair<double, std::size_t>> byDist;
    for (std::size_t i = 0; i < xs.size(); ++i) byDist.emplace_back(dist2(xs[i], center), i);
    std::sort(byDist.begin(), byDist.end());

    auto well_conditioned = [&](DMat m) {
        // pivot ratio check on the (n+1)x(n+1) normal matrix
        double scale = 0;
        for (std::size_t i = 0; i <= n; ++i) scale = std::max(scale, std::fabs(m[i][i]));
        if (scale == 0) return false;
        for (std::size_t col = 0; col <= n; ++col) {
            std::size_t piv = col;
            for (std::size_t i = col + 1; i <= n; ++i)
                if (std::fabs(m[i][col]) > std::fabs(m[piv][col])) piv = i;
            if (std::fabs(m[piv][col]) < 1e-7 * scale) return false;
            std::swap(m[piv], m[col]);
            for (std::size_t i = col + 1; i <= n; ++i) {
                double f = m[i][col] / m[col][col];
                for (std::size_t j = col; j <= n; ++j) m[i][j] -= f * m[col][j];
            }
        }
        return true;
    };

    for (std::size_t k = std::min(xs.size(), n + 2); k <= xs.size(); ++k) {
        DMat A = dmat_zero(k, n + 1);
        for (std::size_t r = 0; r < k; ++r) {
            A[r][0] = 1.0;
            for (std::size_t j = 0; j < n; ++j) A[r][j + 1] = xs[byDist[r].second][j] - center[j];
        }
        DMat AT = dmat_transpose(A);
        DMat ATA = dmat_mul(AT, A);
        if (!well_conditioned(ATA)) {
            if (k == xs.size()) return std::nullopt;
            continue;
        }
        AffineFit fit;
        fit.slope = dmat_zero(comps, n);
        for (std::size_t comp = 0; comp < comps; ++comp) {
            std::vector<double> rhs(n + 1, 0.0);
            for (std::size_t r = 0; r < k; ++r)
                for (std::size_t j = 0; j <= n; ++j)
                    rhs[j] += AT[j][r] * values[byDist[r].second][comp];
            std::vector<double> cfit;
            try {
                cfit = dmat_solve(ATA, rhs);
            } catch (const std::domain_error&) {
                return std::nullopt;
            }
            fit.constant.push_back(cfit[0]);
            for (std::size_t j = 0; j < n; ++j) fit.slope[comp][j] = cfit[j + 1];
        }
        return fit;
    }
    return std::nullopt;
}

// Local affine interpolation of Y(y) on the sample cloud; used when no
// embedded fields are available.
inline std::optional<std::vector<double>> interpolate_cloud(const ModelSurface& S,
                                                            const std::vector<double>& y) {
    if (S.samples.size() < S.n + 2) return std::nullopt;
    std::vector<std::vector<double>> ys, Ys;
    for (const auto& s : S.samples) {
        ys.push_back(to_dvec(s.y));
        Ys.push_back(to_dvec(s.Y));
    }
    auto fit = fit_affine_cloud(ys, Ys, y);
    if (!fit) return std::nullopt;
    return fit->constant;
}

}  // namespace detail

// Canonical symplectic matrix on the base, (x_1..x_m, y_1..y_m) split.
inline DMat base_omega(std::size_t n) { return dmat_from_rat(symplectic_form_matrix(n / 2)); }

// Compares two sampled models over the shared invariant-coordinate region and,
// when the surfaces agree, reconstructs psi = phi_B^{-1} o phi_A on the
// samples and checks the symplectic Lie condition psi^* omega = omega with
// central-difference Jacobians.
inline EquivalenceVerdict model_compare(const ModelSurface& SA, const ModelSurface& SB, double tol,
                                        double jacobian_step = 1e-4) {
    if (SA.n != SB.n) throw LabelError("model surfaces have different base dimension");
    if (SA.chart_labels != SB.chart_labels) throw LabelError("model surfaces use different charts");
    if (SA.alpha_order != SB.alpha_order) throw LabelError("model surfaces list different coefficients");
    EquivalenceVerdict v;
    if (SA.samples.empty() || SB.samples.empty()) {
        v.reason = "empty sample set";
        return v;
    }
    std::size_t n = SA.n;

    // Typical spacing of the y clouds, for snapping and overlap thresholds.
    auto cloud_scale = [&](const ModelSurface& S) {
        double lo = std::numeric_limits<double>::infinity(), hi = -lo;
        for (const auto& s : S.samples)
            for (const auto& yi : s.y) {
                double d = rat_to_double(yi);
                lo = std::min(lo, d);
                hi = std::max(hi, d);
            }
        return std::max(1.0, hi - lo);
    };
    double scale = std::max(cloud_scale(SA), cloud_scale(SB));
    double snap = 1e-9 * scale;
    double overlap = 0.75 * scale;

    std::size_t matched = 0, skipped = 0;
    double maxdev = 0;
    auto one_direction = [&](const ModelSurface& A, const ModelSurface& B,
                             bool record_psi) -> std::optional<EquivalenceVerdict> {
        for (const auto& sa : A.samples) {
            std::vector<double> y = detail::to_dvec(sa.y);
            double bestd = std::numeric_limits<double>::infinity();
            std::size_t bestj = 0;
            for (std::size_t j = 0; j < B.samples.size(); ++j) {
                double d2 = detail::dist2(detail::to_dvec(B.samples[j].y), y);
                if (d2 < bestd) {
                    bestd = d2;
                    bestj = j;
                }
            }
            bestd = std::sqrt(bestd);
            std::vector<double> YB;
            std::optional<std::vector<double>> xB;
            if (bestd <= snap) {
                YB = detail::to_dvec(B.samples[bestj].Y);
                xB = detail::to_dvec(B.samples[bestj].x);
            } else if (B.has_fields) {
                xB = detail::invert_chart(B.chart_fields, y, detail::to_dvec(B.samples[bestj].x));
                if (xB) {
                    for (const auto& f : B.alpha_fields) YB.push_back(f.eval_double(*xB));
                } else {
                    ++skipped;
                    continue;
                }
            } else if (bestd <= overlap) {
                auto interp = detail::interpolate_cloud(B, y);
                if (!interp) {
                    ++skipped;
                    continue;
                }
                YB = *interp;
            } else {
                ++skipped;
                continue;
            }
            ++matched;
            for (std::size_t a = 0; a < sa.Y.size(); ++a) {
                double ya = rat_to_double(sa.Y[a]);
                double dev = std::fabs(ya - YB[a]) / (1.0 + std::fabs(ya));
                maxdev = std::max(maxdev, dev);
                if (dev > tol) {
                    EquivalenceVerdict d;
                    d.status = EquivalenceVerdict::Status::ModelsDistinct;
                    d.witness_y = y;
                    d.witness_alpha = static_cast<int>(a);
                    d.deviation = dev;
                    d.reason = "coefficient invariant deviates on the shared chart region";
                    return d;
                }
            }
            if (record_psi && xB) v.psi_samples.emplace_back(detail::to_dvec(sa.x), *xB);
        }
        return std::nullopt;
    };

    if (auto d = one_direction(SA, SB, true)) return *d;
    if (auto d = one_direction(SB, SA, false)) return *d;
    if (matched == 0 || v.psi_samples.empty()) {
        v.reason = "insufficient overlap between the sampled models";
        return v;
    }
    v.max_model_deviation = maxdev;

    // Lie condition for the symplectic pseudogroup: psi^* omega = omega.
    if (n % 2 != 0) {
        v.reason = "base dimension is odd; no symplectic Lie check applies";
        return v;
    }
    DMat Om = base_omega(n);
    double omega_residual = 0;
    bool jac_ok = false;
    if (SA.has_fields && SB.has_fields) {
        // psi(x) = invert_B(I_A(x)); central differences with h scaled by the
        // sample spacing.
        double spacing = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i + 1 < SA.samples.size(); ++i)
            spacing = std::min(spacing, std::sqrt(detail::dist2(detail::to_dvec(SA.samples[i].x),
                                                                detail::to_dvec(SA.samples[i + 1].x))));
        if (!std::isfinite(spacing) || spacing <= 0) spacing = 1.0;
        double h = jacobian_step * spacing;
        auto psi_at = [&](const std::vector<double>& x,
                          const std::vector<double>& seed) -> std::optional<std::vector<double>> {
            std::vector<double> y(n);
            for (std::size_t i = 0; i < n; ++i) y[i] = SA.chart_fields[i].eval_double(x);
            return detail::invert_chart(SB.chart_fields, y, seed);
        };
        for (const auto& [xa, xb] : v.psi_samples) {
            DMat J = dmat_zero(n, n);
            bool ok = true;
            for (std::size_t j = 0; j < n && ok; ++j) {
                std::vector<double> xp = xa, xm = xa;
                xp[j] += h;
                xm[j] -= h;
                auto pp = psi_at(xp, xb);
                auto pm = psi_at(xm, xb);
                if (!pp || !pm) {
                    ok = false;
                    break;
                }
                for (std::size_t i = 0; i < n; ++i) J[i][j] = ((*pp)[i] - (*pm)[i]) / (2 * h);
            }
            if (!ok) continue;
            jac_ok = true;
            DMat lhs = dmat_mul(dmat_transpose(J), dmat_mul(Om, J));
            double r = 0;
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j) {
                    double diff = lhs[i][j] - Om[i][j];
                    r += diff * diff;
                }
            omega_residual = std::max(omega_residual, std::sqrt(r));
        }
    } else {
        // Affine fit of the matched pairs around each sample.
        if (v.psi_samples.size() >= n + 2) {
            std::vector<std::vector<double>> xs, images;
            for (const auto& [xa, xb] : v.psi_samples) {
                xs.push_back(xa);
                images.push_back(xb);
            }
            for (std::size_t c = 0; c < v.psi_samples.size(); ++c) {
                auto fit = detail::fit_affine_cloud(xs, images, v.psi_samples[c].first);
                if (!fit) continue;
                jac_ok = true;
                const DMat& J = fit->slope;
                DMat lhs = dmat_mul(dmat_transpose(J), dmat_mul(Om, J));
                double r = 0;
                for (std::size_t i = 0; i < n; ++i)
                    for (std::size_t j = 0; j < n; ++j) {
                        double diff = lhs[i][j] - Om[i][j];
                        r += diff * diff;
                    }
                omega_residual = std::max(omega_residual, std::sqrt(r));
            }
        }
    }
    if (!jac_ok) {
        v.reason = "could not estimate the Jacobian of psi on the samples";
        return v;
    }
    v.omega_residual = omega_residual;
    if (omega_residual <= tol) {
        v.status = EquivalenceVerdict::Status::ModelsCoincide;
    } else {
        v.status = EquivalenceVerdict::Status::Inconclusive;
        v.reason = "models coincide on samples but psi fails the symplectic Lie condition";
    }
    return v;
}

}  // namespace sympleq
