#pragma once

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "sympleq/exact_linalg.hpp"
#include "sympleq/fiber_poly.hpp"
#include "sympleq/sp_action.hpp"
#include "sympleq/transvectant.hpp"

namespace sympleq {

struct LabelError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

enum class InvariantKind { Symplectic, Metric };

// Trace-invariant labels. Traces are taken with the 2^{-r} normalization of
// the symplectic transvectant; XTr uses the unscaled Hamiltonian field.
//   J:k,q    Tr(A_{P,q}^k),  A_{P,q}: Q -> [P,Q]_{p/2} on S^q      (p even)
//   I:l,k,q  Tr(A_{P,l}^k),  A_{P,l}: Q -> [[P,P]_{2l}, Q]_{p-2l} on S^q
//   N:k,q    Tr(B_{P,q}^k),  B_{P,q}: Q -> (P,Q)_{p/2} on S^q      (p even)
//   M:l,k,q  Tr(B_{P,l}^k),  B_{P,l}: Q -> ((P,P)_l, Q)_{p-l} on S^q
//   K:p      (P,P)_p
//   XTr:k    Tr(X_P^k) on S^1, X_P the Hamiltonian derivation     (p = 2)
//   orbit    dim of the infinitesimal sp-orbit of P (exact path only)
struct InvariantLabel {
    enum class Family { J, I, N, M, K, XTr, OrbitDim, Coord };
    Family family;
    unsigned l = 0;
    unsigned k = 0;
    unsigned q = 0;

    static InvariantLabel makeJ(unsigned k, unsigned q) { return {Family::J, 0, k, q}; }
    static InvariantLabel makeI(unsigned l, unsigned k, unsigned q) { return {Family::I, l, k, q}; }
    static InvariantLabel makeN(unsigned k, unsigned q) { return {Family::N, 0, k, q}; }
    static InvariantLabel makeM(unsigned l, unsigned k, unsigned q) { return {Family::M, l, k, q}; }
    static InvariantLabel makeK(unsigned p) { return {Family::K, 0, 0, p}; }
    static InvariantLabel makeXTr(unsigned k) { return {Family::XTr, 0, k, 1}; }
    static InvariantLabel orbit() { return {Family::OrbitDim, 0, 0, 0}; }
    static InvariantLabel coord(unsigned i) { return {Family::Coord, 0, 0, i}; }  // 1-based

    bool operator==(const InvariantLabel&) const = default;

    std::string str() const {
        switch (family) {
            case Family::J: return "J:" + std::to_string(k) + "," + std::to_string(q);
            case Family::I:
                return "I:" + std::to_string(l) + "," + std::to_string(k) + "," + std::to_string(q);
            case Family::N: return "N:" + std::to_string(k) + "," + std::to_string(q);
            case Family::M:
                return "M:" + std::to_string(l) + "," + std::to_string(k) + "," + std::to_string(q);
            case Family::K: return "K:" + std::to_string(q);
            case Family::XTr: return "XTr:" + std::to_string(k);
            case Family::OrbitDim: return "orbit";
            case Family::Coord: return "x" + std::to_string(q);
        }
        return "?";
    }

    static InvariantLabel parse(const std::string& s);
};

// The four operator-matrix modes. Even modes act by the half-degree
// transvectant of P itself, general modes by the self-transvectant P_l.
struct OperatorMode {
    enum class Kind { SymplecticEven, SymplecticGeneral, MetricEven, MetricGeneral };
    Kind kind;
    unsigned l = 0;  // general modes only
    unsigned q = 0;
};

template <class R>
struct TransvectantOperatorMatrix {
    std::vector<MultiIndex> basis;  // monomial_basis(d, q)
    Mat<R> matrix;                  // column j = expansion of the image of basis[j]
};

template <class R>
TransvectantOperatorMatrix<R> transvectant_operator_matrix(const FiberPoly<R>& P,
                                                           const OperatorMode& mode) {
    const unsigned p = P.degree();
    const std::size_t d = P.dim();
    unsigned q = mode.q;
    FiberPoly<R> left = P;
    int r = 0;
    using K = OperatorMode::Kind;
    switch (mode.kind) {
        case K::SymplecticEven:
            if (p % 2 != 0) throw LabelError("even mode requires a symbol of even degree");
            if (2 * q < p) throw LabelError("even mode requires 2q >= p");
            r = static_cast<int>(p / 2);
            break;
        case K::SymplecticGeneral:
            if (2 * mode.l >= p) throw LabelError("general mode requires 2l < p");
            if (q + 2 * mode.l < p) throw LabelError("general mode requires q >= p - 2l");
            left = symplectic_transvectant(P, P, static_cast<int>(2 * mode.l));
            r = static_cast<int>(p - 2 * mode.l);
            break;
        case K::MetricEven:
            if (p % 2 != 0) throw LabelError("even mode requires a symbol of even degree");
            if (2 * q < p) throw LabelError("even mode requires 2q >= p");
            r = static_cast<int>(p / 2);
            break;
        case K::MetricGeneral:
            if (mode.l >= p) throw LabelError("metric general mode requires l < p");
            if (q + mode.l < p) throw LabelError("metric general mode requires q >= p - l");
            left = metric_transvectant(P, P, static_cast<int>(mode.l));
            r = static_cast<int>(p - mode.l);
            break;
    }
    bool metric = mode.kind == K::MetricEven || mode.kind == K::MetricGeneral;

    TransvectantOperatorMatrix<R> out;
    out.basis = monomial_basis(d, q);
    std::map<MultiIndex, std::size_t, GrlexLess> pos;
    for (std::size_t i = 0; i < out.basis.size(); ++i) pos.emplace(out.basis[i], i);
    out.matrix = mat_zero<R>(out.basis.size(), out.basis.size());
    for (std::size_t j = 0; j < out.basis.size(); ++j) {
        FiberPoly<R> b = FiberPoly<R>::monomial(d, out.basis[j], ring_one<R>());
        FiberPoly<R> img = metric ? metric_transvectant(left, b, r) : symplectic_transvectant(left, b, r);
        if (img.degree() != q && !img.is_zero())
            throw std::logic_error("operator matrix image has unexpected degree");
        for (const auto& [m, c] : img.terms()) out.matrix[pos.at(m)][j] = c;
    }
    return out;
}

template <class R>
struct SignatureEntry {
    InvariantLabel label;
    R value;
};

// Generic (ring-valued) variants of the Hamiltonian field and the matrix of a
// derivation on S^q; labels must evaluate over doubles and polynomials too.
template <class R>
Mat<R> hamiltonian_field_t(const FiberPoly<R>& Q2) {
    if (Q2.degree() != 2) throw std::invalid_argument("hamiltonian derivation requires a degree-2 polynomial");
    if (Q2.dim() % 2 != 0) throw std::invalid_argument("hamiltonian derivation requires even dimension");
    std::size_t n = Q2.dim() / 2, d = Q2.dim();
    Mat<R> C = mat_zero<R>(d, d);
    for (std::size_t i = 0; i < n; ++i) {
        FiberPoly<R> dy = Q2.partial(n + i);
        FiberPoly<R> dx = Q2.partial(i);
        for (std::size_t b = 0; b < d; ++b) {
            C[i][b] = C[i][b] + dy.coeff(MultiIndex::unit(d, b));
            C[n + i][b] = C[n + i][b] + ring_neg(dx.coeff(MultiIndex::unit(d, b)));
        }
    }
    return C;
}

template <class R>
Mat<R> derivation_matrix_on_degree_t(const Mat<R>& C, unsigned q) {
    std::size_t d = C.size();
    std::vector<MultiIndex> basis = monomial_basis(d, q);
    std::map<MultiIndex, std::size_t, GrlexLess> pos;
    for (std::size_t i = 0; i < basis.size(); ++i) pos.emplace(basis[i], i);
    Mat<R> M = mat_zero<R>(basis.size(), basis.size());
    for (std::size_t j = 0; j < basis.size(); ++j) {
        FiberPoly<R> img = derivation_apply(C, FiberPoly<R>::monomial(d, basis[j], ring_one<R>()));
        for (const auto& [m, c] : img.terms()) M[pos.at(m)][j] = c;
    }
    return M;
}

// Evaluates one trace label on P. OrbitDim is handled by the exact-path
// signature builder, not here.
template <class R>
R evaluate_label(const FiberPoly<R>& P, const InvariantLabel& lab) {
    using F = InvariantLabel::Family;
    const unsigned p = P.degree();
    switch (lab.family) {
        case F::J: {
            auto op = transvectant_operator_matrix(P, {OperatorMode::Kind::SymplecticEven, 0, lab.q});
            return mat_trace_power(op.matrix, lab.k);
        }
        case F::I: {
            auto op = transvectant_operator_matrix(P, {OperatorMode::Kind::SymplecticGeneral, lab.l, lab.q});
            return mat_trace_power(op.matrix, lab.k);
        }
        case F::N: {
            auto op = transvectant_operator_matrix(P, {OperatorMode::Kind::MetricEven, 0, lab.q});
            return mat_trace_power(op.matrix, lab.k);
        }
        case F::M: {
            auto op = transvectant_operator_matrix(P, {OperatorMode::Kind::MetricGeneral, lab.l, lab.q});
            return mat_trace_power(op.matrix, lab.k);
        }
        case F::K: {
            if (lab.q != p) throw LabelError("K pairing requires its order to equal deg P");
            FiberPoly<R> v = metric_transvectant(P, P, static_cast<int>(p));
            return v.coeff(MultiIndex(P.dim()));
        }
        case F::XTr: {
            if (p != 2) throw LabelError("XTr labels require a degree-2 symbol");
            Mat<R> X = derivation_matrix_on_degree_t<R>(hamiltonian_field_t(P), 1);
            return mat_trace_power(X, lab.k);
        }
        case F::OrbitDim:
            throw LabelError("orbit dimension is not a trace label");
        case F::Coord:
            throw LabelError("coordinate chart labels are not trace labels");
    }
    throw LabelError("unknown label");
}

template <class R>
std::vector<SignatureEntry<R>> trace_invariants(const FiberPoly<R>& P,
                                                const std::vector<InvariantLabel>& labels) {
    if (labels.empty()) throw LabelError("empty invariant label set");
    std::vector<SignatureEntry<R>> out;
    out.reserve(labels.size());
    for (const InvariantLabel& lab : labels) out.push_back({lab, evaluate_label(P, lab)});
    return out;
}

struct SignatureConfig {
    InvariantKind kind = InvariantKind::Symplectic;
    unsigned k_cap = 8;
    // Separate cap for the double path; with extended-precision trace powers
    // the full range is accurate to ~1e-9 relative on norm-1 exp-chart moves.
    unsigned numeric_k_cap = 8;
    bool include_orbit_dim = true;  // exact symplectic path only
};

// Deterministic default label set for a degree-p symbol in dimension d.
// Symplectic: all admissible J:k,q and I:l,k,q with q in {ceil(p/2), p} and
// k <= min(k_cap, C(d+q-1, q)); degree-2 symbols additionally get the even
// Hamiltonian traces XTr:2j. An operator built from a transvectant of odd
// order is skew for the degree-q pairing, so its odd-power traces vanish
// identically; those structurally-zero labels are skipped. Metric:
// analogous M/N families plus K:p.
inline std::vector<InvariantLabel> default_labels(std::size_t d, unsigned p,
                                                  const SignatureConfig& cfg = {}) {
    std::vector<InvariantLabel> labels;
    if (p == 0) return labels;
    std::vector<unsigned> qs;
    qs.push_back((p + 1) / 2);
    if (p != (p + 1) / 2) qs.push_back(p);
    auto kmax = [&](unsigned q) {
        Int bound = binomial(static_cast<unsigned>(d) + q - 1, q);
        Int cap = Int(cfg.k_cap);
        Int m = bound < cap ? bound : cap;
        return static_cast<unsigned>(m.get_ui());
    };
    if (cfg.kind == InvariantKind::Symplectic) {
        for (unsigned q : qs) {
            if (p % 2 == 0 && 2 * q >= p) {
                unsigned step = (p / 2) % 2 == 1 ? 2 : 1;
                for (unsigned k = step; k <= kmax(q); k += step)
                    labels.push_back(InvariantLabel::makeJ(k, q));
            }
            for (unsigned twol = (p > q ? p - q : 0); twol + 1 <= p; ++twol) {
                if (twol % 2 != 0) continue;
                unsigned step = (p - twol) % 2 == 1 ? 2 : 1;
                for (unsigned k = step; k <= kmax(q); k += step)
                    labels.push_back(InvariantLabel::makeI(twol / 2, k, q));
            }
        }
        if (p == 2) {
            // Quadric symbols: even power traces of the Hamiltonian matrix
            // separate regular orbits.
            std::size_t n = d / 2;
            for (unsigned j = 1; j <= std::max<std::size_t>(2, n); ++j)
                labels.push_back(InvariantLabel::makeXTr(2 * j));
        }
    } else {
        for (unsigned q : qs) {
            if (p % 2 == 0 && 2 * q >= p)
                for (unsigned k = 1; k <= kmax(q); ++k) labels.push_back(InvariantLabel::makeN(k, q));
            for (unsigned l = (p > q ? p - q : 0); l + 1 <= p; ++l)
                for (unsigned k = 1; k <= kmax(q); ++k)
                    labels.push_back(InvariantLabel::makeM(l, k, q));
        }
        labels.push_back(InvariantLabel::makeK(p));
    }
    return labels;
}

// Canonical ordered list of invariant values of a symbol. The exact
// symplectic path appends the orbit dimension as the final entry.
inline std::vector<SignatureEntry<Rat>> invariant_signature(const HomogeneousPoly& P,
                                                            const SignatureConfig& cfg = {}) {
    std::vector<InvariantLabel> labels = default_labels(P.dim(), P.degree(), cfg);
    std::vector<SignatureEntry<Rat>> sig =
        labels.empty() ? std::vector<SignatureEntry<Rat>>{} : trace_invariants(P, labels);
    if (cfg.kind == InvariantKind::Symplectic && cfg.include_orbit_dim)
        sig.push_back({InvariantLabel::orbit(), Rat(static_cast<long>(sp_orbit_dimension(P)))});
    if (sig.empty()) throw LabelError("empty invariant label set");
    return sig;
}

inline std::vector<SignatureEntry<double>> invariant_signature_numeric(const NumericPoly& P,
                                                                       const SignatureConfig& cfg = {}) {
    SignatureConfig c = cfg;
    c.include_orbit_dim = false;
    c.k_cap = std::min(c.k_cap, c.numeric_k_cap);
    std::vector<InvariantLabel> labels = default_labels(P.dim(), P.degree(), c);
    if (labels.empty()) throw LabelError("empty invariant label set");
    return trace_invariants(P, labels);
}

// Gram matrix of the degree-p pairing on monomial_basis(d, p): [.,.]_p for the
// symplectic kind ((d even), (.,.)_p for the metric kind.
inline Mat<Rat> pairing_form(std::size_t d, unsigned p, InvariantKind kind) {
    if (p < 1) throw std::invalid_argument("pairing order must be >= 1");
    std::vector<MultiIndex> basis = monomial_basis(d, p);
    Mat<Rat> G = mat_zero<Rat>(basis.size(), basis.size());
    for (std::size_t i = 0; i < basis.size(); ++i)
        for (std::size_t j = 0; j < basis.size(); ++j) {
            HomogeneousPoly a = HomogeneousPoly::monomial(d, basis[i], Rat(1));
            HomogeneousPoly b = HomogeneousPoly::monomial(d, basis[j], Rat(1));
            HomogeneousPoly v = kind == InvariantKind::Symplectic
                                    ? symplectic_transvectant(a, b, static_cast<int>(p))
                                    : metric_transvectant(a, b, static_cast<int>(p));
            G[i][j] = v.coeff(MultiIndex(d));
        }
    return G;
}

inline InvariantLabel InvariantLabel::parse(const std::string& s) {
    auto nums = [&](const std::string& body, std::size_t want) {
        std::vector<unsigned> v;
        std::size_t pos = 0;
        while (pos < body.size()) {
            std::size_t next = body.find(',', pos);
            std::string tok = body.substr(pos, next == std::string::npos ? next : next - pos);
            v.push_back(static_cast<unsigned>(std::stoul(tok)));
            if (next == std::string::npos) break;
            pos = next + 1;
        }
        if (v.size() != want) throw LabelError("malformed invariant label: " + s);
        return v;
    };
    if (s == "orbit") return orbit();
    if (s.size() > 1 && s[0] == 'x') {
        try {
            return coord(static_cast<unsigned>(std::stoul(s.substr(1))));
        } catch (const std::logic_error&) {
            throw LabelError("malformed invariant label: " + s);
        }
    }
    std::size_t colon = s.find(':');
    if (colon == std::string::npos) throw LabelError("malformed invariant label: " + s);
    std::string fam = s.substr(0, colon), body = s.substr(colon + 1);
    try {
        if (fam == "J") { auto v = nums(body, 2); return makeJ(v[0], v[1]); }
        if (fam == "I") { auto v = nums(body, 3); return makeI(v[0], v[1], v[2]); }
        if (fam == "N") { auto v = nums(body, 2); return makeN(v[0], v[1]); }
        if (fam == "M") { auto v = nums(body, 3); return makeM(v[0], v[1], v[2]); }
        if (fam == "K") { auto v = nums(body, 1); return makeK(v[0]); }
        if (fam == "XTr") { auto v = nums(body, 1); return makeXTr(v[0]); }
    } catch (const std::logic_error&) {
        throw LabelError("malformed invariant label: " + s);
    }
    throw LabelError("unknown invariant label family: " + s);
}

}  // namespace sympleq
