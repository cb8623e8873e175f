#include "doctest.h"

#include <random>

#include "sympleq/match.hpp"
#include "sympleq/numeric.hpp"
#include "sympleq/trace_invariants.hpp"
#include "support/oracles.hpp"

using namespace sympleq;
using namespace sympleq::testing;

namespace {
HomogeneousPoly mono(std::size_t d, std::initializer_list<unsigned> e, long num, long den = 1) {
    return HomogeneousPoly::monomial(d, MultiIndex(e), rat_of(num, den));
}

NumericPoly act_numeric(const DMat& g, const NumericPoly& P) {
    return substitute_linear(P, dmat_inverse(g));
}
}  // namespace

TEST_SUITE_BEGIN("invar");

TEST_CASE("operator matrix of x^2 y^2 on S^2 is diag(1,-2,1)") {
    HomogeneousPoly P = mono(2, {2, 2}, 1);
    // Independent recomputation from the expanded second-order formula:
    // [P,Q]_2 = (P_xx Q_yy - 2 P_xy Q_xy + P_yy Q_xx)/4 for n = 1.
    auto byhand = [&](const HomogeneousPoly& Q) {
        HomogeneousPoly pxx = P.partial(0).partial(0), pxy = P.partial(0).partial(1),
                        pyy = P.partial(1).partial(1);
        HomogeneousPoly qxx = Q.partial(0).partial(0), qxy = Q.partial(0).partial(1),
                        qyy = Q.partial(1).partial(1);
        return (pxx * qyy - qxy * pxy.scaled(Rat(2)) + pyy * qxx).scaled(Rat(1, 4));
    };
    auto op = transvectant_operator_matrix(P, {OperatorMode::Kind::SymplecticEven, 0, 2});
    std::vector<MultiIndex> basis = monomial_basis(2, 2);
    for (std::size_t j = 0; j < basis.size(); ++j) {
        HomogeneousPoly img = byhand(HomogeneousPoly::monomial(2, basis[j], Rat(1)));
        for (std::size_t i = 0; i < basis.size(); ++i)
            CHECK(op.matrix[i][j] == img.coeff(basis[i]));
    }
    CHECK(op.matrix[0][0] == Rat(1));
    CHECK(op.matrix[1][1] == Rat(-2));
    CHECK(op.matrix[2][2] == Rat(1));
    CHECK(op.matrix[0][1] == Rat(0));
    CHECK(mat_trace_power(op.matrix, 1) == Rat(0));
    CHECK(mat_trace_power(op.matrix, 2) == Rat(6));
}

TEST_CASE("operator matrix preconditions") {
    HomogeneousPoly P3 = mono(2, {2, 1}, 1);
    CHECK_THROWS_AS((void)transvectant_operator_matrix(P3, {OperatorMode::Kind::SymplecticEven, 0, 2}),
                    LabelError);
    HomogeneousPoly P4 = mono(2, {2, 2}, 1);
    CHECK_THROWS_AS((void)transvectant_operator_matrix(P4, {OperatorMode::Kind::SymplecticEven, 0, 1}),
                    LabelError);  // 2q < p
    CHECK_THROWS_AS((void)transvectant_operator_matrix(P4, {OperatorMode::Kind::SymplecticGeneral, 2, 4}),
                    LabelError);  // 2l >= p
}

TEST_CASE("metric even operator of x^4 acts only on x^2") {
    HomogeneousPoly P = mono(2, {4, 0}, 1);
    auto op = transvectant_operator_matrix(P, {OperatorMode::Kind::MetricEven, 0, 2});
    // single nonzero entry, on the x^2 diagonal
    int nonzero = 0;
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j)
            if (!rat_is_zero(op.matrix[i][j])) ++nonzero;
    CHECK(nonzero == 1);
    CHECK(op.matrix[0][0] == Rat(24));  // (x^4, x^2)_2 = 12x^2 * 2 = 24 x^2
}

TEST_CASE("trace invariants of x^2 y^2 and the zero symbol") {
    HomogeneousPoly P = mono(2, {2, 2}, 1);
    auto sig = trace_invariants(P, {InvariantLabel::makeJ(1, 2), InvariantLabel::makeJ(2, 2)});
    CHECK(sig[0].value == Rat(0));
    CHECK(sig[1].value == Rat(6));
    HomogeneousPoly Z(2, 4);
    auto zsig = trace_invariants(Z, default_labels(2, 4));
    for (const auto& e : zsig) CHECK(e.value == Rat(0));
    CHECK_THROWS_AS((void)trace_invariants(P, std::vector<InvariantLabel>{}), LabelError);
}

TEST_CASE("exact invariance of signatures under integer shears") {
    std::mt19937_64 rng(201);
    for (int trial = 0; trial < 25; ++trial) {
        std::size_t n = trial % 2 ? 2 : 1;
        unsigned p = 3 + (trial % 2);
        HomogeneousPoly P = random_nonzero_poly(rng, 2 * n, p);
        LinearMap g = random_exact_symplectic(rng, n, 5);
        auto sa = invariant_signature(P);
        auto sb = invariant_signature(act(g, P));
        REQUIRE(sa.size() == sb.size());
        for (std::size_t i = 0; i < sa.size(); ++i) {
            CHECK(sa[i].label == sb[i].label);
            CHECK(sa[i].value == sb[i].value);
        }
    }
}

TEST_CASE("structurally-zero traces behind the even-k restriction") {
    // Operators built from odd-order transvectants are skew for the degree-q
    // pairing: their odd-power traces vanish identically. The default label
    // set skips those; pin the fact here.
    std::mt19937_64 rng(209);
    for (int trial = 0; trial < 10; ++trial) {
        std::size_t n = trial % 2 ? 2 : 1;
        HomogeneousPoly P = random_nonzero_poly(rng, 2 * n, 3);
        for (unsigned q : {2u, 3u}) {
            auto op = transvectant_operator_matrix(P, {OperatorMode::Kind::SymplecticGeneral, 1, q});
            // r = p - 2l = 1, odd
            CHECK(mat_trace_power(op.matrix, 1) == Rat(0));
            CHECK(mat_trace_power(op.matrix, 3) == Rat(0));
        }
    }
    for (const auto& lab : default_labels(2, 3))
        if (lab.family == InvariantLabel::Family::I) CHECK(lab.k % 2 == 0);
}

TEST_CASE("float invariance under exponential group elements") {
    std::mt19937_64 rng(202);
    std::uniform_real_distribution<double> coef(-1.0, 1.0);
    for (int trial = 0; trial < 12; ++trial) {
        std::size_t n = trial % 2 ? 2 : 1;
        HomogeneousPoly P = random_nonzero_poly(rng, 2 * n, 3);
        NumericPoly Pn = numeric_poly(P);
        auto gens = sp_basis(n);
        DMat M = dmat_zero(2 * n, 2 * n);
        for (const auto& gen : gens) {
            double c = coef(rng);
            DMat G = dmat_from_rat(chart_matrix(gen));
            for (std::size_t i = 0; i < 2 * n; ++i)
                for (std::size_t j = 0; j < 2 * n; ++j) M[i][j] += c * G[i][j];
        }
        // ||M|| <= 1 in Frobenius norm
        double norm = dmat_frobenius(M);
        if (norm > 1.0) M = dmat_scale(M, 1.0 / norm);
        DMat g = dmat_exp(M);
        auto sa = invariant_signature_numeric(Pn);
        auto sb = invariant_signature_numeric(act_numeric(g, Pn));
        REQUIRE(sa.size() == sb.size());
        for (std::size_t i = 0; i < sa.size(); ++i) {
            double scale = 1.0 + std::fabs(sa[i].value);
            CHECK(std::fabs(sa[i].value - sb[i].value) <= 1e-6 * scale);
        }
    }
}

TEST_CASE("sp orbit dimensions") {
    HomogeneousPoly C = mono(2, {3, 0}, 1) + mono(2, {0, 3}, 1);
    // generator images: b+ -> 6x^2y, b- -> -6xy^2, c -> 3x^3 - 3y^3
    auto gens = sp_basis(1);
    CHECK(derivation_apply(gens[0].field, C) == mono(2, {2, 1}, 6));
    CHECK(derivation_apply(gens[1].field, C) == mono(2, {1, 2}, -6));
    CHECK(derivation_apply(gens[2].field, C) == mono(2, {3, 0}, 3) + mono(2, {0, 3}, -3));
    CHECK(sp_orbit_dimension(C) == 3);
    CHECK(sp_orbit_dimension(HomogeneousPoly(2, 3)) == 0);
    CHECK(sp_orbit_dimension(mono(2, {3, 0}, 1)) == 2);

    std::mt19937_64 rng(203);
    for (int seed = 0; seed < 50; ++seed) {
        HomogeneousPoly P = random_nonzero_poly(rng, 4, 3);
        CHECK(sp_orbit_dimension(P) == 10);  // dim sp(4); codim 10 in the 20-dim S^3
    }
    CHECK(monomial_basis(4, 3).size() == 20);
}

TEST_CASE("stabilizer of a random cubic is zero dimensional") {
    // Small integer coefficients occasionally land on the degenerate stratum
    // (triple roots and the like), so the genericity claim is statistical.
    std::mt19937_64 rng(204);
    int regular = 0;
    const int draws = 20;
    for (int seed = 0; seed < draws; ++seed) {
        std::size_t n = seed % 2 ? 2 : 1;
        HomogeneousPoly P = random_nonzero_poly(rng, 2 * n, 3);
        auto res = solve_exact(orbit_span_matrix(P),
                               std::vector<Rat>(monomial_basis(2 * n, 3).size(), Rat(0)));
        if (res.kernel_dim == 0) ++regular;
    }
    CHECK(regular >= draws - 2);
}

TEST_CASE("quadric codimension equals n") {
    std::mt19937_64 rng(205);
    for (std::size_t n : {std::size_t(1), std::size_t(2)}) {
        std::size_t s2 = monomial_basis(2 * n, 2).size();
        int found = 0;
        for (int seed = 0; seed < 40 && found < 10; ++seed) {
            HomogeneousPoly P = random_poly(rng, 2 * n, 2);
            // nondegenerate quadrics only
            Mat<Rat> H = mat_zero<Rat>(2 * n, 2 * n);
            for (std::size_t i = 0; i < 2 * n; ++i)
                for (std::size_t j = 0; j < 2 * n; ++j) {
                    MultiIndex m = MultiIndex::unit(2 * n, i) + MultiIndex::unit(2 * n, j);
                    H[i][j] = i == j ? P.coeff(m) : P.coeff(m) / 2;
                }
            if (rat_is_zero(det_exact(H))) continue;
            ++found;
            CHECK(s2 - sp_orbit_dimension(P) == n);
        }
        CHECK(found >= 10);
    }
}

TEST_CASE("hamiltonian matrices") {
    HomogeneousPoly xy = mono(2, {1, 1}, 1);
    Mat<Rat> X = derivation_matrix_on_degree(hamiltonian_field(xy), 1);
    CHECK(X[0][0] == Rat(1));
    CHECK(X[1][1] == Rat(-1));
    CHECK(X[0][1] == Rat(0));
    CHECK(mat_trace_power(X, 2) == Rat(2));

    HomogeneousPoly rot = (mono(2, {2, 0}, 1) + mono(2, {0, 2}, 1)).scaled(Rat(1, 2));
    Mat<Rat> R = derivation_matrix_on_degree(hamiltonian_field(rot), 1);
    CHECK(mat_trace_power(R, 2) == Rat(-2));

    std::mt19937_64 rng(206);
    for (int trial = 0; trial < 20; ++trial) {
        std::size_t n = trial % 2 ? 2 : 1;
        HomogeneousPoly Q2 = random_poly(rng, 2 * n, 2);
        Mat<Rat> M = derivation_matrix_on_degree(hamiltonian_field(Q2), 1);
        // odd-power traces vanish on all of sp(2n)
        CHECK(mat_trace(M) == Rat(0));
        CHECK(mat_trace_power(M, 3) == Rat(0));
        if (!Q2.is_zero()) CHECK(mat_trace_power(M, 5) == Rat(0));
    }
    CHECK_THROWS_AS((void)hamiltonian_field(mono(2, {3, 0}, 1)), std::invalid_argument);
}

TEST_CASE("cubic invariants in dim 4 via the quadric self-transvectant") {
    // For a cubic P in dim 4, P2 = [P,P]_2 is a quadric and the operator
    // Q -> [P2,Q]_1 on S^1 is -X_{P2}/2; the even power traces computed by
    // the two routes must agree up to that factor, and both are invariant.
    std::mt19937_64 rng(210);
    for (int trial = 0; trial < 6; ++trial) {
        HomogeneousPoly P = random_nonzero_poly(rng, 4, 3);
        HomogeneousPoly P2 = symplectic_transvectant(P, P, 2);
        if (P2.is_zero()) continue;
        Mat<Rat> X = derivation_matrix_on_degree(hamiltonian_field(P2), 1);
        auto op = transvectant_operator_matrix(P, {OperatorMode::Kind::SymplecticGeneral, 1, 1});
        for (unsigned k : {2u, 4u}) {
            Rat lhs = mat_trace_power(op.matrix, k);
            Rat rhs = mat_trace_power(X, k);
            Rat scale = k == 2 ? rat_of(1, 4) : rat_of(1, 16);
            CHECK(lhs == rhs * scale);
        }
        LinearMap g = random_exact_symplectic(rng, 2, 5);
        auto opg = transvectant_operator_matrix(act(g, P),
                                                {OperatorMode::Kind::SymplecticGeneral, 1, 1});
        CHECK(mat_trace_power(opg.matrix, 2) == mat_trace_power(op.matrix, 2));
        CHECK(mat_trace_power(opg.matrix, 4) == mat_trace_power(op.matrix, 4));
    }
}

TEST_CASE("degree-2 default signature carries the even hamiltonian traces") {
    HomogeneousPoly P = mono(2, {1, 1}, 1);
    auto sig = invariant_signature(P);
    bool has2 = false, has4 = false, has_orbit = false;
    for (const auto& e : sig) {
        if (e.label == InvariantLabel::makeXTr(2)) {
            has2 = true;
            CHECK(e.value == Rat(2));
        }
        if (e.label == InvariantLabel::makeXTr(4)) has4 = true;
        if (e.label == InvariantLabel::orbit()) has_orbit = true;
    }
    CHECK(has2);
    CHECK(has4);
    CHECK(has_orbit);
}

TEST_CASE("equal polynomials give equal signatures; documented length for d=4 p=3") {
    std::mt19937_64 rng(207);
    HomogeneousPoly P = random_nonzero_poly(rng, 2, 3);
    auto s1 = invariant_signature(P);
    auto s2 = invariant_signature(P);
    REQUIRE(s1.size() == s2.size());
    for (std::size_t i = 0; i < s1.size(); ++i) CHECK(s1[i].value == s2[i].value);

    // Default config for (d=4, p=3): q in {2,3}; every admissible (l,q) has
    // odd transvectant order, so k runs over {2,4,6,8}: q=2 contributes 4
    // traces, q=3 contributes 8; plus the orbit dimension = 13 entries.
    auto labels = default_labels(4, 3);
    CHECK(labels.size() == 12);
    auto sig = invariant_signature(random_nonzero_poly(rng, 4, 3));
    CHECK(sig.size() == 13);
}

TEST_CASE("pairing forms") {
    // d=2, p=1: Gram of [.,.]_1 on [x, y] is [[0, 1/2], [-1/2, 0]].
    Mat<Rat> G1 = pairing_form(2, 1, InvariantKind::Symplectic);
    CHECK(G1[0][0] == Rat(0));
    CHECK(G1[0][1] == rat_of(1, 2));
    CHECK(G1[1][0] == rat_of(-1, 2));
    CHECK(!rat_is_zero(det_exact(G1)));

    for (unsigned p = 1; p <= 5; ++p) {
        Mat<Rat> G = pairing_form(2, p, InvariantKind::Symplectic);
        Mat<Rat> Gt = mat_transpose(G);
        for (std::size_t i = 0; i < G.size(); ++i)
            for (std::size_t j = 0; j < G.size(); ++j)
                CHECK(G[i][j] == (p % 2 == 1 ? -Gt[i][j] : Gt[i][j]));
        CHECK(!rat_is_zero(det_exact(G)));
    }

    // metric, d=2, p=2: diagonal-dominant symmetric positive definite
    Mat<Rat> M = pairing_form(2, 2, InvariantKind::Metric);
    CHECK(M == mat_transpose(M));
    CHECK(M[0][0] == Rat(4));
    CHECK(M[1][1] == Rat(2));
    CHECK(M[2][2] == Rat(4));
    CHECK(M[0][2] == Rat(0));
    CHECK(!rat_is_zero(det_exact(M)));
}

TEST_CASE("metric trace invariants are so-invariant") {
    std::mt19937_64 rng(208);
    LinearMap g{Mat<Rat>{{Rat(0), Rat(-1)}, {Rat(1), Rat(0)}}};  // rotation by 90 degrees
    SignatureConfig cfg;
    cfg.kind = InvariantKind::Metric;
    for (int trial = 0; trial < 10; ++trial) {
        HomogeneousPoly P = random_nonzero_poly(rng, 2, 4);
        auto labels = default_labels(2, 4, cfg);
        auto sa = trace_invariants(P, labels);
        auto sb = trace_invariants(act(g, P), labels);
        for (std::size_t i = 0; i < sa.size(); ++i) CHECK(sa[i].value == sb[i].value);
    }
}

TEST_SUITE_END();
