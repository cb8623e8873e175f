// Acceptance suite: one line per criterion, [PASS]/[FAIL], exit code equals
// the number of failed criteria. Every tolerance is pinned here.

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include "sympleq/json_io.hpp"
#include "sympleq/match.hpp"
#include "sympleq/model.hpp"
#include "sympleq/quantize.hpp"
#include "sympleq/trace_invariants.hpp"
#include "sympleq/transvectant.hpp"
#include "sympleq/wagner.hpp"
#include "support/oracles.hpp"

using namespace sympleq;
using namespace sympleq::testing;

namespace {

int g_failures = 0;
int g_only = 0;

struct Check {
    bool ok = true;
    std::string detail;
    void expect(bool cond, const std::string& what) {
        if (!cond && ok) {
            ok = false;
            detail = what;
        }
    }
};

void criterion(int number, const std::string& title, const std::function<void(Check&)>& body) {
    if (g_only != 0 && g_only != number) return;
    Check c;
    auto t0 = std::chrono::steady_clock::now();
    try {
        body(c);
    } catch (const std::exception& e) {
        c.expect(false, std::string("exception: ") + e.what());
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.1fs", secs);
    if (c.ok) {
        std::printf("[PASS] criterion %2d: %s (%s)\n", number, title.c_str(), buf);
    } else {
        ++g_failures;
        std::printf("[FAIL] criterion %2d: %s (%s) -- %s\n", number, title.c_str(), buf,
                    c.detail.c_str());
    }
    std::fflush(stdout);
}

Polynomial random_base_poly(std::mt19937_64& rng, std::size_t d, unsigned maxdeg) {
    std::uniform_int_distribution<int> coef(-3, 3);
    Polynomial p(d);
    for (unsigned k = 0; k <= maxdeg; ++k)
        for (const MultiIndex& m : monomial_basis(d, k)) p.add_term(m, Rat(coef(rng)));
    return p;
}

Connection random_connection(std::mt19937_64& rng, std::size_t d, unsigned gdeg) {
    Connection c(d);
    std::uniform_int_distribution<int> keep(0, 2);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t k = 0; k < d; ++k)
            for (std::size_t j = 0; j < d; ++j)
                if (keep(rng) == 0) c.set_gamma(i, k, j, random_base_poly(rng, d, gdeg));
    return c;
}

struct RunResult {
    int exit_code;
    std::string out;
};

RunResult run_cli(const std::string& args) {
    std::string cmd = std::string(SYMPLEQ_CLI_PATH) + " " + args + " 2>/dev/null";
    std::array<char, 4096> buf{};
    std::string out;
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) return {-1, ""};
    std::size_t got;
    while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), got);
    int status = pclose(pipe);
    return {WEXITSTATUS(status), out};
}

std::string g_tmp;

std::string write_tmp(const std::string& name, const std::string& content) {
    std::string path = g_tmp + "/" + name;
    io::write_file(path, content);
    return path;
}

SymTensorField shear_family(const HomogeneousPoly& sigma0, const Polynomial& t) {
    // sigma(a, xi) = sigma0(g(a)^{-1} xi) with g(a) the shear x += t(a) y.
    std::size_t d = sigma0.dim();
    Mat<Polynomial> ginv(d, std::vector<Polynomial>(d, Polynomial(d)));
    for (std::size_t i = 0; i < d; ++i) ginv[i][i] = Polynomial::constant(Rat(1), d);
    ginv[0][d / 2] = t.negated();
    SymTensorField out(d, sigma0.degree());
    for (const auto& [m, c] : sigma0.terms()) {
        SymTensorField term(d, 0);
        term.add_term(MultiIndex(d), Polynomial::scalar(c));
        for (std::size_t i = 0; i < d; ++i)
            for (unsigned rep = 0; rep < m[i]; ++rep) {
                SymTensorField lin(d, 1);
                for (std::size_t j = 0; j < d; ++j) lin.add_term(MultiIndex::unit(d, j), ginv[i][j]);
                term = term * lin;
            }
        out = out + term;
    }
    return out;
}

DiffOperator quartic_operator(std::size_t d = 2) {
    DiffOperator A(d, 4);
    Polynomial one = Polynomial::constant(Rat(1), d);
    Polynomial a1 = Polynomial::variable(d, 0), a2 = Polynomial::variable(d, 1);
    A.set_coeff(MultiIndex{4, 0}, one);
    A.set_coeff(MultiIndex{0, 4}, one);
    A.set_coeff(MultiIndex{2, 2}, a1);
    A.set_coeff(MultiIndex{3, 1}, a2);
    A.set_coeff(MultiIndex{1, 3}, a2);
    A.set_coeff(MultiIndex{1, 0}, a1 * a2);
    A.set_coeff(MultiIndex{0, 0}, Polynomial::constant(Rat(7, 3), d));
    return A;
}

std::vector<std::vector<Rat>> transported_grid(const std::vector<std::vector<Rat>>& pts,
                                               const Mat<Rat>& L, const std::vector<Rat>& c) {
    std::vector<std::vector<Rat>> out;
    for (const auto& x : pts) {
        std::vector<Rat> u(x.size(), Rat(0));
        for (std::size_t i = 0; i < x.size(); ++i) {
            u[i] = c[i];
            for (std::size_t j = 0; j < x.size(); ++j) u[i] += L[i][j] * x[j];
        }
        out.push_back(u);
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    if (argc > 2 && std::string(argv[1]) == "--criterion") g_only = std::atoi(argv[2]);
    {
        std::string d = "/tmp/sympleq_acceptance_XXXXXX";
        if (!mkdtemp(d.data())) {
            std::fprintf(stderr, "cannot create temp dir\n");
            return 1;
        }
        g_tmp = d;
    }

    criterion(1, "transvectant coordinate formula equals the mu(omega_hat^r) oracle", [](Check& c) {
        auto t0 = std::chrono::steady_clock::now();
        std::mt19937_64 rng(9001);
        int cases = 0;
        for (std::size_t d : {std::size_t(2), std::size_t(4)}) {
            for (int trial = 0; trial < 50; ++trial) {
                std::uniform_int_distribution<unsigned> degd(0, 5);
                std::uniform_int_distribution<int> rd(0, 5);
                HomogeneousPoly P = random_poly(rng, d, degd(rng));
                HomogeneousPoly Q = random_poly(rng, d, degd(rng));
                int r = rd(rng);
                c.expect(symplectic_transvectant(P, Q, r) == symplectic_transvectant_oracle(P, Q, r),
                         "oracle mismatch at case " + std::to_string(cases));
                ++cases;
            }
        }
        c.expect(cases == 100, "expected 100 cases");
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        c.expect(secs < 60.0, "runtime budget exceeded: " + std::to_string(secs) + "s");
    });

    criterion(2, "parity, degree law and triviality on 200 randomized cases", [](Check& c) {
        std::mt19937_64 rng(9002);
        for (int trial = 0; trial < 200; ++trial) {
            std::uniform_int_distribution<unsigned> nd(1, 2), degd(0, 5);
            std::uniform_int_distribution<int> rd(0, 5);
            std::size_t n = nd(rng);
            HomogeneousPoly P = random_poly(rng, 2 * n, degd(rng));
            HomogeneousPoly Q = random_poly(rng, 2 * n, degd(rng));
            int r = rd(rng);
            HomogeneousPoly pq = symplectic_transvectant(P, Q, r);
            HomogeneousPoly qp = symplectic_transvectant(Q, P, r);
            c.expect(pq == (r % 2 == 0 ? qp : qp.negated()), "parity failed");
            if (static_cast<unsigned>(r) > std::min(P.degree(), Q.degree()))
                c.expect(pq.is_zero(), "triviality failed");
            if (!pq.is_zero())
                c.expect(static_cast<int>(pq.degree()) ==
                             static_cast<int>(P.degree()) + static_cast<int>(Q.degree()) - 2 * r,
                         "degree law failed");
            if (r % 2 == 1)
                c.expect(symplectic_transvectant(P, P, r).is_zero(), "[P,P]_odd != 0");
        }
    });

    criterion(3, "sp-invariance of signatures (float exp chart and exact shears)", [](Check& c) {
        std::mt19937_64 rng(9003);
        std::uniform_real_distribution<double> coef(-0.7, 0.7);
        for (int sym = 0; sym < 50; ++sym) {
            std::size_t n = sym % 5 == 4 ? 2 : 1;
            unsigned p = 3 + sym % 2;
            HomogeneousPoly P = random_nonzero_poly(rng, 2 * n, p);
            NumericPoly Pn = numeric_poly(P);
            auto sa = invariant_signature_numeric(Pn);
            auto gens = sp_basis(n);
            for (int rep = 0; rep < 20; ++rep) {
                DMat M = dmat_zero(2 * n, 2 * n);
                for (const auto& g : gens) {
                    double w = coef(rng);
                    DMat cm = dmat_from_rat(chart_matrix(g));
                    for (std::size_t i = 0; i < 2 * n; ++i)
                        for (std::size_t j = 0; j < 2 * n; ++j) M[i][j] += w * cm[i][j];
                }
                double norm = dmat_frobenius(M);
                if (norm > 1.0) M = dmat_scale(M, 1.0 / norm);
                NumericPoly moved = substitute_linear(Pn, dmat_exp(dmat_scale(M, -1.0)));
                auto sb = invariant_signature_numeric(moved);
                for (std::size_t i = 0; i < sa.size(); ++i) {
                    double scale = 1.0 + std::fabs(sa[i].value);
                    c.expect(std::fabs(sa[i].value - sb[i].value) <= 1e-6 * scale,
                             "float invariance violated for " + sa[i].label.str());
                }
            }
            LinearMap g = random_exact_symplectic(rng, n, 5);
            auto ea = invariant_signature(P);
            auto eb = invariant_signature(act(g, P));
            for (std::size_t i = 0; i < ea.size(); ++i)
                c.expect(ea[i].value == eb[i].value,
                         "exact invariance violated for " + ea[i].label.str());
        }
    });

    criterion(4, "orbit dimensions: d=4 cubics and quadric codimension", [](Check& c) {
        std::mt19937_64 rng(9004);
        c.expect(monomial_basis(4, 3).size() == 20, "dim S^3(R^4) != 20");
        for (int seed = 0; seed < 50; ++seed) {
            HomogeneousPoly P = random_nonzero_poly(rng, 4, 3);
            std::size_t od = sp_orbit_dimension(P);
            c.expect(od == 10, "cubic orbit dimension " + std::to_string(od) + " != 10");
            c.expect(20 - od == 10, "codimension != 10");
        }
        for (std::size_t n : {std::size_t(1), std::size_t(2)}) {
            std::size_t s2 = monomial_basis(2 * n, 2).size();
            int found = 0;
            for (int seed = 0; seed < 60 && found < 15; ++seed) {
                HomogeneousPoly P = random_poly(rng, 2 * n, 2);
                Mat<Rat> H = mat_zero<Rat>(2 * n, 2 * n);
                for (std::size_t i = 0; i < 2 * n; ++i)
                    for (std::size_t j = 0; j < 2 * n; ++j) {
                        MultiIndex m = MultiIndex::unit(2 * n, i) + MultiIndex::unit(2 * n, j);
                        H[i][j] = i == j ? P.coeff(m) : P.coeff(m) / 2;
                    }
                if (rat_is_zero(det_exact(H))) continue;
                ++found;
                c.expect(s2 - sp_orbit_dimension(P) == n, "quadric codimension != n");
            }
            c.expect(found >= 15, "not enough nondegenerate quadrics sampled");
        }
    });

    criterion(5, "pairing forms skew/symmetric and nondegenerate, d=2, p<=5", [](Check& c) {
        for (unsigned p = 1; p <= 5; ++p) {
            Mat<Rat> G = pairing_form(2, p, InvariantKind::Symplectic);
            Mat<Rat> Gt = mat_transpose(G);
            for (std::size_t i = 0; i < G.size(); ++i)
                for (std::size_t j = 0; j < G.size(); ++j)
                    c.expect(G[i][j] == (p % 2 == 1 ? -Gt[i][j] : Gt[i][j]),
                             "parity failed at p=" + std::to_string(p));
            c.expect(!rat_is_zero(det_exact(G)), "degenerate pairing at p=" + std::to_string(p));
        }
    });

    criterion(6, "hand-value pins recomputed by the term-expansion oracle", [](Check& c) {
        HomogeneousPoly x2 = HomogeneousPoly::monomial(2, MultiIndex{2, 0}, Rat(1));
        HomogeneousPoly y2 = HomogeneousPoly::monomial(2, MultiIndex{0, 2}, Rat(1));
        HomogeneousPoly xy2 = HomogeneousPoly::monomial(2, MultiIndex{1, 1}, Rat(2));
        HomogeneousPoly one = HomogeneousPoly::monomial(2, MultiIndex{0, 0}, Rat(1));
        c.expect(symplectic_transvectant_oracle(x2, y2, 1) == xy2, "oracle [x^2,y^2]_1 != 2xy");
        c.expect(symplectic_transvectant_oracle(x2, y2, 2) == one, "oracle [x^2,y^2]_2 != 1");
        c.expect(symplectic_transvectant(x2, y2, 1) == xy2, "[x^2,y^2]_1 != 2xy");
        c.expect(symplectic_transvectant(x2, y2, 2) == one, "[x^2,y^2]_2 != 1");

        HomogeneousPoly P = HomogeneousPoly::monomial(2, MultiIndex{2, 2}, Rat(1));
        auto op = transvectant_operator_matrix(P, {OperatorMode::Kind::SymplecticEven, 0, 2});
        std::vector<MultiIndex> basis = monomial_basis(2, 2);
        for (std::size_t j = 0; j < basis.size(); ++j) {
            HomogeneousPoly img = symplectic_transvectant_oracle(
                P, HomogeneousPoly::monomial(2, basis[j], Rat(1)), 2);
            for (std::size_t i = 0; i < basis.size(); ++i)
                c.expect(op.matrix[i][j] == img.coeff(basis[i]), "J-matrix entry mismatch");
        }
        c.expect(op.matrix[0][0] == Rat(1) && op.matrix[1][1] == Rat(-2) && op.matrix[2][2] == Rat(1),
                 "J-matrix != diag(1,-2,1)");
        c.expect(mat_trace_power(op.matrix, 1) == Rat(0), "Tr != 0");
        c.expect(mat_trace_power(op.matrix, 2) == Rat(6), "Tr^2 != 6");
    });

    criterion(7, "quantization contracts and exact splitting roundtrip", [](Check& c) {
        auto t0 = std::chrono::steady_clock::now();
        std::mt19937_64 rng(9007);
        for (int trial = 0; trial < 10; ++trial) {
            std::size_t d = trial % 2 ? 4 : 2;
            Connection conn = trial % 3 == 0 ? Connection::flat(d) : random_connection(rng, d, 1);
            unsigned k = 1 + trial % 3;
            SymTensorField H(d, k);
            for (const MultiIndex& m : monomial_basis(d, k))
                if ((trial + m.degree()) % 2 == 0) H.add_term(m, random_base_poly(rng, d, 1));
            if (H.is_zero()) H.add_term(*monomial_basis(d, k).begin(), Polynomial::constant(Rat(1), d));
            DiffOperator A = quantize(H, conn);
            c.expect(A.principal_symbol() == H, "smbl(quantize(H)) != H");
            auto ts = total_symbol(A, conn);
            c.expect(ts.size() == k + 1, "total symbol length");
            c.expect(ts[0] == H, "leading part of the splitting");
            for (std::size_t i = 1; i < ts.size(); ++i)
                c.expect(ts[i].is_zero(), "splitting of a quantized tensor has a nonzero tail");
        }
        for (int trial = 0; trial < 6; ++trial) {
            std::size_t d = trial % 2 ? 4 : 2;
            unsigned order = trial % 2 ? 3 : 4;
            Connection conn = random_connection(rng, d, 1);
            DiffOperator A(d, order);
            std::uniform_int_distribution<int> keep(0, 2);
            for (unsigned m = 0; m <= order; ++m)
                for (const MultiIndex& alpha : monomial_basis(d, m))
                    if (keep(rng) == 0) A.add_coeff(alpha, random_base_poly(rng, d, 2));
            if (A.is_zero()) A.set_coeff(MultiIndex(d), Polynomial::constant(Rat(1), d));
            c.expect(quantize_sum(total_symbol(A, conn), conn) == A, "splitting roundtrip failed");
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        c.expect(secs < 120.0, "runtime budget exceeded: " + std::to_string(secs) + "s");
    });

    criterion(8, "Wagner solver: construct-then-recover, uniqueness, NotConstantType", [](Check& c) {
        std::mt19937_64 rng(9008);
        int done = 0;
        for (int trial = 0; trial < 12 && done < 5; ++trial) {
            HomogeneousPoly sigma0 = random_nonzero_poly(rng, 2, 3);
            if (sp_orbit_dimension(sigma0) != 3) continue;
            Polynomial t(2);
            t.add_term(MultiIndex{1, 0}, Rat(1));
            t.add_term(MultiIndex{0, 2}, Rat(trial - 5));
            SymTensorField sigma = shear_family(sigma0, t);
            Connection conn = wagner_connection_symbolic(sigma);
            c.expect(preserves_symbol(conn, sigma), "nabla sigma != 0 in symbolic mode");
            auto probe = solve_exact(orbit_span_matrix(sigma0), std::vector<Rat>(4, Rat(0)));
            c.expect(probe.kernel_dim == 0, "solve kernel not zero dimensional");
            // grid mode: exact residual at rational points (<= 1e-8 trivially)
            for (const auto& x : std::vector<std::vector<Rat>>{{Rat(0), Rat(0)},
                                                               {Rat(1, 3), Rat(-1, 2)},
                                                               {Rat(-2), Rat(1, 5)}}) {
                auto gamma = wagner_gamma_at(sigma, x);
                for (std::size_t i = 0; i < 2; ++i)
                    for (std::size_t k = 0; k < 2; ++k)
                        for (std::size_t j = 0; j < 2; ++j)
                            c.expect(gamma[i][k][j] == conn.gamma(i)[k][j].eval(x),
                                     "grid/symbolic mismatch");
            }
            ++done;
        }
        c.expect(done >= 5, "not enough regular anchors sampled");
        // rank-dropping family
        SymTensorField bad(2, 3);
        bad.add_term(MultiIndex{3, 0}, Polynomial::constant(Rat(1), 2));
        bad.add_term(MultiIndex{0, 3}, Polynomial::variable(2, 0));
        bool raised = false;
        try {
            (void)wagner_gamma_at(bad, {Rat(1), Rat(0)});
        } catch (const NotConstantType&) {
            raised = true;
        }
        c.expect(raised, "NotConstantType not raised on the rank-dropping family");
    });

    criterion(9, "equivalence pipeline: planted matches and signature refutation", [](Check& c) {
        std::mt19937_64 rng(9009);
        std::uniform_real_distribution<double> coef(-0.55, 0.55);
        int hits = 0;
        const int trials = 50;
        for (int trial = 0; trial < trials; ++trial) {
            HomogeneousPoly base = random_nonzero_poly(rng, 2, 3);
            auto gens = sp_basis(1);
            DMat M = dmat_zero(2, 2);
            for (const auto& g : gens) {
                DMat cm = dmat_from_rat(chart_matrix(g));
                double w = coef(rng);
                for (std::size_t i = 0; i < 2; ++i)
                    for (std::size_t j = 0; j < 2; ++j) M[i][j] += w * cm[i][j];
            }
            NumericPoly moved = substitute_linear(numeric_poly(base), dmat_exp(dmat_scale(M, -1.0)));
            HomogeneousPoly Q(2, 3);
            for (const auto& [m, v] : moved.terms()) {
                Rat r(v);
                r.canonicalize();
                Q.add_term(m, r);
            }
            MatchConfig cfg;
            cfg.restarts = 20;
            cfg.seed = 4242 + trial;
            cfg.tolerance = 1e-6;
            cfg.signature_tol = 1e-6;
            MatchResult res = orbit_match(base, Q, cfg);
            if (res.verdict == MatchResult::Verdict::Matched && res.residual <= 1e-6) {
                ++hits;
                c.expect(res.symplectic_defect <= 1e-10, "matched element violates g^T J g = J");
            }
        }
        c.expect(hits >= (trials * 9) / 10,
                 "only " + std::to_string(hits) + "/" + std::to_string(trials) + " planted matches");
        // CLI pre-filter refutation with exit code 2
        std::string p = write_tmp("acc_p.json",
                                  R"({"dim":2,"degree":3,"terms":[{"exp":[3,0],"coef":"1"},{"exp":[0,3],"coef":"1"}]})");
        std::string q = write_tmp("acc_q.json",
                                  R"({"dim":2,"degree":3,"terms":[{"exp":[3,0],"coef":"1"}]})");
        RunResult r = run_cli("match " + p + " " + q);
        c.expect(r.exit_code == 2, "CLI exit code for a refuted pair is " +
                                       std::to_string(r.exit_code) + ", expected 2");
    });

    criterion(10, "n-invariants principle: identity chart, planted model match, Lie check", [](Check& c) {
        std::mt19937_64 rng(9010);
        // identity-chart law, random operators of order <= 3, d = 2
        for (int trial = 0; trial < 10; ++trial) {
            std::size_t d = 2;
            unsigned order = 1 + trial % 3;
            DiffOperator A(d, order);
            for (unsigned m = 0; m <= order; ++m)
                for (const MultiIndex& alpha : monomial_basis(d, m))
                    if ((trial + alpha.degree()) % 2 == 0)
                        A.add_coeff(alpha, random_base_poly(rng, d, 2));
            std::vector<InvariantField> idchart;
            for (std::size_t i = 0; i < d; ++i)
                idchart.push_back(
                    {InvariantLabel::coord(static_cast<unsigned>(i) + 1), Polynomial::variable(d, i)});
            for (const auto& [alpha, v] : model_coefficients(A, idchart))
                c.expect(v == A.coeff(alpha), "identity-chart law failed at " + alpha.str());
        }
        // planted affine symplectic equivalence
        DiffOperator A = quartic_operator();
        Mat<Rat> L = {{Rat(2), Rat(1)}, {Rat(1), Rat(1)}};
        std::vector<Rat> shift = {Rat(1, 3), Rat(-2, 5)};
        DiffOperator B = A.transport_affine(L, shift);
        std::vector<InvariantField> IA = {symbol_invariant_field(A, InvariantLabel::makeJ(2, 2)),
                                          symbol_invariant_field(A, InvariantLabel::makeJ(3, 2))};
        std::vector<InvariantField> IB = {symbol_invariant_field(B, InvariantLabel::makeJ(2, 2)),
                                          symbol_invariant_field(B, InvariantLabel::makeJ(3, 2))};
        GridSpec grid{{{Rat(-1), Rat(1), 5}, {Rat(1, 2), Rat(3, 2), 5}}};
        auto pts = grid.points();
        ModelSurface SA = model_surface(A, IA, pts);
        ModelSurface SB = model_surface(B, IB, transported_grid(pts, L, shift));
        EquivalenceVerdict v = model_compare(SA, SB, 1e-6);
        c.expect(v.status == EquivalenceVerdict::Status::ModelsCoincide,
                 "planted equivalence not recognized");
        c.expect(v.omega_residual <= 1e-6, "omega residual " + std::to_string(v.omega_residual));

        // non-symplectic volume-preserving transport on a 4-dimensional base
        std::size_t d4 = 4;
        DiffOperator A4(d4, 4);
        Polynomial one4 = Polynomial::constant(Rat(1), d4);
        A4.set_coeff(MultiIndex{4, 0, 0, 0}, one4);
        A4.set_coeff(MultiIndex{0, 4, 0, 0}, one4.scaled(Rat(2)));
        A4.set_coeff(MultiIndex{0, 0, 4, 0}, one4);
        A4.set_coeff(MultiIndex{0, 0, 0, 4}, one4.scaled(Rat(3)));
        A4.set_coeff(MultiIndex{2, 0, 2, 0}, one4 + Polynomial::variable(d4, 0));
        A4.set_coeff(MultiIndex{0, 2, 0, 2}, one4.scaled(Rat(2)) + Polynomial::variable(d4, 1));
        A4.set_coeff(MultiIndex{1, 0, 1, 2}, Polynomial::variable(d4, 2));
        A4.set_coeff(MultiIndex{2, 1, 0, 1}, Polynomial::variable(d4, 3));
        A4.set_coeff(MultiIndex{0, 0, 0, 0}, Polynomial::variable(d4, 0));
        Mat<Rat> swap = mat_zero<Rat>(d4, d4);
        swap[0][2] = 1;
        swap[1][3] = 1;
        swap[2][0] = 1;
        swap[3][1] = 1;
        c.expect(det_exact(swap) == Rat(1), "swap determinant != 1");
        c.expect(!LinearMap{swap}.is_symplectic(), "swap unexpectedly symplectic");
        std::vector<Rat> zero(d4, Rat(0));
        DiffOperator B4 = A4.transport_affine(swap, zero);
        std::vector<InvariantLabel> chart = {InvariantLabel::makeJ(2, 2), InvariantLabel::makeJ(3, 2),
                                             InvariantLabel::makeJ(4, 2), InvariantLabel::makeJ(5, 2)};
        std::vector<InvariantField> IA4, IB4;
        for (const auto& lab : chart) {
            IA4.push_back(symbol_invariant_field(A4, lab));
            IB4.push_back(symbol_invariant_field(B4, lab));
        }
        GridSpec grid4{{{Rat(1, 10), Rat(3, 10), 2},
                        {Rat(1, 10), Rat(3, 10), 2},
                        {Rat(1, 10), Rat(3, 10), 2},
                        {Rat(1, 10), Rat(3, 10), 2}}};
        auto pts4 = grid4.points();
        ModelSurface SA4 = model_surface(A4, IA4, pts4);
        ModelSurface SB4 = model_surface(B4, IB4, transported_grid(pts4, swap, zero));
        EquivalenceVerdict v4 = model_compare(SA4, SB4, 1e-6);
        c.expect(v4.status == EquivalenceVerdict::Status::Inconclusive,
                 "non-symplectic transport not rejected");
        c.expect(v4.max_model_deviation <= 1e-9, "models unexpectedly deviate");
        c.expect(v4.omega_residual > 1e-3, "Lie condition failed to reject psi");
    });

    criterion(11, "determinism: byte-identical CLI reports across repeated runs", [](Check& c) {
        std::string p = write_tmp(
            "det_p.json",
            R"({"dim":2,"degree":3,"terms":[{"exp":[3,0],"coef":"1"},{"exp":[0,3],"coef":"1"}]})");
        std::string q = write_tmp(
            "det_q.json",
            R"({"dim":2,"degree":3,"terms":[{"exp":[3,0],"coef":"1"},{"exp":[0,3],"coef":"2"}]})");
        std::string x2 = write_tmp("det_x2.json",
                                   R"({"dim":2,"degree":2,"terms":[{"exp":[2,0],"coef":"1"}]})");
        std::string y2 = write_tmp("det_y2.json",
                                   R"({"dim":2,"degree":2,"terms":[{"exp":[0,2],"coef":"1"}]})");
        std::string sigma = write_tmp(
            "det_sigma.json",
            R"({"dim":2,"degree":3,"terms":[{"exp":[3,0],"coef":"1"},{"exp":[0,3],"coef":"1"}]})");
        std::string op = write_tmp("det_op.json", R"({"dim":2,"order":2,"coeffs":[
            {"alpha":[2,0],"coef":"1"},{"alpha":[0,0],"coef":"5"}]})");
        std::string quarticA = write_tmp("det_qa.json", R"({"dim":2,"order":4,"coeffs":[
            {"alpha":[4,0],"coef":"1"},{"alpha":[0,4],"coef":"1"},
            {"alpha":[2,2],"coef":{"dim":2,"terms":[{"exp":[1,0],"coef":"1"}]}},
            {"alpha":[3,1],"coef":{"dim":2,"terms":[{"exp":[0,1],"coef":"1"}]}},
            {"alpha":[1,3],"coef":{"dim":2,"terms":[{"exp":[0,1],"coef":"1"}]}}]})");
        std::string sa = g_tmp + "/det_sa.json";
        RunResult mk =
            run_cli("model " + quarticA + " --chart J:2,2,J:3,2 --grid -1:1:3,1/2:3/2:3 --output " + sa);
        c.expect(mk.exit_code == 0, "model subcommand failed");
        std::vector<std::string> cmds = {
            "transvect " + x2 + " " + y2 + " --order 1",
            "invariants " + p,
            "signature " + p,
            "orbit-dim " + p,
            "match " + p + " " + q + " --seed 11 --restarts 3",
            "wagner " + sigma,
            "split " + op,
            "model " + quarticA + " --chart J:2,2,J:3,2 --grid -1:1:3,1/2:3/2:3",
            "model-compare " + sa + " " + sa,
        };
        for (const auto& cmd : cmds) {
            RunResult a = run_cli(cmd);
            RunResult b = run_cli(cmd);
            c.expect(a.exit_code == b.exit_code, "exit codes differ for: " + cmd);
            c.expect(a.out == b.out, "reports differ for: " + cmd);
        }
    });

    if (g_failures == 0)
        std::printf("acceptance: all criteria passed\n");
    else
        std::printf("acceptance: %d criterion(s) failed\n", g_failures);
    return g_failures;
}
