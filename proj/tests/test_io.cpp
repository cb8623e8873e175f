#include "doctest.h"

#include <random>

#include "sympleq/json_io.hpp"
#include "sympleq/model.hpp"
#include "support/oracles.hpp"

using namespace sympleq;
using sympleq::testing::random_poly;

namespace {

Polynomial random_base_poly(std::mt19937_64& rng, std::size_t d, unsigned maxdeg) {
    std::uniform_int_distribution<int> num(-20, 20);
    std::uniform_int_distribution<int> den(1, 9);
    Polynomial p(d);
    for (unsigned k = 0; k <= maxdeg; ++k)
        for (const MultiIndex& m : monomial_basis(d, k)) p.add_term(m, rat_of(num(rng), den(rng)));
    return p;
}

}  // namespace

TEST_SUITE_BEGIN("io");

TEST_CASE("serialization round trips are lossless") {
    std::mt19937_64 rng(701);
    for (int trial = 0; trial < 10; ++trial) {
        std::size_t d = trial % 2 ? 4 : 2;

        HomogeneousPoly P = random_poly(rng, d, 1 + trial % 4, -30, 30);
        CHECK(io::parse_homogeneous_poly(io::dump_homogeneous_poly(P), "t") == P);

        SymTensorField F(d, 2 + trial % 2);
        for (const MultiIndex& m : monomial_basis(d, F.degree()))
            if (trial % 3 != 0 || m[0] > 0) F.add_term(m, random_base_poly(rng, d, 2));
        CHECK(io::parse_symbol_field(io::dump_symbol_field(F), "t") == F);

        DiffOperator A(d, 2 + trial % 3);
        for (unsigned k = 0; k <= A.order(); ++k)
            for (const MultiIndex& alpha : monomial_basis(d, k))
                if ((trial + alpha.degree()) % 2 == 0) A.add_coeff(alpha, random_base_poly(rng, d, 2));
        CHECK(io::parse_operator(io::dump_operator(A), "t") == A);

        Connection C(d);
        std::uniform_int_distribution<int> keep(0, 2);
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t k = 0; k < d; ++k)
                for (std::size_t j = 0; j < d; ++j)
                    if (keep(rng) == 0) C.set_gamma(i, k, j, random_base_poly(rng, d, 1));
        CHECK(io::parse_connection(io::dump_connection(C), "t") == C);
    }
}

TEST_CASE("model surface round trip keeps samples and fields") {
    std::size_t d = 2;
    DiffOperator A(d, 2);
    A.set_coeff(MultiIndex{2, 0}, Polynomial::constant(Rat(1), d));
    A.set_coeff(MultiIndex{0, 2}, Polynomial::constant(Rat(1), d));
    A.set_coeff(MultiIndex(d), Polynomial::variable(d, 0));
    std::vector<InvariantField> I = {{InvariantLabel::coord(1), Polynomial::variable(d, 0)},
                                     {InvariantLabel::coord(2), Polynomial::variable(d, 1)}};
    GridSpec grid{{{Rat(-1), Rat(1), 3}, {Rat(-1), Rat(1), 3}}};
    ModelSurface S = model_surface(A, I, grid.points());
    ModelSurface S2 = io::parse_model_surface(io::dump_model_surface(S), "t");
    CHECK(S2.n == S.n);
    CHECK(S2.chart_labels == S.chart_labels);
    CHECK(S2.alpha_order == S.alpha_order);
    REQUIRE(S2.samples.size() == S.samples.size());
    for (std::size_t i = 0; i < S.samples.size(); ++i) {
        CHECK(S2.samples[i].x == S.samples[i].x);
        CHECK(S2.samples[i].y == S.samples[i].y);
        CHECK(S2.samples[i].Y == S.samples[i].Y);
    }
    REQUIRE(S2.has_fields);
    CHECK(S2.chart_fields == S.chart_fields);
    CHECK(S2.alpha_fields == S.alpha_fields);
    // comparing a surface against its round trip is the identity comparison
    CHECK(model_compare(S, S2, 1e-9).status == EquivalenceVerdict::Status::ModelsCoincide);
}

TEST_CASE("hash and float formatting are stable") {
    CHECK(io::content_hash("") == "cbf29ce484222325");
    CHECK(io::content_hash("sympleq") == io::content_hash("sympleq"));
    CHECK(io::content_hash("a") != io::content_hash("b"));
    CHECK(io::format_double(0.5) == "0.5");
    CHECK(io::format_double(1.0 / 3.0) == "0.33333333333333331");
}

TEST_SUITE_END();
