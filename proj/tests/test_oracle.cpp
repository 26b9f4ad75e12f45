#include <gtest/gtest.h>

#include "support/fixtures.hpp"
#include "support/oracle.hpp"
#include "support/random_algebra.hpp"

using namespace lieder;

namespace {

oracle::Mat rows_of(const SolutionSpace& S) {
    oracle::Mat M;
    for (std::size_t i = 0; i < S.dim(); ++i) M.push_back(S.space.dense(i));
    return M;
}

void expect_agreement(const GradedAlgebra& A) {
    std::vector<int> degrees;
    for (std::size_t i = 0; i < A.dim(); ++i) degrees.push_back(A.degree(i));
    using K = oracle::Kind;
    const std::vector<std::pair<K, SolutionSpace>> cases{
        {K::Der, solve_derivations(A)},       {K::Centroid, solve_centroid(A)},
        {K::QC, solve_quasicentroid(A)},      {K::QDer, solve_quasiderivations(A)},
        {K::GenDer, solve_generalized(A)},    {K::MDer2, solve_mder_minus2(A, 3, 1000000)}};
    for (const auto& [kind, S] : cases) {
        auto O = oracle::solve(A.basis(), degrees, kind);
        EXPECT_EQ(O.size(), S.dim()) << "kind " << static_cast<int>(kind);
        EXPECT_TRUE(oracle::same_span(O, rows_of(S), S.space.ambient_dim())) << "kind " << static_cast<int>(kind);
    }
}

}  // namespace

TEST(Oracle, DenseSolverSanity) {
    oracle::Mat M{{1, 2, 3}, {2, 4, 6}};
    auto K = oracle::kernel(M, 3);
    EXPECT_EQ(K.size(), 2u);
    EXPECT_EQ(oracle::rank(M, 3), 1u);
}

// Frozen values from the dense solver, computed before the sparse solver existed.
TEST(Oracle, FrozenDimensions) {
    auto A = fixtures::plane_diagonal();
    std::vector<int> deg{-1, -1, 0, 0};
    EXPECT_EQ(oracle::solve(A.basis(), deg, oracle::Kind::Der).size(), 4u);
    EXPECT_EQ(oracle::solve(A.basis(), deg, oracle::Kind::Centroid).size(), 2u);
    EXPECT_EQ(oracle::solve(A.basis(), deg, oracle::Kind::QDer).size(), 16u);
    EXPECT_EQ(oracle::solve(A.basis(), deg, oracle::Kind::GenDer).size(), 18u);
}

TEST(Oracle, PaperAlgebras) {
    for (const auto& A : {fixtures::plane_diagonal(), fixtures::plane_shear(), fixtures::plane_euler(),
                          fixtures::space_quadratic(), fixtures::line_projective()})
        expect_agreement(A);
}

class OracleCorpus : public ::testing::TestWithParam<int> {};

TEST_P(OracleCorpus, AllSpecies) {
    static const auto corpus = testing_support::random_corpus(12, 555u, 6);
    expect_agreement(corpus.at(static_cast<std::size_t>(GetParam())));
}

INSTANTIATE_TEST_SUITE_P(Small, OracleCorpus, ::testing::Range(0, 12));
