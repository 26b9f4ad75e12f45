#include <gtest/gtest.h>

#include "lieder/parse.hpp"
#include "support/fixtures.hpp"
#include "support/random_algebra.hpp"

using namespace lieder;
using fixtures::dx;
using fixtures::mono;

namespace {

const std::vector<std::string> xy{"x", "y"};
const std::vector<std::string> xyz{"x", "y", "z"};

template <class E>
void expect_at(const std::string& text, std::size_t column, const std::vector<std::string>& vars = xy) {
    try {
        parse_field(text, vars, 7);
        FAIL() << "accepted '" << text << "'";
    } catch (const E& e) {
        if constexpr (std::is_same_v<E, ParseError>) {
            EXPECT_EQ(e.line(), 7u);
            EXPECT_EQ(e.column(), column) << text;
        }
        EXPECT_NE(std::string(e.what()).find("line 7"), std::string::npos) << e.what();
    }
}

}  // namespace

TEST(ParseAlgebra, PlaneDiagonalFile) {
    auto P = parse_algebra("dim 2\nvars x y\nd/dx\nd/dy\nx d/dx\ny d/dy\n");
    EXPECT_EQ(P.spec.n, 2u);
    EXPECT_EQ(P.vars, xy);
    ASSERT_EQ(P.spec.generators.size(), 4u);
    EXPECT_EQ(close_and_grade(P.spec).basis(), fixtures::plane_diagonal().basis());
}

TEST(ParseAlgebra, CommentsBlankLinesAndDefaults) {
    auto P = parse_algebra("# header comment\n\ndim 3   # three\nd/dx\nd/dy # trailing\n\nd/dz\neuler\n");
    EXPECT_EQ(P.vars, xyz);
    ASSERT_EQ(P.spec.generators.size(), 4u);
    EXPECT_EQ(P.spec.generators[3], euler(3));
}

TEST(ParseAlgebra, HeaderErrors) {
    EXPECT_THROW(parse_algebra(""), ParseError);
    EXPECT_THROW(parse_algebra("d/dx\n"), ParseError);
    EXPECT_THROW(parse_algebra("dim 0\n"), ParseError);
    EXPECT_THROW(parse_algebra("dim two\n"), ParseError);
    EXPECT_THROW(parse_algebra("dim 2\nvars x\n"), ParseError);
    EXPECT_THROW(parse_algebra("dim 2\nvars x x\n"), ParseError);
    EXPECT_THROW(parse_algebra("dim 2\nvars x d\n"), ParseError);
    EXPECT_THROW(parse_algebra("dim 2\nd/dx\nvars x y\n"), ParseError);
    try {
        parse_algebra("dim 2\nvars x y\nd/dx\nq d/dy\n");
        FAIL();
    } catch (const UnknownVariable& e) {
        EXPECT_NE(std::string(e.what()).find("line 4"), std::string::npos);
    }
}

TEST(ParseField, Terms) {
    EXPECT_EQ(parse_field("x^2 d/dx", xy), mono(2, {2, 0}, 0));
    EXPECT_EQ(parse_field("d/dy", xy), dx(2, 1));
    EXPECT_EQ(parse_field("-1/2 * x y d/dz", xyz), mono(3, {1, 1, 0}, 2).scaled(Rational(-1, 2)));
    EXPECT_EQ(parse_field("3x d/dy", xy), mono(2, {1, 0}, 1).scaled(3));
    EXPECT_EQ(parse_field("x*y*d/dx", xy), mono(2, {1, 1}, 0));
    EXPECT_EQ(parse_field("x x d/dx", xy), mono(2, {2, 0}, 0));
    EXPECT_EQ(parse_field("euler", xyz), euler(3));
    EXPECT_EQ(parse_field("2 euler - x d/dx", xy), diagonal_field(2, 0) + diagonal_field(2, 1).scaled(2));
    EXPECT_EQ(parse_field("x d/dx - x d/dx", xy), PolyVectorField(2));
    EXPECT_EQ(parse_field("0", xy), PolyVectorField(2));
}

TEST(ParseField, ErrorsCarryLineAndColumn) {
    expect_at<NonsensePower>("x^-1 d/dx", 0);
    expect_at<UnknownVariable>("q d/dx", 0);
    expect_at<UnknownVariable>("x d/dq", 0);
    expect_at<ParseError>("x d/dx +", 9);
    expect_at<ParseError>("2 * x", 6);
    expect_at<ParseError>("d/dx d/dy", 6);
    expect_at<ParseError>("1/0 d/dx", 1);
}

TEST(RoundTrip, ClosedBasisReparses) {
    auto corpus = testing_support::random_corpus(20, 99u);
    corpus.push_back(fixtures::space_quadratic());
    corpus.push_back(fixtures::plane_tower_cap4());
    for (const auto& A : corpus) {
        auto vars = default_variable_names(A.n());
        auto text = format_algebra(A.n(), A.basis(), vars);
        auto P = parse_algebra(text);
        P.spec.degree_cap = A.degree_cap();
        auto B = close_and_grade(P.spec);
        EXPECT_EQ(B.basis(), A.basis()) << text;
        EXPECT_TRUE(B.adjoined().empty());
    }
}

TEST(ParseEndo, CentroidMap) {
    auto A = fixtures::plane_diagonal();
    Endo f = parse_endo("d/dy -> 2 d/dy\ny d/dy -> 2 y d/dy\nd/dx -> d/dx\nx d/dx -> x d/dx\n", A, xy);
    EXPECT_TRUE(solve_centroid(A).contains({f}));
    EXPECT_EQ(f, *centroid_from_E0(A, diagonal_field(2, 0) + diagonal_field(2, 1).scaled(2)));
}

TEST(ParseEndo, NonBasisSourcesAndDefaults) {
    auto A = fixtures::plane_diagonal();
    // only d/dx + d/dy is given: it maps to d/dx, everything completing it maps to 0
    Endo g = parse_endo("d/dx + d/dy -> d/dx\n", A, xy);
    auto image = g.apply(to_sparse(A.coordinates(dx(2, 0) + dx(2, 1))));
    EXPECT_EQ(A.element(image), dx(2, 0));
    EXPECT_EQ(g.apply(to_sparse(A.coordinates(dx(2, 0)))), SparseRow{});
}

TEST(ParseEndo, Errors) {
    auto A = fixtures::plane_diagonal();
    EXPECT_THROW(parse_endo("d/dx d/dx\n", A, xy), ParseError);
    EXPECT_THROW(parse_endo("x^2 d/dx -> d/dx\n", A, xy), NotInAlgebra);
    EXPECT_THROW(parse_endo("d/dx -> x^2 d/dx\n", A, xy), NotInAlgebra);
    EXPECT_THROW(parse_endo("d/dx -> d/dx\n2 d/dx -> d/dy\n", A, xy), InvalidArgument);
}
