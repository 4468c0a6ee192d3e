#include <gtest/gtest.h>

#include <fstream>
#include <random>
#include <sstream>

#include "fixtures.hpp"
#include "malformed_cases.hpp"
#include "pim/modelfile.hpp"

using namespace pim;
using fixtures::row;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string data(const std::string& name) { return read_file(std::string(PIM_TEST_DATA_DIR) + "/" + name); }

ParseError single_error(std::string_view text) {
  const auto r = parse_model(text);
  EXPECT_FALSE(r.ok());
  EXPECT_EQ(r.errors.size(), 1u);
  return r.errors.empty() ? ParseError{} : r.errors.front();
}

}  // namespace

TEST(ParseModel, DragFile) {
  const auto r = parse_model(data("drag.pim"));
  ASSERT_TRUE(r.ok()) << r.errors.front().message;
  EXPECT_EQ(*r.model, fixtures::drag(true));
  EXPECT_EQ(build_dimension_matrix(*r.model),
            (RatMatrix{{1, 1, 0, 0, 1, 0}, {1, -3, 1, 1, -1, 2}, {-2, 0, -1, 0, -1, -1}}));
}

TEST(ParseModel, DimensionlessQuantity) {
  const auto r = parse_model("dimensions: M\nquantity x = 1\n");
  ASSERT_TRUE(r.ok());
  EXPECT_EQ(r.model->quantities[0].dim_exponents, row({0}));
}

TEST(ParseModel, DuplicateQuantityAtSecondSpan) {
  const auto e = single_error("dimensions: M, L\nquantity p = M L^-3\nquantity p = M L^-3\n");
  EXPECT_EQ(e.code, ErrorCode::duplicate_name);
  EXPECT_EQ(e.span, (SourceSpan{3, 10, 1}));
}

TEST(ParseModel, DuplicateDimension) {
  const auto e = single_error("dimensions: M, L, M\nquantity p = M\n");
  EXPECT_EQ(e.code, ErrorCode::duplicate_name);
  EXPECT_EQ(e.span, (SourceSpan{1, 19, 1}));
}

TEST(ParseModel, StatementsInAnyOrder) {
  const auto r = parse_model("constraint b / a = 2\nquantity a = L\nquantity b = L\ndimensions: L\n");
  ASSERT_TRUE(r.ok());
  ASSERT_EQ(r.model->constraints.size(), 1u);
  EXPECT_EQ(r.model->constraints[0].row, row({-1, 1}));
  EXPECT_EQ(r.model->constraints[0].constant, 2);
}

TEST(ParseModel, JacobianRowAndRationalEntries) {
  const auto r = parse_model("dimensions: L\nquantity a = L^1/2\nquantity b = L\njacobian_row: -1/2, 3\n");
  ASSERT_TRUE(r.ok());
  EXPECT_EQ(r.model->quantities[0].dim_exponents, RatVector{Rational(1, 2)});
  EXPECT_EQ(r.model->constraints[0].kind, Constraint::Kind::pointwise);
  EXPECT_EQ(r.model->constraints[0].row, (RatVector{Rational(-1, 2), 3}));
}

TEST(ParseModel, RationalExponentFollowedByDivision) {
  const auto r = parse_model("dimensions: L\nquantity a = L\nquantity b = L\nconstraint a^1/2 / b^1/2 = 1\n");
  ASSERT_TRUE(r.ok());
  EXPECT_EQ(r.model->constraints[0].row, (RatVector{Rational(1, 2), Rational(-1, 2)}));
}

TEST(ParseModel, CollectsErrorsAcrossLines) {
  const auto r = parse_model("dimensions: M\nquantity a = X\nquantity b = M^q\nquantity d = M\nconstraint d * c = 1\nconstraint a * d = 1\n");
  ASSERT_EQ(r.errors.size(), 3u);
  EXPECT_EQ(r.errors[0].code, ErrorCode::unknown_dimension);
  EXPECT_EQ(r.errors[1].code, ErrorCode::bad_exponent);
  EXPECT_EQ(r.errors[2].code, ErrorCode::unknown_quantity);
}

TEST(ParseModel, ConstraintErrors) {
  const std::string head = "dimensions: L\nquantity a = L\nquantity b = L\n";
  auto e = single_error(head + "constraint a / b = -3\n");
  EXPECT_EQ(e.code, ErrorCode::bad_constant);
  EXPECT_EQ(e.span, (SourceSpan{4, 20, 2}));

  e = single_error(head + "constraint a / b = 1/0\n");
  EXPECT_EQ(e.code, ErrorCode::bad_constant);

  e = single_error(head + "constraint a / a = 1\n");
  EXPECT_EQ(e.code, ErrorCode::bad_exponent);

  e = single_error(head + "constraint a / b 1\n");
  EXPECT_EQ(e.code, ErrorCode::syntax);
}

TEST(ParseModel, RowLengthErrors) {
  const std::string head = "dimensions: L\nquantity a = L\nquantity b = L\n";
  EXPECT_EQ(single_error(head + "jacobian_row: 1, 2, 3\n").code, ErrorCode::syntax);
  EXPECT_EQ(single_error(head + "basis_override:\n 1\n").code, ErrorCode::syntax);
  EXPECT_EQ(single_error(head + "1, -1\n").code, ErrorCode::syntax);
}

TEST(ParseModel, MissingDimensions) {
  const auto r = parse_model("quantity a = L\n");
  ASSERT_FALSE(r.ok());
  EXPECT_EQ(r.errors.front().code, ErrorCode::syntax);
}

TEST(ParseModel, CrlfLineEndings) {
  const auto r = parse_model("dimensions: L\r\nquantity a = L\r\n");
  ASSERT_TRUE(r.ok());
}

TEST(ParseModel, MalformedCorpus) {
  for (const auto& c : fixtures::malformed_cases()) {
    const std::string text = data("malformed/" + c.file);
    const auto r = parse_model(text);
    ASSERT_FALSE(r.ok()) << c.file;
    ASSERT_EQ(r.errors.size(), 1u) << c.file;
    EXPECT_EQ(r.errors[0].code, c.code) << c.file << ": " << r.errors[0].message;
    EXPECT_TRUE(fixtures::span_inside_token(text, r.errors[0].span, c.line, c.token))
        << c.file << " span " << r.errors[0].span.line << ":" << r.errors[0].span.column << "+"
        << r.errors[0].span.length;
  }
}

TEST(ParseDimexpr, Examples) {
  const DimensionSystem mlt{{"M", "L", "T"}};
  EXPECT_EQ(std::get<RatVector>(parse_dimexpr("M L T^-2", mlt)), row({1, 1, -2}));
  EXPECT_EQ(std::get<RatVector>(parse_dimexpr("1", mlt)), row({0, 0, 0}));
  EXPECT_EQ(std::get<RatVector>(parse_dimexpr("L^1/2 L^1/2", mlt)), row({0, 1, 0}));
}

TEST(ParseDimexpr, Errors) {
  const DimensionSystem mlt{{"M", "L", "T"}};
  auto e = std::get<ParseError>(parse_dimexpr("M Q", mlt));
  EXPECT_EQ(e.code, ErrorCode::unknown_dimension);
  EXPECT_EQ(e.span, (SourceSpan{1, 3, 1}));
  e = std::get<ParseError>(parse_dimexpr("M^x", mlt));
  EXPECT_EQ(e.code, ErrorCode::bad_exponent);
  EXPECT_EQ(e.span, (SourceSpan{1, 3, 1}));
  e = std::get<ParseError>(parse_dimexpr("M^1/0", mlt));
  EXPECT_EQ(e.code, ErrorCode::bad_exponent);
}

TEST(RenderModel, DragRoundTrip) {
  const Model m = fixtures::drag(true);
  const auto r = parse_model(render_model(m));
  ASSERT_TRUE(r.ok());
  EXPECT_EQ(*r.model, m);
  EXPECT_EQ(render_constraint_monomial(m.quantity_names(), m.constraints[0].row), "rho * nu / mu");
}

TEST(RenderModel, RandomModelsRoundTrip) {
  std::mt19937 rng(99);
  std::bernoulli_distribution coin(0.3);
  for (int it = 0; it < 200; ++it) {
    Model m = fixtures::random_integer_model(rng);
    for (auto& q : m.quantities)
      if (coin(rng)) q.dim_exponents[0] = oracle::random_rational(rng);
    fixtures::add_scale_invariant_constraints(m, rng);
    if (coin(rng)) {
      RatVector raw(m.n());
      for (auto& x : raw) x = oracle::random_rational(rng);
      m.constraints.push_back(Constraint::pointwise(raw));
    }
    if (coin(rng)) m.basis_override = kernel_basis(build_dimension_matrix(m));
    const std::string text = render_model(m);
    const auto r = parse_model(text);
    ASSERT_TRUE(r.ok()) << text << "\n" << r.errors.front().message;
    EXPECT_EQ(*r.model, m) << text;
  }
}
