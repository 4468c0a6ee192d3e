#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "pim/errors.hpp"
#include "pim/matrix.hpp"
#include "pim/model.hpp"
#include "pim/rational.hpp"
#include "pim/ratlin.hpp"

namespace pim {

/// Stacks the constraint rows in declaration order (ℓ×n). Only exponents
/// enter J; the constants K never do.
inline RatMatrix constraint_jacobian(const Model& model) {
  RatMatrix j(model.constraints.size(), model.n());
  for (std::size_t k = 0; k < model.constraints.size(); ++k) {
    const auto& row = model.constraints[k].row;
    if (row.size() != model.n()) throw DimensionError("constraint " + std::to_string(k + 1) + " has the wrong length");
    for (std::size_t c = 0; c < row.size(); ++c) j(k, c) = row[c];
  }
  return j;
}

/// True iff every scaling direction Aᵀλ is tangent to the constraint
/// manifold, i.e. J·Aᵀ = 0.
inline bool check_scale_invariance(const RatMatrix& a, const RatMatrix& j) {
  if (a.cols() != j.cols()) throw DimensionError("check_scale_invariance: A and J have different column counts");
  return (j * transpose(a)).is_zero();
}

/// d_eff by each of the equivalent formulas.
struct DeffBreakdown {
  std::size_t via_kernel_JE = 0;     // dim ker(JE)
  std::size_t via_stacked_rank = 0;  // n - rank[A;J]
  std::size_t via_grassmann = 0;     // n - rank A - rank J + dim(im Aᵀ ∩ im Jᵀ)
  std::optional<std::size_t> via_C_rank;  // d - rank C, scale-invariant only

  friend bool operator==(const DeffBreakdown&, const DeffBreakdown&) = default;
};

/// Solves J = C·Eᵀ for C. Requires each row of J to lie in the column space
/// of E, which for a kernel basis E of A is exactly J·Aᵀ = 0.
inline RatMatrix compute_C(const RatMatrix& j, const RatMatrix& e) {
  if (j.cols() != e.rows()) throw DimensionError("compute_C: J and E shapes do not match");
  if (rank(hstack(e, transpose(j))) != rank(e))
    throw PreconditionError("C-factorization requires scale-invariant constraints (J·A^T = 0)");
  RatMatrix c = gram_solve(e, j);
  if (!(c * transpose(e) == j)) throw InvariantViolation("C·E^T != J after solving the Gram system");
  return c;
}

inline DeffBreakdown compute_deff(const RatMatrix& a, const RatMatrix& j, const RatMatrix& e) {
  if (a.cols() != j.cols() || e.rows() != a.cols()) throw DimensionError("compute_deff: incompatible shapes");
  const std::size_t n = a.cols();
  const std::size_t d = e.cols();
  if (!(a * e).is_zero() || rank(e) != d || d != n - rank(a))
    throw PreconditionError("compute_deff: E is not a basis of ker A");

  const std::size_t rank_a = rank(a);
  const std::size_t rank_j = rank(j);

  DeffBreakdown out;
  out.via_kernel_JE = kernel_basis(j * e).cols();
  out.via_stacked_rank = n - rank(vstack(a, j));
  out.via_grassmann = n - rank_a - rank_j + row_intersection_dim(a, j);

  auto fail = [&](const std::string& what) {
    throw InvariantViolation("d_eff formulas disagree (" + what + "): dim ker JE = " +
                             std::to_string(out.via_kernel_JE) + ", n - rank[A;J] = " +
                             std::to_string(out.via_stacked_rank) + ", Grassmann = " + std::to_string(out.via_grassmann));
  };
  if (out.via_kernel_JE != out.via_stacked_rank || out.via_stacked_rank != out.via_grassmann) fail("general");

  if (check_scale_invariance(a, j)) {
    out.via_C_rank = d - rank(compute_C(j, e));
    const std::size_t simplified = n - rank_a - rank_j;
    if (*out.via_C_rank != out.via_stacked_rank || simplified != out.via_stacked_rank) fail("scale invariant");
  }
  return out;
}

struct Selection {
  std::vector<std::size_t> selected;   // non-pivot columns of rref(C)
  std::vector<RatVector> relations;    // nonzero rows of rref(C)
};

/// Reads an independent set of π-groups off the reduced echelon form of C.
/// Each relation r means prod_k π_k^{r_k} is constant on the constraint
/// manifold.
inline Selection select_independent(const RatMatrix& c) {
  const auto r = rref(c);
  Selection out;
  std::vector<bool> is_pivot(c.cols(), false);
  for (auto p : r.pivot_cols) is_pivot[p] = true;
  for (std::size_t k = 0; k < c.cols(); ++k)
    if (!is_pivot[k]) out.selected.push_back(k);
  for (std::size_t i = 0; i < r.rank; ++i) {
    const auto row = r.rref.row(i);
    out.relations.emplace_back(row.begin(), row.end());
  }
  return out;
}

/// A constraint-induced identity among the π-groups.
struct Relation {
  RatVector coefficients;       // row of rref(C)
  IntVector exponents;          // primitive integer form, over the π-groups
  IntVector quantity_exponents; // E·exponents, over the quantities
  std::optional<Rational> constant;  // known when it is rational
  std::string constant_text;         // "const" when a pointwise row is involved
  std::string text;                  // e.g. "pi2 / pi3 = 1"
};

struct AnalysisReport {
  Model model;
  std::size_t n = 0, m = 0, ell = 0, d = 0, d_eff = 0;
  std::size_t rank_A = 0, rank_J = 0;
  RatMatrix A, J, E;
  std::vector<PiGroup> groups;
  bool scale_invariant = true;
  bool pointwise = false;  // some constraint row was supplied pointwise
  DeffBreakdown deff;
  std::optional<RatMatrix> C, rref_C;
  std::optional<std::vector<std::size_t>> selected;
  std::optional<std::vector<Relation>> relations;
  std::vector<std::string> warnings;
};

inline std::string pi_name(std::size_t k) { return "pi" + std::to_string(k + 1); }

/// "pi1 * pi2^2 / (pi3 * pi4)".
inline std::string render_pi_monomial(const IntVector& exponents) {
  std::vector<std::string> num, den;
  for (std::size_t k = 0; k < exponents.size(); ++k) {
    if (exponents[k] > 0) num.push_back(detail::render_factor(pi_name(k), exponents[k]));
    if (exponents[k] < 0) den.push_back(detail::render_factor(pi_name(k), -exponents[k]));
  }
  std::string out = num.empty() ? "1" : detail::join_factors(num, " * ");
  if (den.size() == 1) out += " / " + den.front();
  if (den.size() > 1) out += " / (" + detail::join_factors(den, " * ") + ")";
  return out;
}

namespace detail {

inline std::string render_power(const Rational& base, const Rational& exponent) {
  std::string b = is_integer(base) ? to_string(base) : "(" + to_string(base) + ")";
  if (exponent == 1) return b;
  if (is_integer(exponent) && exponent > 0) return b + "^" + to_string(exponent);
  return b + "^(" + to_string(exponent) + ")";
}

/// Value of x^v on the constraint manifold, where v lies in the row space
/// of J: writing v = Jᵀα gives x^v = prod_k K_k^{α_k}.
inline void relation_constant(const Model& model, const RatMatrix& j, const IntVector& v, Relation& rel) {
  const std::size_t ell = j.rows();
  RatMatrix aug = hstack(transpose(j), RatMatrix::from_columns({to_rational(v)}, j.cols()));
  const auto r = rref(aug);
  if (!r.pivot_cols.empty() && r.pivot_cols.back() == ell)
    throw InvariantViolation("relation is not implied by the constraints");

  RatVector alpha(ell, Rational(0));
  for (std::size_t i = 0; i < r.rank; ++i) alpha[r.pivot_cols[i]] = r.rref(i, ell);

  Rational value = 1;
  bool exact = true;
  std::vector<std::string> factors;
  for (std::size_t k = 0; k < ell; ++k) {
    if (alpha[k] == 0) continue;
    const auto& c = model.constraints[k];
    if (c.kind == Constraint::Kind::pointwise) {
      rel.constant.reset();
      rel.constant_text = "const";
      return;
    }
    if (c.constant == 1) continue;
    factors.push_back(render_power(c.constant, alpha[k]));
    if (auto p = exact_pow(c.constant, alpha[k])) {
      value *= *p;
    } else {
      exact = false;
    }
  }
  if (exact) {
    rel.constant = value;
    rel.constant_text = to_string(value);
  } else {
    rel.constant.reset();
    rel.constant_text = join_factors(factors, "·");
  }
}

}  // namespace detail

/// Full constrained analysis: dimension matrix, π-basis, Jacobian, scale
/// invariance, d_eff, and (for scale-invariant constraints) the reduction
/// matrix C with the independent selection and the relations it implies.
inline AnalysisReport analyze(const Model& model) {
  validate_model(model);
  AnalysisReport rep;
  rep.model = model;
  rep.n = model.n();
  rep.m = model.m();
  rep.ell = model.constraints.size();

  rep.A = build_dimension_matrix(model);
  rep.rank_A = rank(rep.A);
  rep.d = buckingham_count(rep.A);
  auto basis = pi_basis(model, rep.A);
  rep.E = std::move(basis.E);
  rep.groups = std::move(basis.groups);

  rep.J = constraint_jacobian(model);
  rep.rank_J = rank(rep.J);
  for (std::size_t k = 0; k < model.constraints.size(); ++k) {
    if (model.constraints[k].kind == Constraint::Kind::pointwise) {
      rep.pointwise = true;
      rep.warnings.push_back("constraint " + std::to_string(k + 1) +
                             " is a pointwise Jacobian row; results hold at the analysis point only");
    }
  }

  rep.scale_invariant = check_scale_invariance(rep.A, rep.J);
  rep.deff = compute_deff(rep.A, rep.J, rep.E);
  rep.d_eff = rep.deff.via_stacked_rank;

  if (!rep.scale_invariant) {
    rep.warnings.push_back("constraints are not scale invariant (J·A^T != 0); C-based elimination skipped");
    return rep;
  }

  rep.C = compute_C(rep.J, rep.E);
  rep.rref_C = rref(*rep.C).rref;
  auto sel = select_independent(*rep.C);
  rep.selected = sel.selected;
  rep.relations.emplace();
  for (auto& row : sel.relations) {
    Relation rel;
    rel.coefficients = row;
    rel.exponents = normalize_primitive(row);
    const RatVector expanded = rep.E * to_rational(rel.exponents);
    for (const auto& x : expanded) rel.quantity_exponents.push_back(numerator(x));
    detail::relation_constant(model, rep.J, rel.quantity_exponents, rel);
    rel.text = render_pi_monomial(rel.exponents) + " = " + rel.constant_text;
    rep.relations->push_back(std::move(rel));
  }
  if (rep.selected->size() != rep.d_eff || rep.relations->size() != rank(*rep.C))
    throw InvariantViolation("selection size does not match d_eff");
  return rep;
}

}  // namespace pim
