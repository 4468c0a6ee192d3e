#pragma once

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "pim/errors.hpp"
#include "pim/matrix.hpp"
#include "pim/rational.hpp"
#include "pim/ratlin.hpp"

namespace pim {

/// Ordered base dimensions D_1..D_m.
struct DimensionSystem {
  std::vector<std::string> names;

  std::size_t size() const { return names.size(); }

  std::optional<std::size_t> index_of(std::string_view name) const {
    for (std::size_t i = 0; i < names.size(); ++i)
      if (names[i] == name) return i;
    return std::nullopt;
  }

  friend bool operator==(const DimensionSystem&, const DimensionSystem&) = default;
};

/// A physical quantity and the exponent of each base dimension in its unit
/// (one column of the dimension matrix).
struct Quantity {
  std::string name;
  RatVector dim_exponents;

  friend bool operator==(const Quantity&, const Quantity&) = default;
};

/// One row of the constraint Jacobian.
///
/// A monomial constraint prod_j x_j^{c_j} = K is linear in log space, so its
/// Jacobian row is the exponent vector c everywhere. A pointwise row is a
/// Jacobian row supplied directly for a general constraint, valid only at
/// the point where it was evaluated.
struct Constraint {
  enum class Kind { monomial, pointwise };

  Kind kind = Kind::monomial;
  RatVector row;
  Rational constant = 1;  // K; meaningful for monomial constraints only

  static Constraint monomial(RatVector exponents, Rational constant) {
    return {Kind::monomial, std::move(exponents), std::move(constant)};
  }
  static Constraint pointwise(RatVector entries) { return {Kind::pointwise, std::move(entries), Rational(1)}; }

  friend bool operator==(const Constraint&, const Constraint&) = default;
};

struct Model {
  DimensionSystem dims;
  std::vector<Quantity> quantities;
  std::vector<Constraint> constraints;
  std::optional<RatMatrix> basis_override;  // n×d, columns span ker A

  std::size_t n() const { return quantities.size(); }
  std::size_t m() const { return dims.size(); }

  std::optional<std::size_t> quantity_index(std::string_view name) const {
    for (std::size_t j = 0; j < quantities.size(); ++j)
      if (quantities[j].name == name) return j;
    return std::nullopt;
  }

  std::vector<std::string> quantity_names() const {
    std::vector<std::string> out;
    for (const auto& q : quantities) out.push_back(q.name);
    return out;
  }

  friend bool operator==(const Model&, const Model&) = default;
};

/// A candidate dimensionless group x^e.
struct PiGroup {
  IntVector exponents;  // primitive, first nonzero positive
  std::string label;

  friend bool operator==(const PiGroup&, const PiGroup&) = default;
};

/// Multiplicative unit change D_i -> s_i D_i.
struct RescaleVector {
  RatVector scales;
};

inline bool is_identifier(std::string_view s) {
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  for (char c : s)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
  return true;
}

/// Checks the structural invariants of a model assembled in code. Parsed
/// models satisfy them by construction.
inline void validate_model(const Model& model) {
  if (model.dims.names.empty()) throw ValidationError("model declares no dimensions");
  std::set<std::string> seen;
  for (const auto& d : model.dims.names) {
    if (!is_identifier(d)) throw ValidationError("invalid dimension name '" + d + "'");
    if (!seen.insert(d).second) throw ValidationError("duplicate dimension '" + d + "'");
  }
  seen.clear();
  for (const auto& q : model.quantities) {
    if (!is_identifier(q.name)) throw ValidationError("invalid quantity name '" + q.name + "'");
    if (!seen.insert(q.name).second) throw ValidationError("duplicate quantity '" + q.name + "'");
    if (q.dim_exponents.size() != model.m())
      throw ValidationError("quantity '" + q.name + "' has the wrong number of dimension exponents");
  }
  for (std::size_t k = 0; k < model.constraints.size(); ++k) {
    const auto& c = model.constraints[k];
    if (c.row.size() != model.n())
      throw ValidationError("constraint " + std::to_string(k + 1) + " has the wrong length");
    if (c.kind == Constraint::Kind::monomial) {
      if (c.constant <= 0) throw ValidationError("constraint " + std::to_string(k + 1) + " has a nonpositive constant");
      if (std::all_of(c.row.begin(), c.row.end(), [](const Rational& x) { return x == 0; }))
        throw ValidationError("constraint " + std::to_string(k + 1) + " has no nonzero exponent");
    }
  }
  if (model.basis_override && model.basis_override->rows() != model.n())
    throw ValidationError("basis_override rows must have one entry per quantity");
}

/// A[i][j] = exponent of dimension i in quantity j.
inline RatMatrix build_dimension_matrix(const Model& model) {
  RatMatrix a(model.m(), model.n());
  for (std::size_t j = 0; j < model.n(); ++j)
    for (std::size_t i = 0; i < model.m(); ++i) a(i, j) = model.quantities[j].dim_exponents[i];
  return a;
}

/// Number of independent dimensionless groups, n - rank A.
inline std::size_t buckingham_count(const RatMatrix& a) { return a.cols() - rank(a); }

namespace detail {

inline std::string render_factor(const std::string& name, const Integer& power) {
  return power == 1 ? name : name + "^" + power.str();
}

inline std::string join_factors(const std::vector<std::string>& factors, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < factors.size(); ++i) {
    if (i) out += sep;
    out += factors[i];
  }
  return out;
}

}  // namespace detail

/// Renders x^e as a fraction: positive powers over negative powers, factors
/// in declaration order joined by a middle dot, parenthesised when a side
/// has more than one factor and a denominator exists.
inline std::string render_monomial_label(const std::vector<std::string>& names, const IntVector& exponents) {
  if (names.size() != exponents.size()) throw DimensionError("label: names and exponents differ in length");
  std::vector<std::string> num, den;
  for (std::size_t j = 0; j < names.size(); ++j) {
    if (exponents[j] > 0) num.push_back(detail::render_factor(names[j], exponents[j]));
    if (exponents[j] < 0) den.push_back(detail::render_factor(names[j], -exponents[j]));
  }
  constexpr std::string_view dot = "·";
  if (den.empty()) return num.empty() ? "1" : detail::join_factors(num, dot);
  auto side = [&](const std::vector<std::string>& f) {
    if (f.empty()) return std::string("1");
    if (f.size() == 1) return f.front();
    return "(" + detail::join_factors(f, dot) + ")";
  };
  return side(num) + "/" + side(den);
}

/// Inverse of render_monomial_label. Accepts '·' or '*' between factors.
/// Returns nothing on malformed text or an unknown name.
inline std::optional<IntVector> parse_monomial_label(std::string_view text, const std::vector<std::string>& names) {
  IntVector exps(names.size(), Integer(0));
  std::size_t pos = 0;
  auto at = [&](std::string_view s) { return text.substr(pos, s.size()) == s; };

  auto parse_factor = [&](int sign) -> bool {
    std::size_t start = pos;
    while (pos < text.size() && (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_')) ++pos;
    std::string_view name = text.substr(start, pos - start);
    Integer power = 1;
    if (pos < text.size() && text[pos] == '^') {
      ++pos;
      std::size_t ds = pos;
      if (pos < text.size() && text[pos] == '-') ++pos;
      while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
      auto p = parse_rational(text.substr(ds, pos - ds));
      if (!p || !is_integer(*p)) return false;
      power = numerator(*p);
    }
    if (name == "1" && power == 1) return true;
    if (!is_identifier(name)) return false;
    for (std::size_t j = 0; j < names.size(); ++j)
      if (names[j] == name) {
        exps[j] += sign * power;
        return true;
      }
    return false;
  };
  auto parse_side = [&](int sign) -> bool {
    bool paren = at("(");
    if (paren) ++pos;
    if (!parse_factor(sign)) return false;
    while (true) {
      if (at("·")) {
        pos += std::string_view("·").size();
      } else if (at("*")) {
        ++pos;
      } else {
        break;
      }
      if (!parse_factor(sign)) return false;
    }
    if (paren) {
      if (!at(")")) return false;
      ++pos;
    }
    return true;
  };

  if (!parse_side(1)) return std::nullopt;
  if (at("/")) {
    ++pos;
    if (!parse_side(-1)) return std::nullopt;
  }
  if (pos != text.size()) return std::nullopt;
  return exps;
}

struct PiBasis {
  RatMatrix E;  // n×d, columns are the groups' exponent vectors
  std::vector<PiGroup> groups;
};

/// Chooses the kernel basis E of A and the corresponding π-groups.
///
/// With an override, each column is checked to lie in ker A and the set to
/// have full rank d = n - rank A; columns are then scaled to primitive form.
/// Without one, E is the deterministic nullspace basis of A.
inline PiBasis pi_basis(const Model& model, const RatMatrix& a) {
  const std::size_t n = a.cols();
  const std::size_t d = buckingham_count(a);
  std::vector<RatVector> columns;

  if (model.basis_override) {
    const RatMatrix& e = *model.basis_override;
    if (e.rows() != n)
      throw ValidationError("basis_override: expected vectors of length " + std::to_string(n) + ", got " +
                            std::to_string(e.rows()));
    if (e.cols() != d)
      throw ValidationError("basis_override: expected " + std::to_string(d) + " vectors (n - rank A), got " +
                            std::to_string(e.cols()));
    for (std::size_t k = 0; k < e.cols(); ++k) {
      const RatVector col = e.column(k);
      if (!(a * col == RatVector(a.rows(), Rational(0))))
        throw ValidationError("basis_override: vector " + std::to_string(k + 1) + " is not dimensionless (A·e != 0)");
      if (std::all_of(col.begin(), col.end(), [](const Rational& x) { return x == 0; }))
        throw ValidationError("basis_override: vector " + std::to_string(k + 1) + " is zero");
    }
    if (rank(e) < e.cols()) {
      // first vector that depends on its predecessors
      for (std::size_t k = 1; k <= e.cols(); ++k) {
        RatMatrix prefix(n, k);
        for (std::size_t i = 0; i < n; ++i)
          for (std::size_t j = 0; j < k; ++j) prefix(i, j) = e(i, j);
        if (rank(prefix) < k)
          throw ValidationError("basis_override: vector " + std::to_string(k) +
                                " is linearly dependent on the vectors before it");
      }
    }
    for (std::size_t k = 0; k < e.cols(); ++k) columns.push_back(to_rational(normalize_primitive(e.column(k))));
  } else {
    const RatMatrix e = nullspace_basis(a);
    for (std::size_t k = 0; k < e.cols(); ++k) columns.push_back(e.column(k));
  }

  PiBasis out{RatMatrix::from_columns(columns, n), {}};
  const auto names = model.quantity_names();
  for (const auto& col : columns) {
    IntVector exps;
    for (const auto& x : col) exps.push_back(numerator(x));
    out.groups.push_back({exps, render_monomial_label(names, exps)});
  }
  return out;
}

/// prod_j values_j^exponents_j, exactly.
inline Rational evaluate_monomial(const RatVector& values, const IntVector& exponents) {
  if (values.size() != exponents.size()) throw DimensionError("evaluate_monomial: length mismatch");
  Rational out = 1;
  for (std::size_t j = 0; j < values.size(); ++j) {
    if (values[j] <= 0)
      throw DomainError("quantity value " + to_string(values[j]) + " is not positive; logarithmic variables need x > 0");
    if (exponents[j] != 0) out *= pow(values[j], exponents[j]);
  }
  return out;
}

/// Values after the unit change D_i -> s_i D_i: x_j' = x_j prod_i s_i^{a_ij}.
inline RatVector apply_rescale(const Model& model, const RatVector& values, const RescaleVector& s) {
  if (values.size() != model.n()) throw DimensionError("apply_rescale: one value per quantity expected");
  if (s.scales.size() != model.m()) throw DimensionError("apply_rescale: one scale per dimension expected");
  for (const auto& x : s.scales)
    if (x <= 0) throw DomainError("rescale factor " + to_string(x) + " is not positive");
  RatVector out = values;
  for (std::size_t j = 0; j < model.n(); ++j) {
    if (values[j] <= 0) throw DomainError("quantity value " + to_string(values[j]) + " is not positive");
    for (std::size_t i = 0; i < model.m(); ++i) {
      const Rational& a = model.quantities[j].dim_exponents[i];
      if (a == 0 || s.scales[i] == 1) continue;
      if (!is_integer(a))
        throw UnsupportedRescale("quantity '" + model.quantities[j].name + "' has non-integer exponent " + to_string(a) +
                                 " in dimension '" + model.dims.names[i] + "'");
      out[j] *= pow(s.scales[i], numerator(a));
    }
  }
  return out;
}

}  // namespace pim
