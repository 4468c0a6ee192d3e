#pragma once

// Plain-text model files (.pim).
//
//   # comment
//   dimensions: M, L, T
//   quantity F_D = M L T^-2
//   quantity nu  = L^2 T^-1
//   constraint nu * rho / mu = 1
//   jacobian_row: 0, 1, 0, 0, -1, 1
//   basis_override:
//     1, -1, -2, -2, 0, 0
//     0, 1, 1, 1, -1, 0
//
// Statements may appear in any order; names are resolved after the whole
// file has been read. Each basis_override row is one kernel vector.

#include <cctype>
#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "pim/matrix.hpp"
#include "pim/model.hpp"
#include "pim/rational.hpp"

namespace pim {

struct SourceSpan {
  std::size_t line = 1;    // 1-based
  std::size_t column = 1;  // 1-based
  std::size_t length = 1;

  friend bool operator==(const SourceSpan&, const SourceSpan&) = default;
};

enum class ErrorCode { unknown_dimension, unknown_quantity, duplicate_name, bad_exponent, bad_constant, syntax };

inline std::string_view code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::unknown_dimension: return "unknown-dimension";
    case ErrorCode::unknown_quantity: return "unknown-quantity";
    case ErrorCode::duplicate_name: return "duplicate-name";
    case ErrorCode::bad_exponent: return "bad-exponent";
    case ErrorCode::bad_constant: return "bad-constant";
    case ErrorCode::syntax: return "syntax";
  }
  return "syntax";
}

struct ParseError {
  SourceSpan span;
  ErrorCode code = ErrorCode::syntax;
  std::string message;
};

struct ParseResult {
  std::optional<Model> model;
  std::vector<ParseError> errors;

  bool ok() const { return model.has_value(); }
};

namespace detail {

struct Token {
  enum class Kind { ident, number, punct, end };
  Kind kind = Kind::end;
  std::string_view text;
  std::size_t column = 1;

  bool is(char c) const { return kind == Kind::punct && text.size() == 1 && text[0] == c; }
};

struct LexedLine {
  std::size_t number = 1;
  std::vector<Token> tokens;  // always terminated by an end token
  std::optional<ParseError> error;
};

inline bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

inline LexedLine lex_line(std::string_view line, std::size_t number, std::size_t column_offset = 0) {
  LexedLine out;
  out.number = number;
  std::size_t i = 0;
  auto push = [&](Token::Kind kind, std::size_t start, std::size_t end) {
    out.tokens.push_back({kind, line.substr(start, end - start), start + 1 + column_offset});
  };
  while (i < line.size()) {
    const unsigned char c = static_cast<unsigned char>(line[i]);
    if (c == '#') break;
    if (std::isspace(c)) {
      ++i;
      continue;
    }
    const std::size_t start = i;
    if (std::isalpha(c) || c == '_') {
      while (i < line.size() && (std::isalnum(static_cast<unsigned char>(line[i])) || line[i] == '_')) ++i;
      push(Token::Kind::ident, start, i);
    } else if (std::isdigit(c)) {
      // swallow trailing letters and dots so "2.5" or "3x" surface as one bad literal
      while (i < line.size() &&
             (std::isalnum(static_cast<unsigned char>(line[i])) || line[i] == '_' || line[i] == '.'))
        ++i;
      push(Token::Kind::number, start, i);
    } else if (std::string_view("=,*/^:-().").find(static_cast<char>(c)) != std::string_view::npos) {
      ++i;
      push(Token::Kind::punct, start, i);
    } else {
      // one UTF-8 sequence
      ++i;
      while (i < line.size() && (static_cast<unsigned char>(line[i]) & 0xC0) == 0x80) ++i;
      out.error = ParseError{{number, start + 1 + column_offset, 1}, ErrorCode::syntax,
                             "unexpected character '" + std::string(line.substr(start, i - start)) + "'"};
      break;
    }
  }
  const std::size_t end_col = (out.tokens.empty() ? 1 : out.tokens.back().column + out.tokens.back().text.size());
  out.tokens.push_back({Token::Kind::end, {}, end_col});
  return out;
}

/// Cursor over one lexed line. Methods that fail return a ParseError.
class LineCursor {
 public:
  explicit LineCursor(const LexedLine& line) : line_(line) {}

  const Token& peek(std::size_t ahead = 0) const {
    const std::size_t k = std::min(pos_ + ahead, line_.tokens.size() - 1);
    return line_.tokens[k];
  }
  const Token& next() {
    const Token& t = peek();
    if (pos_ + 1 < line_.tokens.size()) ++pos_;
    return t;
  }
  bool at_end() const { return peek().kind == Token::Kind::end; }

  SourceSpan span_of(const Token& t) const {
    if (t.kind == Token::Kind::end) {
      // point at the last real token
      if (line_.tokens.size() > 1) return span_of(line_.tokens[line_.tokens.size() - 2]);
      return {line_.number, 1, 1};
    }
    return {line_.number, t.column, std::max<std::size_t>(1, t.text.size())};
  }
  SourceSpan span_between(const Token& first, const Token& last) const {
    SourceSpan s = span_of(first);
    const SourceSpan e = span_of(last);
    s.length = e.column + e.length - s.column;
    return s;
  }

  ParseError error(const Token& t, ErrorCode code, std::string message) const {
    return {span_of(t), code, std::move(message)};
  }

  /// ['-'] NUMBER ('/' NUMBER)?. On failure reports `code` over the literal.
  std::variant<Rational, ParseError> rational(ErrorCode code, std::string_view what) {
    const Token& first = peek();
    bool negative = false;
    if (first.is('-')) {
      negative = true;
      next();
    }
    const Token& num = next();
    if (num.kind != Token::Kind::number || !all_digits(num.text)) {
      const Token& bad = num.kind == Token::Kind::end && negative ? first : num;
      return error(bad, code, "expected a rational " + std::string(what) + ", found '" + std::string(bad.text) + "'");
    }
    Integer n(std::string(num.text));
    Integer d = 1;
    const Token* last = &num;
    if (peek().is('/') && peek(1).kind == Token::Kind::number) {
      next();
      const Token& den = next();
      last = &den;
      if (!all_digits(den.text))
        return error(den, code, "expected a rational " + std::string(what) + ", found '" + std::string(den.text) + "'");
      d = Integer(std::string(den.text));
      if (d == 0) return ParseError{span_between(first, *last), code, "zero denominator in " + std::string(what)};
    }
    Rational r(n, d);
    if (negative) r = -r;
    last_span_ = span_between(first, *last);
    return r;
  }

  SourceSpan last_span() const { return last_span_; }

 private:
  const LexedLine& line_;
  std::size_t pos_ = 0;
  SourceSpan last_span_;
};

/// dimexpr := '1' | term+ ; term := IDENT ('^' rational)?
inline std::variant<RatVector, ParseError> parse_dimexpr_tokens(LineCursor& cur, const DimensionSystem& dims) {
  RatVector out(dims.size(), Rational(0));
  if (cur.peek().kind == Token::Kind::number && cur.peek().text == "1" && cur.peek(1).kind == Token::Kind::end) {
    cur.next();
    return out;
  }
  if (cur.at_end()) return cur.error(cur.peek(), ErrorCode::syntax, "expected a dimension expression");
  while (!cur.at_end()) {
    const Token& name = cur.next();
    if (name.kind != Token::Kind::ident)
      return cur.error(name, ErrorCode::syntax, "expected a dimension name, found '" + std::string(name.text) + "'");
    auto idx = dims.index_of(name.text);
    if (!idx) return cur.error(name, ErrorCode::unknown_dimension, "unknown dimension '" + std::string(name.text) + "'");
    Rational power = 1;
    if (cur.peek().is('^')) {
      cur.next();
      auto r = cur.rational(ErrorCode::bad_exponent, "exponent");
      if (auto* e = std::get_if<ParseError>(&r)) return *e;
      power = std::get<Rational>(r);
    }
    out[*idx] += power;
  }
  return out;
}

/// monomial := factor (('*'|'/') factor)* ; factor := IDENT ('^' rational)?
inline std::variant<RatVector, ParseError> parse_monomial_tokens(LineCursor& cur, const Model& model) {
  RatVector out(model.n(), Rational(0));
  int sign = 1;
  while (true) {
    const Token& name = cur.next();
    if (name.kind != Token::Kind::ident)
      return cur.error(name, ErrorCode::syntax, "expected a quantity name, found '" + std::string(name.text) + "'");
    auto idx = model.quantity_index(name.text);
    if (!idx) return cur.error(name, ErrorCode::unknown_quantity, "unknown quantity '" + std::string(name.text) + "'");
    Rational power = 1;
    if (cur.peek().is('^')) {
      cur.next();
      auto r = cur.rational(ErrorCode::bad_exponent, "exponent");
      if (auto* e = std::get_if<ParseError>(&r)) return *e;
      power = std::get<Rational>(r);
    }
    out[*idx] += sign * power;
    if (cur.peek().is('*')) {
      sign = 1;
    } else if (cur.peek().is('/')) {
      sign = -1;
    } else {
      break;
    }
    cur.next();
  }
  return out;
}

inline std::variant<RatVector, ParseError> parse_row(LineCursor& cur) {
  RatVector row;
  while (true) {
    auto r = cur.rational(ErrorCode::syntax, "entry");
    if (auto* e = std::get_if<ParseError>(&r)) return *e;
    row.push_back(std::get<Rational>(r));
    if (cur.at_end()) break;
    const Token& sep = cur.next();
    if (!sep.is(',')) return cur.error(sep, ErrorCode::syntax, "expected ',' between entries");
  }
  return row;
}

inline std::string render_exponent(const Rational& e) { return e == 1 ? "" : "^" + to_string(e); }

}  // namespace detail

/// Parses a dimension expression such as "M L T^-2" against `dims`.
/// Spans refer to line 1 of `text`.
inline std::variant<RatVector, ParseError> parse_dimexpr(std::string_view text, const DimensionSystem& dims) {
  const auto line = detail::lex_line(text, 1);
  if (line.error) return *line.error;
  detail::LineCursor cur(line);
  auto r = detail::parse_dimexpr_tokens(cur, dims);
  if (std::holds_alternative<RatVector>(r) && !cur.at_end())
    return cur.error(cur.peek(), ErrorCode::syntax, "unexpected trailing input");
  return r;
}

/// Parses a whole model file, collecting one error per offending line.
inline ParseResult parse_model(std::string_view text) {
  using detail::LineCursor;
  using detail::Token;

  std::vector<detail::LexedLine> lines;
  {
    std::size_t number = 1, start = 0;
    while (start <= text.size()) {
      std::size_t end = text.find('\n', start);
      if (end == std::string_view::npos) end = text.size();
      std::string_view raw = text.substr(start, end - start);
      if (!raw.empty() && raw.back() == '\r') raw.remove_suffix(1);
      lines.push_back(detail::lex_line(raw, number++));
      start = end + 1;
    }
  }

  ParseResult result;
  auto fail = [&](ParseError e) { result.errors.push_back(std::move(e)); };

  enum class Kind { dimensions, quantity, constraint, jacobian_row, basis_header, basis_row };
  struct Statement {
    Kind kind;
    const detail::LexedLine* line;
  };
  std::vector<Statement> statements;
  bool in_basis = false;
  for (const auto& line : lines) {
    if (line.error) {
      fail(*line.error);
      continue;
    }
    const Token& head = line.tokens.front();
    if (head.kind == Token::Kind::end) continue;
    const bool numeric = head.kind == Token::Kind::number || head.is('-');
    if (in_basis && numeric) {
      statements.push_back({Kind::basis_row, &line});
      continue;
    }
    in_basis = false;
    LineCursor cur(line);
    if (head.kind == Token::Kind::ident && head.text == "dimensions") {
      statements.push_back({Kind::dimensions, &line});
    } else if (head.kind == Token::Kind::ident && head.text == "quantity") {
      statements.push_back({Kind::quantity, &line});
    } else if (head.kind == Token::Kind::ident && head.text == "constraint") {
      statements.push_back({Kind::constraint, &line});
    } else if (head.kind == Token::Kind::ident && head.text == "jacobian_row") {
      statements.push_back({Kind::jacobian_row, &line});
    } else if (head.kind == Token::Kind::ident && head.text == "basis_override") {
      statements.push_back({Kind::basis_header, &line});
      in_basis = true;
    } else if (numeric) {
      fail(cur.error(head, ErrorCode::syntax, "vector row outside a basis_override block"));
    } else {
      fail(cur.error(head, ErrorCode::syntax, "unknown statement '" + std::string(head.text) + "'"));
    }
  }

  Model model;

  // dimensions
  bool have_dims = false;
  for (const auto& st : statements) {
    if (st.kind != Kind::dimensions) continue;
    LineCursor cur(*st.line);
    const Token& head = cur.next();
    if (have_dims) {
      fail(cur.error(head, ErrorCode::syntax, "dimensions declared more than once"));
      continue;
    }
    have_dims = true;
    if (!cur.next().is(':')) {
      fail(cur.error(head, ErrorCode::syntax, "expected ':' after 'dimensions'"));
      continue;
    }
    while (true) {
      const Token& name = cur.next();
      if (name.kind != Token::Kind::ident) {
        fail(cur.error(name, ErrorCode::syntax, "expected a dimension name"));
        break;
      }
      if (model.dims.index_of(name.text)) {
        fail(cur.error(name, ErrorCode::duplicate_name, "dimension '" + std::string(name.text) + "' declared twice"));
        break;
      }
      model.dims.names.emplace_back(name.text);
      if (cur.at_end()) break;
      const Token& sep = cur.next();
      if (!sep.is(',')) {
        fail(cur.error(sep, ErrorCode::syntax, "expected ',' between dimension names"));
        break;
      }
    }
  }
  if (!have_dims) {
    fail({{1, 1, 1}, ErrorCode::syntax, "missing 'dimensions:' declaration"});
    return result;
  }

  // quantities; names whose declaration failed are remembered so later
  // statements using them do not report follow-on errors
  std::set<std::string, std::less<>> broken;
  bool any_quantity = false;
  for (const auto& st : statements) {
    if (st.kind != Kind::quantity) continue;
    any_quantity = true;
    LineCursor cur(*st.line);
    cur.next();
    const Token& name = cur.next();
    if (name.kind != Token::Kind::ident) {
      fail(cur.error(name, ErrorCode::syntax, "expected a quantity name"));
      continue;
    }
    if (model.quantity_index(name.text)) {
      fail(cur.error(name, ErrorCode::duplicate_name, "quantity '" + std::string(name.text) + "' declared twice"));
      continue;
    }
    const Token& eq = cur.next();
    if (!eq.is('=')) {
      fail(cur.error(eq, ErrorCode::syntax, "expected '=' after quantity name"));
      continue;
    }
    auto r = detail::parse_dimexpr_tokens(cur, model.dims);
    if (auto* e = std::get_if<ParseError>(&r)) {
      fail(*e);
      broken.emplace(name.text);
      continue;
    }
    model.quantities.push_back({std::string(name.text), std::get<RatVector>(r)});
  }
  if (!any_quantity) fail({{1, 1, 1}, ErrorCode::syntax, "model declares no quantities"});

  auto mentions_broken = [&](const detail::LexedLine& line) {
    for (const auto& t : line.tokens)
      if (t.kind == Token::Kind::ident && broken.count(t.text)) return true;
    return false;
  };

  // constraints, in declaration order
  for (const auto& st : statements) {
    if (st.kind == Kind::constraint) {
      if (mentions_broken(*st.line)) continue;
      LineCursor cur(*st.line);
      cur.next();
      const Token& first = cur.peek();
      auto r = detail::parse_monomial_tokens(cur, model);
      if (auto* e = std::get_if<ParseError>(&r)) {
        fail(*e);
        continue;
      }
      const Token& eq = cur.next();
      if (!eq.is('=')) {
        fail(cur.error(eq, ErrorCode::syntax, "expected '=' after constraint monomial"));
        continue;
      }
      const RatVector& row = std::get<RatVector>(r);
      if (std::all_of(row.begin(), row.end(), [](const Rational& x) { return x == 0; })) {
        fail(cur.error(first, ErrorCode::bad_exponent, "constraint monomial has no net exponent"));
        continue;
      }
      auto k = cur.rational(ErrorCode::bad_constant, "constant");
      if (auto* e = std::get_if<ParseError>(&k)) {
        fail(*e);
        continue;
      }
      const Rational constant = std::get<Rational>(k);
      if (constant <= 0) {
        fail({cur.last_span(), ErrorCode::bad_constant, "constraint constant must be positive"});
        continue;
      }
      if (!cur.at_end()) {
        fail(cur.error(cur.peek(), ErrorCode::syntax, "unexpected trailing input"));
        continue;
      }
      model.constraints.push_back(Constraint::monomial(row, constant));
    } else if (st.kind == Kind::jacobian_row) {
      LineCursor cur(*st.line);
      const Token& head = cur.next();
      if (!cur.next().is(':')) {
        fail(cur.error(head, ErrorCode::syntax, "expected ':' after 'jacobian_row'"));
        continue;
      }
      const Token& first = cur.peek();
      auto r = detail::parse_row(cur);
      if (auto* e = std::get_if<ParseError>(&r)) {
        fail(*e);
        continue;
      }
      const RatVector& row = std::get<RatVector>(r);
      if (row.size() != model.n() && broken.empty()) {
        fail({cur.span_between(first, cur.peek()), ErrorCode::syntax,
              "jacobian_row has " + std::to_string(row.size()) + " entries, expected " + std::to_string(model.n())});
        continue;
      }
      model.constraints.push_back(Constraint::pointwise(row));
    }
  }

  // basis override
  bool have_basis = false;
  std::vector<RatVector> basis;
  for (const auto& st : statements) {
    if (st.kind == Kind::basis_header) {
      LineCursor cur(*st.line);
      const Token& head = cur.next();
      if (have_basis) {
        fail(cur.error(head, ErrorCode::syntax, "basis_override declared more than once"));
        continue;
      }
      have_basis = true;
      const Token& colon = cur.next();
      if (!colon.is(':') || !cur.at_end()) {
        fail(cur.error(colon.is(':') ? cur.peek() : head, ErrorCode::syntax,
                       "expected 'basis_override:' alone on its line"));
      }
    } else if (st.kind == Kind::basis_row) {
      LineCursor cur(*st.line);
      const Token& first = cur.peek();
      auto r = detail::parse_row(cur);
      if (auto* e = std::get_if<ParseError>(&r)) {
        fail(*e);
        continue;
      }
      const RatVector& row = std::get<RatVector>(r);
      if (row.size() != model.n() && broken.empty()) {
        fail({cur.span_between(first, cur.peek()), ErrorCode::syntax,
              "basis vector has " + std::to_string(row.size()) + " entries, expected " + std::to_string(model.n())});
        continue;
      }
      basis.push_back(row);
    }
  }
  if (have_basis && broken.empty()) model.basis_override = RatMatrix::from_columns(basis, model.n());

  if (result.errors.empty()) result.model = std::move(model);
  return result;
}

inline std::string render_dimexpr(const DimensionSystem& dims, const RatVector& exponents) {
  std::string out;
  for (std::size_t i = 0; i < dims.size(); ++i) {
    if (exponents[i] == 0) continue;
    if (!out.empty()) out += ' ';
    out += dims.names[i] + detail::render_exponent(exponents[i]);
  }
  return out.empty() ? "1" : out;
}

/// "a * b^2 / c"; a leading negative power is written inline when there is
/// no positive factor.
inline std::string render_constraint_monomial(const std::vector<std::string>& names, const RatVector& exponents) {
  std::string out;
  for (std::size_t j = 0; j < names.size(); ++j) {
    if (exponents[j] <= 0) continue;
    if (!out.empty()) out += " * ";
    out += names[j] + detail::render_exponent(exponents[j]);
  }
  for (std::size_t j = 0; j < names.size(); ++j) {
    if (exponents[j] >= 0) continue;
    if (out.empty()) {
      out = names[j] + "^" + to_string(exponents[j]);
    } else {
      out += " / " + names[j] + detail::render_exponent(-exponents[j]);
    }
  }
  return out;
}

/// Writes a model back out in file syntax; parse_model reads it back to an
/// equal Model.
inline std::string render_model(const Model& model) {
  auto join_row = [](const RatVector& row) {
    std::string s;
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) s += ", ";
      s += to_string(row[i]);
    }
    return s;
  };
  std::string out = "dimensions: ";
  for (std::size_t i = 0; i < model.dims.size(); ++i) {
    if (i) out += ", ";
    out += model.dims.names[i];
  }
  out += '\n';
  for (const auto& q : model.quantities) out += "quantity " + q.name + " = " + render_dimexpr(model.dims, q.dim_exponents) + '\n';
  const auto names = model.quantity_names();
  for (const auto& c : model.constraints) {
    if (c.kind == Constraint::Kind::monomial) {
      out += "constraint " + render_constraint_monomial(names, c.row) + " = " + to_string(c.constant) + '\n';
    } else {
      out += "jacobian_row: " + join_row(c.row) + '\n';
    }
  }
  if (model.basis_override) {
    out += "basis_override:\n";
    for (std::size_t k = 0; k < model.basis_override->cols(); ++k) out += "  " + join_row(model.basis_override->column(k)) + '\n';
  }
  return out;
}

}  // namespace pim
