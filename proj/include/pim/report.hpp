#pragma once

#include <json.hpp>

#include <algorithm>
#include <sstream>
#include <string>

#include "pim/matrix.hpp"
#include "pim/rational.hpp"
#include "pim/reduce.hpp"

namespace pim {

enum class ReportFormat { text, json };

struct RenderOptions {
  bool color = false;  // ANSI styling, text format only
};

namespace detail {

inline nlohmann::ordered_json matrix_json(const RatMatrix& m) {
  auto out = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    auto row = nlohmann::ordered_json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(to_string(m(i, j)));
    out.push_back(std::move(row));
  }
  return out;
}

template <class Vec>
nlohmann::ordered_json vector_json(const Vec& v) {
  auto out = nlohmann::ordered_json::array();
  for (const auto& x : v) out.push_back(to_string(x));
  return out;
}

/// Objects one member per line; arrays of scalars or of arrays stay on one
/// line, so a matrix reads as [["0","1","-1"]].
inline void write_json(std::string& out, const nlohmann::ordered_json& j, std::size_t indent) {
  const bool nested_objects =
      j.is_array() && std::any_of(j.begin(), j.end(), [](const auto& x) { return x.is_object(); });
  if (j.is_object() && !j.empty()) {
    out += "{\n";
    std::size_t i = 0;
    for (const auto& [key, value] : j.items()) {
      out += std::string(indent + 2, ' ') + nlohmann::ordered_json(key).dump() + ": ";
      write_json(out, value, indent + 2);
      out += ++i < j.size() ? ",\n" : "\n";
    }
    out += std::string(indent, ' ') + "}";
  } else if (nested_objects) {
    out += "[\n";
    for (std::size_t i = 0; i < j.size(); ++i) {
      out += std::string(indent + 2, ' ');
      write_json(out, j[i], indent + 2);
      out += i + 1 < j.size() ? ",\n" : "\n";
    }
    out += std::string(indent, ' ') + "]";
  } else {
    out += j.dump();
  }
}

inline std::string render_json(const AnalysisReport& r) {
  using json = nlohmann::ordered_json;
  json j;
  j["schema"] = 1;
  j["dimensions"] = r.model.dims.names;
  j["quantities"] = r.model.quantity_names();
  j["n"] = r.n;
  j["m"] = r.m;
  j["ell"] = r.ell;
  j["rank_A"] = r.rank_A;
  j["rank_J"] = r.rank_J;
  j["d"] = r.d;
  j["d_eff"] = r.d_eff;
  j["deff"] = {{"kernel_JE", r.deff.via_kernel_JE},
               {"stacked_rank", r.deff.via_stacked_rank},
               {"grassmann", r.deff.via_grassmann},
               {"C_rank", r.deff.via_C_rank ? json(*r.deff.via_C_rank) : json(nullptr)}};
  j["scale_invariant"] = r.scale_invariant;
  j["pointwise"] = r.pointwise;

  auto constraints = json::array();
  for (const auto& c : r.model.constraints) {
    json entry;
    if (c.kind == Constraint::Kind::monomial) {
      entry["kind"] = "monomial";
      entry["exponents"] = vector_json(c.row);
      entry["constant"] = to_string(c.constant);
    } else {
      entry["kind"] = "pointwise";
      entry["exponents"] = vector_json(c.row);
      entry["constant"] = nullptr;
    }
    constraints.push_back(std::move(entry));
  }
  j["constraints"] = std::move(constraints);

  auto groups = json::array();
  for (std::size_t k = 0; k < r.groups.size(); ++k)
    groups.push_back({{"name", pi_name(k)}, {"label", r.groups[k].label}, {"exponents", vector_json(r.groups[k].exponents)}});
  j["pi_groups"] = std::move(groups);

  j["A"] = matrix_json(r.A);
  j["J"] = matrix_json(r.J);
  j["E"] = matrix_json(r.E);
  j["C"] = r.C ? matrix_json(*r.C) : json(nullptr);
  j["rref_C"] = r.rref_C ? matrix_json(*r.rref_C) : json(nullptr);
  j["selected"] = r.selected ? json(*r.selected) : json(nullptr);

  if (r.relations) {
    auto rels = json::array();
    for (const auto& rel : *r.relations)
      rels.push_back({{"coefficients", vector_json(rel.coefficients)},
                      {"exponents", vector_json(rel.exponents)},
                      {"quantity_exponents", vector_json(rel.quantity_exponents)},
                      {"constant", rel.constant ? json(to_string(*rel.constant)) : json(nullptr)},
                      {"text", rel.text}});
    j["relations"] = std::move(rels);
  } else {
    j["relations"] = nullptr;
  }
  j["warnings"] = r.warnings;
  std::string out;
  write_json(out, j, 0);
  return out + "\n";
}

inline std::string matrix_text(const RatMatrix& m, const std::string& indent) {
  if (m.rows() == 0) return indent + "(" + std::to_string(m.rows()) + "x" + std::to_string(m.cols()) + ", empty)\n";
  std::vector<std::size_t> width(m.cols(), 0);
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) width[j] = std::max(width[j], to_string(m(i, j)).size());
  std::string out;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    out += indent + "[";
    for (std::size_t j = 0; j < m.cols(); ++j) {
      const std::string s = to_string(m(i, j));
      out += std::string(width[j] - s.size() + (j ? 1 : 0), ' ') + s;
    }
    out += "]\n";
  }
  return out;
}

inline std::string render_text(const AnalysisReport& r, const RenderOptions& opt) {
  const std::string bold = opt.color ? "\x1b[1m" : "";
  const std::string green = opt.color ? "\x1b[32m" : "";
  const std::string yellow = opt.color ? "\x1b[33m" : "";
  const std::string reset = opt.color ? "\x1b[0m" : "";

  std::ostringstream os;
  os << bold << "dimensional analysis" << reset << "\n";
  os << "  dimensions: ";
  for (std::size_t i = 0; i < r.m; ++i) os << (i ? ", " : "") << r.model.dims.names[i];
  os << "\n  quantities: ";
  for (std::size_t j = 0; j < r.n; ++j) os << (j ? ", " : "") << r.model.quantities[j].name;
  os << "\n  n = " << r.n << ", m = " << r.m << ", ell = " << r.ell << "\n";
  os << "  rank A = " << r.rank_A << ", rank J = " << r.rank_J << "\n";
  os << "  d = " << r.d << "\n\n";

  os << bold << "pi groups" << reset << "\n";
  if (r.groups.empty()) os << "  (none)\n";
  for (std::size_t k = 0; k < r.groups.size(); ++k) os << "  " << pi_name(k) << " = " << r.groups[k].label << "\n";
  os << "\n";

  os << bold << "constraints" << reset << "\n";
  if (r.model.constraints.empty()) os << "  (none)\n";
  for (std::size_t k = 0; k < r.model.constraints.size(); ++k) {
    const auto& c = r.model.constraints[k];
    os << "  " << (k + 1) << ": ";
    if (c.kind == Constraint::Kind::monomial) {
      IntVector probe;
      bool integral = true;
      for (const auto& x : c.row) integral = integral && is_integer(x);
      if (integral) {
        for (const auto& x : c.row) probe.push_back(numerator(x));
        os << render_monomial_label(r.model.quantity_names(), probe) << " = " << to_string(c.constant) << "\n";
      } else {
        os << "monomial [";
        for (std::size_t j = 0; j < c.row.size(); ++j) os << (j ? " " : "") << to_string(c.row[j]);
        os << "] = " << to_string(c.constant) << "\n";
      }
    } else {
      os << "pointwise [";
      for (std::size_t j = 0; j < c.row.size(); ++j) os << (j ? " " : "") << to_string(c.row[j]);
      os << "]\n";
    }
  }
  os << "  scale_invariant: " << (r.scale_invariant ? green + "true" : yellow + "false") << reset << "\n\n";

  os << bold << "effective count" << reset << "\n";
  os << "  d_eff = " << r.d_eff << "\n";
  os << "    dim ker(JE)                          = " << r.deff.via_kernel_JE << "\n";
  os << "    n - rank[A;J]                        = " << r.deff.via_stacked_rank << "\n";
  os << "    n - rank A - rank J + dim(row A ∩ J) = " << r.deff.via_grassmann << "\n";
  if (r.deff.via_C_rank) os << "    d - rank C                           = " << *r.deff.via_C_rank << "\n";
  os << "\n";

  if (r.C) {
    os << bold << "reduction" << reset << "\n";
    os << "  C =\n" << matrix_text(*r.C, "    ");
    os << "  rref(C) =\n" << matrix_text(*r.rref_C, "    ");
    for (const auto& rel : *r.relations) os << "  relation: " << rel.text << "\n";
    os << "  selected: ";
    if (r.selected->empty()) os << "(none)";
    for (std::size_t i = 0; i < r.selected->size(); ++i) os << (i ? ", " : "") << pi_name((*r.selected)[i]);
    os << "\n";
  }
  for (const auto& w : r.warnings) os << yellow << "warning: " << reset << w << "\n";
  return os.str();
}

}  // namespace detail

/// Deterministic rendering of an analysis. JSON carries every rational as a
/// "p/q" string and uses a fixed field order.
inline std::string render_report(const AnalysisReport& report, ReportFormat format, const RenderOptions& options = {}) {
  return format == ReportFormat::json ? detail::render_json(report) : detail::render_text(report, options);
}

}  // namespace pim
