#pragma once

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include "pim/errors.hpp"
#include "pim/modelfile.hpp"
#include "pim/reduce.hpp"
#include "pim/report.hpp"

namespace pim::cli {

enum class Command { analyze, check };

enum ExitCode : int {
  kSuccess = 0,
  kInputError = 1,      // unreadable input, parse or validation failure
  kNotInvariant = 2,    // non-scale-invariant constraints under --strict
  kInternalError = 3,   // d_eff formulas disagree; always a bug
};

struct CliConfig {
  Command command = Command::analyze;
  std::string input_path = "-";
  ReportFormat format = ReportFormat::text;
  bool strict = false;
  bool color = false;
};

/// "file:line:col: error: message [code]" followed by the source line and a
/// caret underline.
inline void write_diagnostic(std::ostream& err, const std::string& source_name, std::string_view text,
                             const ParseError& e) {
  err << source_name << ":" << e.span.line << ":" << e.span.column << ": error: " << e.message << " ["
      << code_name(e.code) << "]\n";
  std::size_t start = 0;
  for (std::size_t l = 1; l < e.span.line && start != std::string_view::npos; ++l) {
    start = text.find('\n', start);
    if (start != std::string_view::npos) ++start;
  }
  if (start == std::string_view::npos || start > text.size()) return;
  std::size_t end = text.find('\n', start);
  std::string_view line = text.substr(start, end == std::string_view::npos ? std::string_view::npos : end - start);
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  const std::string gutter = std::to_string(e.span.line);
  err << "  " << gutter << " | " << line << "\n";
  err << "  " << std::string(gutter.size(), ' ') << " | " << std::string(e.span.column - 1, ' ')
      << std::string(e.span.length, '^') << "\n";
}

inline std::string describe_non_invariance(const AnalysisReport& r) {
  std::ostringstream os;
  os << "constraints are not scale invariant: J·A^T != 0\n";
  const RatMatrix jat = r.J * transpose(r.A);
  for (std::size_t k = 0; k < jat.rows(); ++k) {
    if (std::all_of(jat.row(k).begin(), jat.row(k).end(), [](const Rational& x) { return x == 0; })) continue;
    os << "  constraint " << (k + 1) << ": (J·A^T) row = [";
    for (std::size_t i = 0; i < jat.cols(); ++i) os << (i ? " " : "") << to_string(jat(k, i));
    os << "]\n";
  }
  return os.str();
}

/// Runs one command over already-read model text. Nothing is written to
/// `out` unless the exit code is 0.
inline int run(const CliConfig& config, std::string_view text, const std::string& source_name, std::ostream& out,
               std::ostream& err) {
  const ParseResult parsed = parse_model(text);
  if (!parsed.ok()) {
    for (const auto& e : parsed.errors) write_diagnostic(err, source_name, text, e);
    return kInputError;
  }
  const Model& model = *parsed.model;

  try {
    if (config.command == Command::check) {
      validate_model(model);
      const RatMatrix a = build_dimension_matrix(model);
      pi_basis(model, a);
      const bool invariant = check_scale_invariance(a, constraint_jacobian(model));
      if (!invariant && config.strict) {
        AnalysisReport r;
        r.A = a;
        r.J = constraint_jacobian(model);
        err << "error: " << describe_non_invariance(r);
        return kNotInvariant;
      }
      std::ostringstream os;
      os << "ok: " << model.m() << " dimensions, " << model.n() << " quantities, " << model.constraints.size()
         << (model.constraints.size() == 1 ? " constraint" : " constraints") << "\n";
      os << "scale_invariant: " << (invariant ? "true" : "false") << "\n";
      out << os.str();
      return kSuccess;
    }

    const AnalysisReport report = analyze(model);
    if (!report.scale_invariant && config.strict) {
      err << "error: " << describe_non_invariance(report);
      return kNotInvariant;
    }
    for (const auto& w : report.warnings) err << source_name << ": warning: " << w << "\n";
    out << render_report(report, config.format, {config.color && config.format == ReportFormat::text});
    return kSuccess;
  } catch (const InvariantViolation& e) {
    err << "internal error: " << e.what() << "\n";
    return kInternalError;
  } catch (const Error& e) {
    err << source_name << ": error: " << e.what() << "\n";
    return kInputError;
  }
}

/// Reads `config.input_path` ('-' for `in`) and runs the command.
inline int run(const CliConfig& config, std::istream& in, std::ostream& out, std::ostream& err) {
  std::string text;
  std::string source_name = config.input_path;
  if (config.input_path == "-") {
    source_name = "<stdin>";
    text.assign(std::istreambuf_iterator<char>(in), {});
    if (in.bad()) {
      err << "error: cannot read standard input\n";
      return kInputError;
    }
  } else {
    std::ifstream file(config.input_path, std::ios::binary);
    if (!file) {
      err << "error: cannot open '" << config.input_path << "'\n";
      return kInputError;
    }
    text.assign(std::istreambuf_iterator<char>(file), {});
    if (file.bad()) {
      err << "error: cannot read '" << config.input_path << "'\n";
      return kInputError;
    }
  }
  return run(config, text, source_name, out, err);
}

/// Parses argv into a config. Returns an exit code when the program should
/// stop (help or usage error).
inline std::optional<int> parse_args(int argc, const char* const* argv, CliConfig& config, std::ostream& out,
                                     std::ostream& err) {
  CLI::App app{"Dimensional analysis with monomial constraints"};
  app.require_subcommand(1);

  std::string format = "text";
  auto* analyze_cmd = app.add_subcommand("analyze", "Full analysis report");
  analyze_cmd->add_option("file", config.input_path, "Model file (.pim), '-' for stdin")->required();
  analyze_cmd->add_option("--format", format, "Output format")->check(CLI::IsMember({"text", "json"}));
  analyze_cmd->add_flag("--strict", config.strict, "Fail when constraints are not scale invariant");

  auto* check_cmd = app.add_subcommand("check", "Validate the model and report scale invariance");
  check_cmd->add_option("file", config.input_path, "Model file (.pim), '-' for stdin")->required();
  check_cmd->add_flag("--strict", config.strict, "Fail when constraints are not scale invariant");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kSuccess : kInputError;
  }
  config.command = check_cmd->parsed() ? Command::check : Command::analyze;
  config.format = format == "json" ? ReportFormat::json : ReportFormat::text;
  return std::nullopt;
}

}  // namespace pim::cli
