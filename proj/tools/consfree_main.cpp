#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>

#include "consfree/analysis.hpp"
#include "consfree/encoding.hpp"
#include "consfree/engine.hpp"
#include "consfree/harness.hpp"
#include "consfree/interpreter.hpp"
#include "consfree/syntax.hpp"

using namespace consfree;

namespace {

std::optional<std::string> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

TrsPtr load_trs(const std::string& path) {
  auto text = read_file(path);
  if (!text) {
    std::cerr << "error: cannot read '" << path << "'\n";
    return nullptr;
  }
  TrsParse parsed = parse_trs(*text, path);
  for (const auto& d : parsed.diagnostics) std::cerr << d.render() << "\n";
  return parsed.trs;
}

TermPtr load_term(const std::string& text, const Trs& sig) {
  TermParse parsed = parse_term(text, sig);
  for (const auto& d : parsed.diagnostics) std::cerr << d.render() << "\n";
  return parsed.term;
}

int cmd_check(const std::string& path, bool machine) {
  TrsPtr trs = load_trs(path);
  if (!trs) return 1;
  CheckReport cons_free = check_cons_free(*trs);
  CheckReport orthogonal = check_orthogonal(*trs);
  bool left_linear = true;
  for (const auto& rule : trs->rules()) left_linear = left_linear && check_left_linear(rule);
  int order = type_order(*trs);
  if (machine) {
    std::cout << cons_free.render_machine("consfree");
    std::cout << "leftlinear\t" << (left_linear ? "pass" : "fail") << "\n";
    std::cout << orthogonal.render_machine("orthogonal");
    std::cout << "typeorder\t" << order << "\n";
  } else {
    std::cout << cons_free.render_text("cons-free");
    std::cout << "left-linear: " << (left_linear ? "pass" : "fail") << "\n";
    std::cout << orthogonal.render_text("orthogonal");
    std::cout << "type order: " << order << "\n";
  }
  return (cons_free.passed && orthogonal.passed && left_linear) ? 0 : 1;
}

int cmd_run(const std::string& path, const std::string& term_text, long long fuel, bool trace,
            bool assert_bsafe) {
  TrsPtr trs = load_trs(path);
  if (!trs) return 1;
  TermPtr term = load_term(term_text, *trs);
  if (!term) return 1;
  NormalizeOptions opts;
  opts.fuel = fuel;
  opts.keep_trace = trace;
  BSet b;
  if (assert_bsafe) {
    b = compute_B(term, *trs);
    opts.b_check = &b;
  }
  try {
    NormalizeResult result = normalize(*trs, term, opts);
    if (trace) std::cout << result.trace.render();
    if (result.status == FinalStatus::FuelExhausted) {
      std::cout << "fuel exhausted after " << result.steps << " steps\n";
      std::cout << "last term: " << print_term(result.final_term) << "\n";
      return 1;
    }
    std::cout << print_term(result.final_term) << "\n";
    std::cerr << "normal form reached in " << result.steps << " steps\n";
    return 0;
  } catch (const BSafetyViolation& e) {
    std::cerr << e.what() << "\n";
    return 1;
  }
}

int cmd_encode(const std::string& path, const std::string& term_text) {
  TrsPtr trs = load_trs(path);
  if (!trs) return 1;
  try {
    SymbolTable table(trs);
    const QProgram& q = q_program();
    if (term_text.empty()) {
      std::cout << print_term(encode_trs(q.sig, table)) << "\n";
      return 0;
    }
    TermPtr term = load_term(term_text, *trs);
    if (!term) return 1;
    std::cout << print_term(encode_term(q.sig, term, table)) << "\n";
    return 0;
  } catch (const EncodingError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

int cmd_interpret(const std::string& path, const std::string& term_text, long long fuel,
                  bool assert_bsafe) {
  TrsPtr trs = load_trs(path);
  if (!trs) return 1;
  TermPtr term = load_term(term_text, *trs);
  if (!term) return 1;
  try {
    InterpretOptions opts;
    opts.fuel = fuel;
    opts.assert_b_safe = assert_bsafe;
    InterpretResult result = interpret(trs, term, opts);
    switch (result.status) {
      case InterpretStatus::Data:
        std::cout << print_term(result.data) << "\n";
        std::cerr << "interpreter steps: " << result.steps << "\n";
        return 0;
      case InterpretStatus::Bottom:
        std::cout << "bot\n";
        std::cerr << "interpreter steps: " << result.steps << "\n";
        return 0;
      case InterpretStatus::FuelExhausted:
        std::cout << "fuel exhausted after " << result.steps << " steps\n";
        return 1;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}

int cmd_export_q(const std::string& out_path) {
  std::ofstream out(out_path, std::ios::binary);
  if (!out) {
    std::cerr << "error: cannot write '" << out_path << "'\n";
    return 1;
  }
  out << print_trs(*q_program().trs);
  return out.good() ? 0 : 1;
}

int cmd_difftest(const DiffParams& params, const std::string& report_path) {
  DiffReport report = difftest(params);
  std::string text = report.render();
  if (report_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(report_path, std::ios::binary);
    if (!out) {
      std::cerr << "error: cannot write '" << report_path << "'\n";
      return 1;
    }
    out << text;
    std::cout << "summary agree=" << report.agree << " disagree=" << report.disagree
              << " inconclusive=" << report.inconclusive << "\n";
  }
  return report.disagree == 0 && report.b_safety_violations == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"workbench for cons-free constructor term rewriting"};
  app.require_subcommand(1);

  std::string path, term_text, out_path, report_path;
  long long fuel = 10'000'000;
  bool trace = false, assert_bsafe = false, machine = false, no_corpus = false;
  DiffParams diff;

  auto* check = app.add_subcommand("check", "validate a system and run the static checks");
  check->add_option("file", path, "a .trs file")->required();
  check->add_flag("--machine", machine, "tab-separated machine-readable output");

  auto* run = app.add_subcommand("run", "normalize a term under a system");
  run->add_option("file", path)->required();
  run->add_option("term", term_text)->required();
  run->add_option("--fuel", fuel, "step budget");
  run->add_flag("--trace", trace, "print every step");
  run->add_flag("--assert-bsafe", assert_bsafe, "assert B-safety after every step");

  auto* encode = app.add_subcommand("encode", "print the encoding of a system or term");
  encode->add_option("file", path)->required();
  encode->add_option("term", term_text);

  auto* interpret_cmd =
      app.add_subcommand("interpret", "run a start term through the interpreter program");
  interpret_cmd->add_option("file", path)->required();
  interpret_cmd->add_option("term", term_text)->required();
  interpret_cmd->add_option("--fuel", fuel);
  interpret_cmd->add_flag("--assert-bsafe", assert_bsafe);

  auto* export_q = app.add_subcommand("export-q", "write the interpreter program as a .trs file");
  export_q->add_option("out", out_path)->required();

  auto* diff_cmd = app.add_subcommand("difftest", "differential test: oracle vs interpreter");
  diff_cmd->add_option("--seed", diff.seed);
  diff_cmd->add_option("--cases", diff.cases);
  diff_cmd->add_option("--fuel-oracle", diff.fuel_oracle);
  diff_cmd->add_option("--fuel-interp", diff.fuel_interp);
  diff_cmd->add_option("--report", report_path, "write the report to a file");
  diff_cmd->add_flag("--assert-bsafe", diff.assert_b_safe);
  diff_cmd->add_flag("--no-corpus", no_corpus, "generated cases only");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  diff.include_corpus = !no_corpus;

  try {
    if (check->parsed()) return cmd_check(path, machine);
    if (run->parsed()) return cmd_run(path, term_text, fuel, trace, assert_bsafe);
    if (encode->parsed()) return cmd_encode(path, term_text);
    if (interpret_cmd->parsed()) return cmd_interpret(path, term_text, fuel, assert_bsafe);
    if (export_q->parsed()) return cmd_export_q(out_path);
    if (diff_cmd->parsed()) return cmd_difftest(diff, report_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
