// fjkit command-line front end. Links only the C API.
//
// Exit codes: 0 success, 1 error, 2 gauge symmetry left unfixed.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fjkit/fjkit.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitGauge = 2;

struct ProblemDeleter {
  void operator()(fj_problem* p) const { fj_problem_destroy(p); }
};
struct AnalysisDeleter {
  void operator()(fj_analysis* a) const { fj_analysis_destroy(a); }
};
struct TrajectoryDeleter {
  void operator()(fj_trajectory* t) const { fj_trajectory_destroy(t); }
};
using ProblemPtr = std::unique_ptr<fj_problem, ProblemDeleter>;
using AnalysisPtr = std::unique_ptr<fj_analysis, AnalysisDeleter>;
using TrajectoryPtr = std::unique_ptr<fj_trajectory, TrajectoryDeleter>;

int report_error(const std::string& input) {
  std::cerr << "fjkit: " << input << ": " << fj_last_error() << '\n';
  return kExitError;
}

bool write_file(const std::string& path, const char* text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    std::cerr << "fjkit: cannot write " << path << '\n';
    return false;
  }
  out << text;
  return static_cast<bool>(out);
}

// Parses and analyzes `input`; null on failure (message already printed).
AnalysisPtr analyze(const std::string& input, int max_iter, bool verbose) {
  fj_problem* raw = nullptr;
  if (fj_problem_from_file(input.c_str(), &raw) != FJ_OK) {
    report_error(input);
    return nullptr;
  }
  ProblemPtr problem(raw);
  if (max_iter > 0 && fj_problem_set_max_iterations(problem.get(), max_iter) != FJ_OK) {
    report_error(input);
    return nullptr;
  }
  if (verbose) fj_problem_set_verbose_multipliers(problem.get(), 1);
  fj_analysis* a = nullptr;
  if (fj_analyze(problem.get(), &a) != FJ_OK) {
    report_error(input);
    return nullptr;
  }
  return AnalysisPtr(a);
}

int status_exit(const fj_analysis* a) { return fj_analysis_status(a) == FJ_STATUS_GAUGE ? kExitGauge : kExitOk; }

struct AnalyzeArgs {
  std::string input;
  std::string report;
  std::string json;
  int max_iter = 0;
  bool verbose = false;
};

int cmd_analyze(const AnalyzeArgs& args) {
  auto a = analyze(args.input, args.max_iter, args.verbose);
  if (!a) return kExitError;
  const char* md = fj_analysis_markdown(a.get());
  const char* js = fj_analysis_json(a.get());
  if (md == nullptr || js == nullptr) return report_error(args.input);
  if (!args.report.empty() && !write_file(args.report, md)) return kExitError;
  if (!args.json.empty() && !write_file(args.json, js)) return kExitError;
  if (args.report.empty() && args.json.empty()) {
    std::cout << md;
  } else {
    std::cout << "status: " << fj_status_name(fj_analysis_status(a.get())) << '\n'
              << "degrees of freedom: " << fj_analysis_dof(a.get()) << '\n';
  }
  if (fj_analysis_status(a.get()) == FJ_STATUS_GAUGE) {
    std::cerr << "fjkit: gauge symmetry without gauge conditions; no brackets\n";
  }
  return status_exit(a.get());
}

int cmd_text(const std::string& input, bool brackets) {
  auto a = analyze(input, 0, false);
  if (!a) return kExitError;
  if (fj_analysis_status(a.get()) == FJ_STATUS_GAUGE) {
    std::cerr << "fjkit: gauge symmetry without gauge conditions; the symplectic matrix is not invertible\n";
    return kExitGauge;
  }
  const char* text = brackets ? fj_analysis_brackets_text(a.get()) : fj_analysis_eom_text(a.get());
  if (text == nullptr) return report_error(input);
  std::cout << text;
  return kExitOk;
}

struct IntegrateArgs {
  std::string input;
  std::vector<std::string> binds;
  double t_end = 10.0;
  double dt = 1e-3;
  std::string out;
};

int cmd_integrate(const IntegrateArgs& args) {
  std::vector<std::string> names;
  std::vector<double> values;
  for (const auto& b : args.binds) {
    const auto eq = b.find('=');
    if (eq == std::string::npos || eq == 0) {
      std::cerr << "fjkit: --bind expects name=value, got '" << b << "'\n";
      return kExitError;
    }
    try {
      std::size_t used = 0;
      const std::string rhs = b.substr(eq + 1);
      values.push_back(std::stod(rhs, &used));
      if (used != rhs.size()) throw std::invalid_argument(rhs);
    } catch (const std::exception&) {
      std::cerr << "fjkit: --bind " << b << ": value is not a number\n";
      return kExitError;
    }
    names.push_back(b.substr(0, eq));
  }
  auto a = analyze(args.input, 0, false);
  if (!a) return kExitError;
  if (fj_analysis_status(a.get()) == FJ_STATUS_GAUGE) {
    std::cerr << "fjkit: gauge symmetry without gauge conditions; add gauge conditions before integrating\n";
    return kExitGauge;
  }
  std::vector<const char*> cnames;
  for (const auto& n : names) cnames.push_back(n.c_str());
  fj_trajectory* raw = nullptr;
  if (fj_integrate(a.get(), cnames.data(), values.data(), names.size(), args.t_end, args.dt, &raw) != FJ_OK) {
    return report_error(args.input);
  }
  TrajectoryPtr t(raw);
  const char* csv = fj_trajectory_csv(t.get());
  if (csv == nullptr) return report_error(args.input);
  std::ostream& summary = args.out.empty() ? std::cerr : std::cout;
  if (args.out.empty()) {
    std::cout << csv;
  } else if (!write_file(args.out, csv)) {
    return kExitError;
  }
  summary << "steps: " << fj_trajectory_rows(t.get()) - 1 << '\n';
  for (std::size_t k = 0; k < fj_trajectory_drift_count(t.get()); ++k) {
    const char* label = nullptr;
    double value = 0.0;
    fj_trajectory_drift(t.get(), k, &label, &value);
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", value);
    summary << "max drift " << label << ": " << buf << '\n';
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Faddeev-Jackiw analysis of first-order Lagrangians", "fjkit"};
  app.require_subcommand(1);

  AnalyzeArgs an;
  auto* analyze_cmd = app.add_subcommand("analyze", "run the analysis and write reports");
  analyze_cmd->add_option("input", an.input, "system definition file")->required();
  analyze_cmd->add_option("--report", an.report, "markdown report path");
  analyze_cmd->add_option("--json", an.json, "JSON report path");
  analyze_cmd->add_option("--max-iter", an.max_iter, "iteration cap")->check(CLI::PositiveNumber);
  analyze_cmd->add_flag("--verbose-multipliers", an.verbose, "name multipliers after their constraints");

  IntegrateArgs in;
  auto* integrate_cmd = app.add_subcommand("integrate", "integrate the reduced equations of motion (RK4)");
  integrate_cmd->add_option("input", in.input, "system definition file")->required();
  integrate_cmd->add_option("--bind", in.binds, "name=value for a parameter or initial value")->take_all();
  integrate_cmd->add_option("--t-end", in.t_end, "end time")->check(CLI::NonNegativeNumber);
  integrate_cmd->add_option("--dt", in.dt, "time step")->check(CLI::PositiveNumber);
  integrate_cmd->add_option("--out", in.out, "CSV output path (stdout if omitted)");

  std::string brackets_input;
  auto* brackets_cmd = app.add_subcommand("brackets", "print the generalized brackets");
  brackets_cmd->add_option("input", brackets_input, "system definition file")->required();

  std::string eom_input;
  auto* eom_cmd = app.add_subcommand("eom", "print the equations of motion");
  eom_cmd->add_option("input", eom_input, "system definition file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitError;
  }

  if (analyze_cmd->parsed()) return cmd_analyze(an);
  if (integrate_cmd->parsed()) return cmd_integrate(in);
  if (brackets_cmd->parsed()) return cmd_text(brackets_input, true);
  if (eom_cmd->parsed()) return cmd_text(eom_input, false);
  return kExitError;
}
