#include "fjkit/fjkit.h"

#include <cstdlib>
#include <cstring>
#include <functional>
#include <memory>
#include <optional>
#include <sstream>
#include <string>

#include "common/error.hpp"
#include "core/analysis.hpp"
#include "dynamics/dynamics.hpp"
#include "parser/printer.hpp"
#include "parser/system_file.hpp"
#include "report/report.hpp"

struct fj_problem {
  fjkit::Problem problem;
};

struct fj_analysis {
  fjkit::AnalysisReport report;
  std::optional<fjkit::ReportTree> tree;
  std::optional<std::string> json, markdown, brackets, eom;

  const fjkit::ReportTree& report_tree() {
    if (!tree) tree = fjkit::build_report_tree(report);
    return *tree;
  }
};

struct fj_trajectory {
  fjkit::Trajectory traj;
  std::vector<std::string> drift_labels;
  std::vector<double> drift;
  std::optional<std::string> csv;
};

namespace {

static_assert(static_cast<int>(fjkit::ErrorCode::Io) + 1 == FJ_E_IO, "error code table out of sync");
static_assert(static_cast<int>(fjkit::AnalysisStatus::gauge) == FJ_STATUS_GAUGE, "status table out of sync");

thread_local std::string last_message;
thread_local fj_code last_code = FJ_OK;

fj_code fail(fj_code code, std::string message) {
  last_code = code;
  last_message = std::move(message);
  return code;
}

template <class F>
fj_code guarded(F&& body) {
  try {
    body();
    last_code = FJ_OK;
    last_message.clear();
    return FJ_OK;
  } catch (const fjkit::Error& e) {
    return fail(static_cast<fj_code>(static_cast<int>(e.code()) + 1), e.describe());
  } catch (const std::bad_alloc&) {
    return fail(FJ_E_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(FJ_E_INTERNAL, e.what());
  }
}

fj_code null_argument(const char* what) { return fail(FJ_E_INVALID_ARGUMENT, std::string(what) + " is null"); }

const char* cached(std::optional<std::string>& slot, const std::function<std::string()>& make) {
  if (!slot) {
    try {
      slot = make();
    } catch (const std::exception& e) {
      fail(FJ_E_INTERNAL, e.what());
      return nullptr;
    }
  }
  return slot->c_str();
}

}  // namespace

extern "C" {

const char* fj_last_error(void) { return last_message.c_str(); }
fj_code fj_last_error_code(void) { return last_code; }

const char* fj_code_name(int code) {
  if (code == FJ_OK) return "Ok";
  if (code == FJ_E_INTERNAL) return "Internal";
  if (code < 0 || code > FJ_E_INTERNAL) return "Unknown";
  return fjkit::error_code_name(static_cast<fjkit::ErrorCode>(code - 1)).data();
}

const char* fj_status_name(int status) {
  if (status < FJ_STATUS_REGULAR || status > FJ_STATUS_GAUGE) return "unknown";
  return fjkit::status_name(static_cast<fjkit::AnalysisStatus>(status)).data();
}

void fj_free(char* s) { std::free(s); }

fj_code fj_problem_from_string(const char* text, fj_problem** out) {
  if (text == nullptr || out == nullptr) return null_argument("argument");
  *out = nullptr;
  return guarded([&] { *out = new fj_problem{fjkit::parse_system(text)}; });
}

fj_code fj_problem_from_file(const char* path, fj_problem** out) {
  if (path == nullptr || out == nullptr) return null_argument("argument");
  *out = nullptr;
  return guarded([&] { *out = new fj_problem{fjkit::parse_system_file(path)}; });
}

fj_code fj_problem_set_max_iterations(fj_problem* p, int n) {
  if (p == nullptr) return null_argument("problem");
  if (n < 1) return fail(FJ_E_INVALID_ARGUMENT, "max iterations must be >= 1");
  p->problem.options.max_iterations = n;
  return FJ_OK;
}

fj_code fj_problem_set_verbose_multipliers(fj_problem* p, int on) {
  if (p == nullptr) return null_argument("problem");
  p->problem.options.verbose_multipliers = on != 0;
  return FJ_OK;
}

void fj_problem_destroy(fj_problem* p) { delete p; }

fj_code fj_analyze(const fj_problem* p, fj_analysis** out) {
  if (p == nullptr || out == nullptr) return null_argument("argument");
  *out = nullptr;
  return guarded([&] {
    auto a = std::make_unique<fj_analysis>();
    a->report = fjkit::run_analysis(p->problem);
    *out = a.release();
  });
}

fj_status fj_analysis_status(const fj_analysis* a) {
  return a == nullptr ? FJ_STATUS_REGULAR : static_cast<fj_status>(static_cast<int>(a->report.status));
}

int fj_analysis_dof(const fj_analysis* a) { return a == nullptr ? -1 : a->report.dof; }

size_t fj_analysis_constraint_count(const fj_analysis* a) {
  return a == nullptr ? 0 : a->report.constraints.constraints().size();
}

const char* fj_analysis_json(fj_analysis* a) {
  if (a == nullptr) return nullptr;
  return cached(a->json, [&] { return fjkit::render_json(a->report_tree()); });
}

const char* fj_analysis_markdown(fj_analysis* a) {
  if (a == nullptr) return nullptr;
  return cached(a->markdown, [&] { return fjkit::render_markdown(a->report_tree()); });
}

const char* fj_analysis_brackets_text(fj_analysis* a) {
  if (a == nullptr) return nullptr;
  return cached(a->brackets, [&] { return fjkit::render_brackets_text(a->report_tree()); });
}

const char* fj_analysis_eom_text(fj_analysis* a) {
  if (a == nullptr) return nullptr;
  return cached(a->eom, [&] { return fjkit::render_eom_text(a->report_tree()); });
}

fj_code fj_analysis_bracket(const fj_analysis* a, const char* left, const char* right, int on_surface, char** out) {
  if (a == nullptr || left == nullptr || right == nullptr || out == nullptr) return null_argument("argument");
  *out = nullptr;
  return guarded([&] {
    const auto& ctx = *a->report.context();
    const auto l = ctx.find(left);
    const auto r = ctx.find(right);
    if (!l || !r) {
      throw fjkit::Error(fjkit::ErrorCode::UndeclaredIdentifier,
                         std::string("unknown variable '") + (l ? right : left) + "'");
    }
    auto b = a->report.bracket(*l, *r);
    if (!b) throw fjkit::Error(fjkit::ErrorCode::InvalidArgument, "no bracket for this pair");
    const fjkit::Expr value = on_surface != 0 ? a->report.constraints.restrict(*b) : *b;
    const std::string text = fjkit::print_expression(value);
    *out = static_cast<char*>(std::malloc(text.size() + 1));
    if (*out == nullptr) throw std::bad_alloc();
    std::memcpy(*out, text.c_str(), text.size() + 1);
  });
}

void fj_analysis_destroy(fj_analysis* a) { delete a; }

fj_code fj_integrate(const fj_analysis* a, const char* const* names, const double* values, size_t count,
                     double t_end, double dt, fj_trajectory** out) {
  if (a == nullptr || out == nullptr || (count > 0 && (names == nullptr || values == nullptr))) {
    return null_argument("argument");
  }
  *out = nullptr;
  return guarded([&] {
    const auto& report = a->report;
    const auto& ctx = report.context();
    fjkit::NumericBindings initial;
    fjkit::NumericBindings params;
    for (size_t i = 0; i < count; ++i) {
      const auto id = ctx->find(names[i]);
      if (!id) throw fjkit::Error(fjkit::ErrorCode::UndeclaredIdentifier, std::string("unknown name '") + names[i] + "'");
      switch (ctx->kind(*id)) {
        case fjkit::SymbolKind::parameter:
          params[*id] = values[i];
          break;
        case fjkit::SymbolKind::dynamical:
        case fjkit::SymbolKind::momentum:
          initial[*id] = values[i];
          break;
        default:
          throw fjkit::Error(fjkit::ErrorCode::InvalidArgument,
                             std::string("'") + names[i] + "' cannot be bound");
      }
    }
    const auto eom = fjkit::derive_eom(report);
    initial = fjkit::prepare_initial_state(report, initial, params);
    auto t = std::make_unique<fj_trajectory>();
    t->traj = fjkit::integrate_rk4(eom, ctx, initial, params, t_end, dt);
    std::vector<fjkit::Expr> exprs;
    for (auto& [label, e] : fjkit::surface_expressions(report)) {
      t->drift_labels.push_back(label);
      exprs.push_back(e);
    }
    t->drift = fjkit::constraint_drift(t->traj, exprs, ctx);
    *out = t.release();
  });
}

size_t fj_trajectory_rows(const fj_trajectory* t) { return t == nullptr ? 0 : t->traj.times.size(); }
size_t fj_trajectory_columns(const fj_trajectory* t) { return t == nullptr ? 0 : t->traj.names.size(); }

const char* fj_trajectory_column_name(const fj_trajectory* t, size_t column) {
  if (t == nullptr || column >= t->traj.names.size()) return nullptr;
  return t->traj.names[column].c_str();
}

double fj_trajectory_time(const fj_trajectory* t, size_t row) {
  if (t == nullptr || row >= t->traj.times.size()) return 0.0;
  return t->traj.times[row];
}

double fj_trajectory_value(const fj_trajectory* t, size_t row, size_t column) {
  if (t == nullptr || row >= t->traj.states.size() || column >= t->traj.names.size()) return 0.0;
  return t->traj.states[row][column];
}

const char* fj_trajectory_csv(fj_trajectory* t) {
  if (t == nullptr) return nullptr;
  return cached(t->csv, [&] {
    std::ostringstream os;
    fjkit::write_csv(t->traj, os);
    return os.str();
  });
}

size_t fj_trajectory_drift_count(const fj_trajectory* t) { return t == nullptr ? 0 : t->drift.size(); }

fj_code fj_trajectory_drift(const fj_trajectory* t, size_t k, const char** label, double* value) {
  if (t == nullptr || label == nullptr || value == nullptr) return null_argument("argument");
  if (k >= t->drift.size()) return fail(FJ_E_INVALID_ARGUMENT, "drift index out of range");
  *label = t->drift_labels[k].c_str();
  *value = t->drift[k];
  return FJ_OK;
}

void fj_trajectory_destroy(fj_trajectory* t) { delete t; }

}  // extern "C"
