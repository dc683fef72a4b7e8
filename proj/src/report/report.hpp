#pragma once

#include <string>

#include <json.hpp>

#include "core/analysis.hpp"

namespace fjkit {

using ReportTree = nlohmann::ordered_json;

/// Machine-readable report; key order is fixed.
ReportTree build_report_tree(const AnalysisReport& report);

/// Markdown rendering of the same tree.
std::string render_markdown(const ReportTree& tree);

/// Pretty-printed JSON with a trailing newline.
std::string render_json(const ReportTree& tree);

/// "{a, b} = value" lines (surface form when it differs).
std::string render_brackets_text(const ReportTree& tree);
/// "d/dt x = rhs" lines.
std::string render_eom_text(const ReportTree& tree);

}  // namespace fjkit
