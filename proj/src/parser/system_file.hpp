#pragma once

#include <string>
#include <string_view>

#include "core/system.hpp"

namespace fjkit {

/// Parses a system definition. Sections, one per bracketed header:
///
///   [variables]         name [dynamical|momentum]      (one or more per line)
///   [parameters]        names separated by spaces or commas
///   [relations]         r : r^2 = x^2 + y^2 ; r > 0
///   [one_form]          x1 = p1                          (one per variable)
///   [potential]         expression, may span lines
///   [solve_hints]       [Label:] sin(theta) -> x/r, cos(theta) -> -y/r
///   [gauge_conditions]  [Label:] q1 - q2
///   [options]           max_iterations = 12 / verbose_multipliers = true
///
/// '#' starts a comment. variables, one_form and potential are required.
/// Errors carry line and column.
Problem parse_system(std::string_view contents);

/// Reads and parses a file. Throws Io when it cannot be read.
Problem parse_system_file(const std::string& path);

}  // namespace fjkit
