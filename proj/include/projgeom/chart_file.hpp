#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "projgeom/connection.hpp"

namespace projgeom {

/// Chart text:
///
///   dim = 3
///   domain = -1, 1        (optional box applied to every coordinate)
///   [metric]              or [christoffel]
///   g 1 1 = 4/(1+x1^2)^2
///   G 1 2 3 = x1*x2
///
/// Indices are 1-based; `#` starts a comment. Errors are ChartFormat with the
/// line number, except expression errors which keep their own kind.
ConnectionSpec parse_chart(std::string_view text);
ConnectionSpec load_chart(const std::string& path);

/// One line `a <i> = <expr>` per component; missing components are zero.
OneFormField parse_alpha(std::string_view text, std::size_t dim);
OneFormField load_alpha(const std::string& path, std::size_t dim);

/// "a,b,c" with exactly `dim` entries.
std::vector<double> parse_point(std::string_view text, std::size_t dim);
/// One comma-separated point per non-blank line.
std::vector<std::vector<double>> parse_points(std::string_view text, std::size_t dim);
std::vector<std::vector<double>> load_points(const std::string& path, std::size_t dim);

}  // namespace projgeom
