#pragma once

#include "imcflab/functionals.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

namespace imcflab {

/// "%.17g"; non-finite values become "nan", "inf" or "-inf".
std::string format_number(double value);

/// Pinned header: t,area,A,I,J,L,calK,Q,min_H,lambda_min,umbilicity. LF line endings.
void write_trace_csv(std::ostream& out, const std::vector<FunctionalRecord>& records);

/// Pretty JSON with two-space indent, keys in insertion order of the object, floats as "%.17g"
/// and non-finite floats as null.
void write_json(std::ostream& out, const nlohmann::ordered_json& value);

/// Static line plot of y(x) with labelled axes.
void write_svg_plot(std::ostream& out, const std::vector<std::pair<double, double>>& points,
                    const std::string& x_label, const std::string& y_label);

/// Opens `path` for binary writing, creating parent directories. Throws std::runtime_error on failure.
void write_file(const std::filesystem::path& path, const std::string& content);

} // namespace imcflab
