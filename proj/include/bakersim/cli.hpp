#pragma once

// Batch front end: `bakersim {entropy,hyper,verify,compile} [options]`.

#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace bakersim::cli {

enum ExitCode : int {
    kOk = 0,
    kVerifyFailed = 1,
    kUsageError = 2,  // unknown key, bad flag or value
    kPhysicsViolation = 3,
    kIoError = 4,
};

/// Runs one invocation. Results go to `--out` if given, else to `out`;
/// diagnostics go to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Whitespace-separated numeric columns for gnuplot.
struct PlotSeries {
    /// Resolved configuration, written into the header; must include "preset".
    std::vector<std::pair<std::string, std::string>> meta;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    bool operator==(const PlotSeries&) const = default;
};

/// One `#` header line (meta fields, then `columns: a b c`) followed by one
/// line per row at 17 significant digits. Throws std::invalid_argument on
/// an empty series or ragged rows.
std::string emit_plot_data(const PlotSeries& series);
PlotSeries parse_plot_data(std::string_view text);

/// Flat `key = value` lines; `#` and `;` start whole-line comments. Throws
/// std::invalid_argument on malformed lines or duplicate keys.
std::vector<std::pair<std::string, std::string>> parse_config_text(std::string_view text);

}  // namespace bakersim::cli
