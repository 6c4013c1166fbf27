#pragma once

// Deterministic CSV / JSON / gnuplot emission of sweep results.
//
// Column order: inputs, then outputs, then flags, each group sorted by key.
// Doubles are written with 17 significant digits; infinities as "inf".
// Wall-clock seconds are carried by every row but only written on request,
// so that repeated runs stay byte-identical by default.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace fafchain {

using Cell = std::variant<bool, std::int64_t, double, std::string>;

struct Field {
    std::string key;
    Cell value;
};

struct SweepRow {
    std::vector<Field> inputs;
    std::vector<Field> outputs;
    std::vector<Field> flags; ///< at least one; "converged" by convention
    double wall_seconds = 0.0;

    SweepRow& input(std::string key, Cell value);
    SweepRow& output(std::string key, Cell value);
    SweepRow& flag(std::string key, bool value);

    /// Fields in emission order, optionally followed by "seconds".
    std::vector<Field> ordered(bool with_timing) const;
};

struct Report {
    std::vector<Field> metadata;     ///< defaults and conventions, in insertion order
    std::optional<SweepRow> summary; ///< single-record result, if any
    std::string rows_key = "rows";
    std::vector<SweepRow> rows;
};

enum class Format { csv, json };

Format parse_format(const std::string& name);

/// %.17g, with "inf", "-inf" and "nan" for non-finite values.
std::string format_number(double x);
std::string format_cell(const Cell& c);

/// '#' metadata lines, header, rows. A report without rows emits its summary
/// as the single row; otherwise the summary goes into '#' lines.
std::string render_csv(const Report& r, bool with_timing = false);

/// {"metadata": {...}, <summary fields>, "<rows_key>": [ {...}, ... ]}
std::string render_json(const Report& r, bool with_timing = false);

/// Whitespace-separated columns with a '#' header; booleans as 0/1.
std::string render_gnuplot(const Report& r);

/// Throws IoError when the file cannot be written.
void write_text(const std::filesystem::path& path, const std::string& text);

void emit_table(const Report& r, Format format, const std::filesystem::path& path, bool with_timing = false);

} // namespace fafchain
