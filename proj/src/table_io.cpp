#include "fafchain/table_io.hpp"

#include "fafchain/errors.hpp"
#include "fafchain/overloaded.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

namespace fafchain {

namespace {

using ojson = nlohmann::ordered_json;

std::vector<Field> sorted(std::vector<Field> fields)
{
    std::stable_sort(fields.begin(), fields.end(), [](const Field& a, const Field& b) { return a.key < b.key; });
    return fields;
}

std::vector<std::string> keys_of(const std::vector<Field>& fields)
{
    std::vector<std::string> k;
    k.reserve(fields.size());
    for (const auto& f : fields) {
        k.push_back(f.key);
    }
    return k;
}

void require_homogeneous(const std::vector<SweepRow>& rows, bool with_timing)
{
    if (rows.empty()) {
        return;
    }
    const auto reference = keys_of(rows.front().ordered(with_timing));
    for (const auto& row : rows) {
        if (row.flags.empty()) {
            throw InvalidArgument("every row needs a convergence flag");
        }
        if (keys_of(row.ordered(with_timing)) != reference) {
            throw InvalidArgument("rows of one table must share the same keys");
        }
    }
}

std::string csv_escape(const std::string& s)
{
    if (s.find_first_of(",\"\n") == std::string::npos) {
        return s;
    }
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') {
            out += '"';
        }
        out += c;
    }
    return out + "\"";
}

ojson to_json(const Cell& c)
{
    return std::visit(overloaded{
                          [](bool b) { return ojson(b); },
                          [](std::int64_t i) { return ojson(i); },
                          [](double d) { return std::isfinite(d) ? ojson(d) : ojson(format_number(d)); },
                          [](const std::string& s) { return ojson(s); },
                      },
                      c);
}

ojson row_object(const SweepRow& row, bool with_timing)
{
    ojson o = ojson::object();
    for (const auto& f : row.ordered(with_timing)) {
        o[f.key] = to_json(f.value);
    }
    return o;
}

void csv_table(std::string& out, const std::vector<SweepRow>& rows, bool with_timing)
{
    const auto header = keys_of(rows.front().ordered(with_timing));
    for (std::size_t i = 0; i < header.size(); ++i) {
        out += (i ? "," : "") + csv_escape(header[i]);
    }
    out += '\n';
    for (const auto& row : rows) {
        const auto fields = row.ordered(with_timing);
        for (std::size_t i = 0; i < fields.size(); ++i) {
            out += (i ? "," : "") + csv_escape(format_cell(fields[i].value));
        }
        out += '\n';
    }
}

} // namespace

SweepRow& SweepRow::input(std::string key, Cell value)
{
    inputs.push_back({std::move(key), std::move(value)});
    return *this;
}

SweepRow& SweepRow::output(std::string key, Cell value)
{
    outputs.push_back({std::move(key), std::move(value)});
    return *this;
}

SweepRow& SweepRow::flag(std::string key, bool value)
{
    flags.push_back({std::move(key), value});
    return *this;
}

std::vector<Field> SweepRow::ordered(bool with_timing) const
{
    std::vector<Field> all = sorted(inputs);
    for (auto* group : {&outputs, &flags}) {
        auto s = sorted(*group);
        all.insert(all.end(), s.begin(), s.end());
    }
    if (with_timing) {
        all.push_back({"seconds", wall_seconds});
    }
    return all;
}

Format parse_format(const std::string& name)
{
    if (name == "csv") {
        return Format::csv;
    }
    if (name == "json") {
        return Format::json;
    }
    throw InvalidArgument("unknown output format '" + name + "' (expected csv or json)");
}

std::string format_number(double x)
{
    if (std::isnan(x)) {
        return "nan";
    }
    if (std::isinf(x)) {
        return x > 0 ? "inf" : "-inf";
    }
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string format_cell(const Cell& c)
{
    return std::visit(overloaded{
                          [](bool b) { return std::string(b ? "true" : "false"); },
                          [](std::int64_t i) { return std::to_string(i); },
                          [](double d) { return format_number(d); },
                          [](const std::string& s) { return s; },
                      },
                      c);
}

std::string render_csv(const Report& r, bool with_timing)
{
    require_homogeneous(r.rows, with_timing);
    std::string out;
    for (const auto& m : r.metadata) {
        out += "# " + m.key + "=" + format_cell(m.value) + "\n";
    }
    if (r.rows.empty()) {
        if (r.summary) {
            csv_table(out, {*r.summary}, with_timing);
        }
        return out;
    }
    if (r.summary) {
        for (const auto& f : r.summary->ordered(with_timing)) {
            out += "# summary." + f.key + "=" + format_cell(f.value) + "\n";
        }
    }
    csv_table(out, r.rows, with_timing);
    return out;
}

std::string render_json(const Report& r, bool with_timing)
{
    require_homogeneous(r.rows, with_timing);
    ojson doc = ojson::object();
    ojson meta = ojson::object();
    for (const auto& m : r.metadata) {
        meta[m.key] = to_json(m.value);
    }
    doc["metadata"] = std::move(meta);
    if (r.summary) {
        for (const auto& f : r.summary->ordered(with_timing)) {
            doc[f.key] = to_json(f.value);
        }
    }
    if (!r.rows.empty() || !r.summary) {
        ojson rows = ojson::array();
        for (const auto& row : r.rows) {
            rows.push_back(row_object(row, with_timing));
        }
        doc[r.rows_key] = std::move(rows);
    }
    return doc.dump(2) + "\n";
}

std::string render_gnuplot(const Report& r)
{
    require_homogeneous(r.rows, false);
    std::vector<SweepRow> rows = r.rows;
    if (rows.empty() && r.summary) {
        rows.push_back(*r.summary);
    }
    std::string out;
    if (rows.empty()) {
        return out;
    }
    out += "#";
    for (const auto& k : keys_of(rows.front().ordered(false))) {
        out += " " + k;
    }
    out += '\n';
    for (const auto& row : rows) {
        const auto fields = row.ordered(false);
        for (std::size_t i = 0; i < fields.size(); ++i) {
            std::string cell = std::holds_alternative<bool>(fields[i].value)
                                   ? std::string(std::get<bool>(fields[i].value) ? "1" : "0")
                                   : format_cell(fields[i].value);
            std::replace(cell.begin(), cell.end(), ' ', '_');
            out += (i ? " " : "") + cell;
        }
        out += '\n';
    }
    return out;
}

void write_text(const std::filesystem::path& path, const std::string& text)
{
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) {
        throw IoError("cannot open '" + path.string() + "' for writing");
    }
    f.write(text.data(), static_cast<std::streamsize>(text.size()));
    f.close();
    if (!f) {
        throw IoError("failed writing '" + path.string() + "'");
    }
}

void emit_table(const Report& r, Format format, const std::filesystem::path& path, bool with_timing)
{
    write_text(path, format == Format::csv ? render_csv(r, with_timing) : render_json(r, with_timing));
}

} // namespace fafchain
