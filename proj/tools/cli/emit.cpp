#include "cli/emit.hpp"

#include "cli/args.hpp"
#include "convapprox/format.hpp"

#include <cmath>
#include <json.hpp>

namespace convapprox::cli {

Format parse_format(const std::string& text) {
    if (text == "csv") return Format::Csv;
    if (text == "jsonl") return Format::Jsonl;
    throw UsageError("--format must be csv or jsonl, got '" + text + "'");
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::string format_value(const Value& v) {
    struct Visitor {
        std::string operator()(std::monostate) const { return {}; }
        std::string operator()(const std::string& s) const { return s; }
        std::string operator()(double d) const { return shortest(d); }
        std::string operator()(long l) const { return std::to_string(l); }
        std::string operator()(bool b) const { return b ? "true" : "false"; }
    };
    return std::visit(Visitor{}, v);
}

std::string render_header(const Row& row) {
    std::string line;
    for (std::size_t i = 0; i < row.fields.size(); ++i) {
        if (i) line += ',';
        line += csv_field(row.fields[i].first);
    }
    return line + "\r\n";
}

std::string render_row(Format fmt, const Row& row) {
    if (fmt == Format::Csv) {
        std::string line;
        for (std::size_t i = 0; i < row.fields.size(); ++i) {
            if (i) line += ',';
            line += csv_field(format_value(row.fields[i].second));
        }
        return line + "\r\n";
    }
    nlohmann::ordered_json obj = nlohmann::ordered_json::object();
    for (const auto& [key, v] : row.fields) {
        if (std::holds_alternative<std::monostate>(v))
            obj[key] = nullptr;
        else if (const auto* s = std::get_if<std::string>(&v))
            obj[key] = *s;
        else if (const auto* d = std::get_if<double>(&v))
            obj[key] = std::isfinite(*d) ? nlohmann::ordered_json(*d) : nlohmann::ordered_json(shortest(*d));
        else if (const auto* l = std::get_if<long>(&v))
            obj[key] = *l;
        else
            obj[key] = std::get<bool>(v);
    }
    return obj.dump() + "\n";
}

void emit(std::ostream& out, Format fmt, const std::vector<Row>& rows) {
    if (rows.empty()) return;
    if (fmt == Format::Csv) out << render_header(rows.front());
    for (const auto& r : rows) out << render_row(fmt, r);
}

} // namespace convapprox::cli
