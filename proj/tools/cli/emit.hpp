#pragma once

#include <ostream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace convapprox::cli {

/// An absent value is emitted as an empty CSV field or JSON null.
using Value = std::variant<std::monostate, std::string, double, long, bool>;

struct Row {
    std::vector<std::pair<std::string, Value>> fields;

    Row& add(std::string key, const char* s) { return add(std::move(key), Value(std::string(s))); }
    Row& add(std::string key, Value v) {
        fields.emplace_back(std::move(key), std::move(v));
        return *this;
    }
};

enum class Format { Csv, Jsonl };

Format parse_format(const std::string& text);

/// RFC 4180 field quoting.
std::string csv_field(const std::string& s);

std::string format_value(const Value& v);

/// Header line (CSV only) followed by one line per row. Every row must carry the
/// same keys in the same order.
void emit(std::ostream& out, Format fmt, const std::vector<Row>& rows);

/// Single row, without a CSV header.
std::string render_row(Format fmt, const Row& row);
std::string render_header(const Row& row);

} // namespace convapprox::cli
