#include "csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <system_error>

#include "orthomap/error.hpp"

namespace orthomap::detail {

void append_double(std::string& out, double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
    out.append(buf, res.ptr);
}

std::string format_double(double v) {
    std::string s;
    append_double(s, v);
    return s;
}

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        std::size_t comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
    return fields;
}

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

}  // namespace

CsvTable read_numeric_csv(const std::filesystem::path& path, std::string_view what) {
    const std::string text = read_text_file(path);
    std::vector<std::string_view> lines;
    {
        std::string_view rest(text);
        while (!rest.empty()) {
            std::size_t nl = rest.find('\n');
            std::string_view line = rest.substr(0, nl);
            if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
            lines.push_back(line);
            if (nl == std::string_view::npos) break;
            rest.remove_prefix(nl + 1);
        }
        while (!lines.empty() && trim(lines.back()).empty()) lines.pop_back();
    }
    const std::string where = std::string(what) + " file " + path.string();
    if (lines.empty()) throw ValidationError(where + ": missing header row");

    CsvTable table;
    for (auto f : split_fields(lines.front())) table.header.emplace_back(trim(f));
    const auto cols = static_cast<Eigen::Index>(table.header.size());
    const auto rows = static_cast<Eigen::Index>(lines.size() - 1);
    table.values.resize(rows, cols);

    for (Eigen::Index r = 0; r < rows; ++r) {
        const auto fields = split_fields(lines[static_cast<std::size_t>(r) + 1]);
        if (static_cast<Eigen::Index>(fields.size()) != cols) {
            throw DimensionError(where + ": row " + std::to_string(r + 1) + " has " +
                                 std::to_string(fields.size()) + " fields, expected " +
                                 std::to_string(cols));
        }
        for (Eigen::Index c = 0; c < cols; ++c) {
            std::string_view tok = trim(fields[static_cast<std::size_t>(c)]);
            if (!tok.empty() && tok.front() == '+') tok.remove_prefix(1);
            double v = 0.0;
            auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
            if (tok.empty() || res.ec != std::errc() || res.ptr != tok.data() + tok.size() ||
                !std::isfinite(v)) {
                throw ValidationError(where + ": row " + std::to_string(r + 1) + ", column " +
                                      std::to_string(c + 1) + " ('" + table.header[c] +
                                      "'): invalid number '" + std::string(tok) + "'");
            }
            table.values(r, c) = v;
        }
    }
    return table;
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    out.flush();
    if (!out) throw IoError("failed writing " + path.string());
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string() + " for reading");
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) throw IoError("failed reading " + path.string());
    return std::move(ss).str();
}

}  // namespace orthomap::detail
