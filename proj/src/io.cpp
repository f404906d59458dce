#include "hslra/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "hslra/errors.hpp"

namespace hslra {

std::string fmt_double(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[40];
    for (int prec = 15; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof(buf), "%.*g", prec, x);
        if (std::strtod(buf, nullptr) == x) break;
    }
    return buf;
}

namespace {

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (ch != '\r') {
            cur += ch;
        }
    }
    out.push_back(cur);
    return out;
}

bool parse_double(const std::string& s, double& out) {
    if (s.empty()) return false;
    char* end = nullptr;
    out = std::strtod(s.c_str(), &end);
    while (end && *end == ' ') ++end;
    return end && *end == '\0';
}

} // namespace

std::vector<double> read_series_csv(const std::string& path, const std::string& column) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    std::vector<std::vector<std::string>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r") continue;
        rows.push_back(split_fields(line));
    }
    if (rows.empty()) throw IoError("no samples found in " + path);

    double dummy;
    bool has_header = false;
    for (const std::string& f : rows[0])
        if (!parse_double(f, dummy)) has_header = true;

    long idx = -1;
    if (parse_double(column, dummy) && column.find('.') == std::string::npos) {
        idx = std::strtol(column.c_str(), nullptr, 10);
    } else if (has_header) {
        for (std::size_t j = 0; j < rows[0].size(); ++j)
            if (rows[0][j] == column) idx = static_cast<long>(j);
        if (idx < 0) throw IoError("column '" + column + "' not found in " + path);
    } else {
        throw IoError("column '" + column + "' needs a header line in " + path);
    }

    std::vector<double> out;
    for (std::size_t r = has_header ? 1 : 0; r < rows.size(); ++r) {
        if (idx < 0 || idx >= static_cast<long>(rows[r].size()))
            throw IoError("row in " + path + " lacks column " + column);
        double v;
        if (!parse_double(rows[r][static_cast<std::size_t>(idx)], v))
            throw IoError("non-numeric value '" + rows[r][static_cast<std::size_t>(idx)] +
                          "' in " + path);
        out.push_back(v);
    }
    if (out.empty()) throw IoError("no samples found in " + path);
    return out;
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& columns) {
    if (columns.empty() || header.size() != columns.size())
        throw ArgumentError("csv writer needs one header per column");
    const std::size_t rows = columns[0].size();
    for (const auto& c : columns)
        if (c.size() != rows) throw ArgumentError("csv columns must share a length");
    std::ostringstream os;
    for (std::size_t j = 0; j < header.size(); ++j)
        os << header[j] << (j + 1 < header.size() ? ',' : '\n');
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < columns.size(); ++j)
            os << fmt_double(columns[j][i]) << (j + 1 < columns.size() ? ',' : '\n');
    write_text(path, os.str());
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path);
    out << text;
    if (!out) throw IoError("write failed for " + path);
}

std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

} // namespace hslra
