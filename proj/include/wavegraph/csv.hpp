#pragma once

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace wavegraph {

/// A rectangular CSV table with leading `# key: value` metadata lines.
struct CsvTable {
    std::vector<std::string> metadata;  // without the leading "# "
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

namespace detail {

inline std::string csv_escape(const std::string& field) {
    if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

inline std::vector<std::string> csv_split(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    fields.push_back(cur);
    return fields;
}

}  // namespace detail

inline void write_csv(std::ostream& os, const CsvTable& t) {
    for (const auto& m : t.metadata) os << "# " << m << "\n";
    for (std::size_t i = 0; i < t.header.size(); ++i)
        os << (i ? "," : "") << detail::csv_escape(t.header[i]);
    os << "\n";
    for (const auto& row : t.rows) {
        if (row.size() != t.header.size())
            throw std::invalid_argument("CSV row width differs from header");
        for (std::size_t i = 0; i < row.size(); ++i)
            os << (i ? "," : "") << detail::csv_escape(row[i]);
        os << "\n";
    }
}

inline void write_csv(const std::string& path, const CsvTable& t) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    write_csv(out, t);
    if (!out) throw std::runtime_error("write failed: " + path);
}

inline CsvTable read_csv(std::istream& is) {
    CsvTable t;
    std::string line;
    bool have_header = false;
    while (std::getline(is, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line[0] == '#') {
            std::size_t start = 1;
            if (start < line.size() && line[start] == ' ') ++start;
            t.metadata.push_back(line.substr(start));
            continue;
        }
        auto fields = detail::csv_split(line);
        if (!have_header) {
            t.header = std::move(fields);
            have_header = true;
        } else {
            if (fields.size() != t.header.size())
                throw std::runtime_error("CSV row width differs from header");
            t.rows.push_back(std::move(fields));
        }
    }
    if (!have_header) throw std::runtime_error("CSV has no header row");
    return t;
}

inline CsvTable read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open: " + path);
    return read_csv(in);
}

/// Column index by name, or -1.
inline int csv_column(const CsvTable& t, const std::string& name) {
    for (std::size_t i = 0; i < t.header.size(); ++i)
        if (t.header[i] == name) return int(i);
    return -1;
}

inline std::vector<double> csv_numeric_column(const CsvTable& t,
                                              const std::string& name) {
    const int c = csv_column(t, name);
    if (c < 0) throw std::runtime_error("CSV is missing column: " + name);
    std::vector<double> v;
    v.reserve(t.rows.size());
    for (const auto& row : t.rows) v.push_back(std::stod(row[c]));
    return v;
}

}  // namespace wavegraph
