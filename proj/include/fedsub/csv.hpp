#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace fedsub {

/// Format a double at 9 significant digits. All CSV output goes through
/// this so that identical configs produce byte-identical files.
inline std::string format_num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return std::string(buf);
}

inline std::string join_ids(const std::vector<int>& ids, char sep = ';') {
    std::string out;
    for (std::size_t i = 0; i < ids.size(); ++i) {
        if (i) out.push_back(sep);
        out += std::to_string(ids[i]);
    }
    return out;
}

inline std::vector<std::string> split_line(const std::string& line, char sep = ',') {
    std::vector<std::string> fields;
    std::string cur;
    for (char ch : line) {
        if (ch == sep) {
            fields.push_back(cur);
            cur.clear();
        } else if (ch != '\r') {
            cur.push_back(ch);
        }
    }
    fields.push_back(cur);
    return fields;
}

struct FeatureRow {
    int id = 0;
    int category = 0;
    std::vector<double> features;
};

/// Load an external feature table with header `id,category,f0..f{d-1}`.
/// Used in place of the synthetic generator when a config names a CSV.
inline std::vector<FeatureRow> load_feature_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error(path + ": cannot open");
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error(path + ": empty file");

    const auto header = split_line(line);
    if (header.size() < 3 || header[0] != "id" || header[1] != "category") {
        throw std::runtime_error(path + ":1: header must be id,category,f0..f{d-1}");
    }
    const std::size_t dim = header.size() - 2;
    for (std::size_t d = 0; d < dim; ++d) {
        if (header[d + 2] != "f" + std::to_string(d)) {
            throw std::runtime_error(path + ":1: feature columns must be named f0..f" +
                                     std::to_string(dim - 1));
        }
    }

    std::vector<FeatureRow> rows;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto fields = split_line(line);
        if (fields.size() != header.size()) {
            throw std::runtime_error(path + ":" + std::to_string(line_no) + ": expected " +
                                     std::to_string(header.size()) + " fields, got " +
                                     std::to_string(fields.size()));
        }
        FeatureRow row;
        try {
            row.id = std::stoi(fields[0]);
            row.category = std::stoi(fields[1]);
            row.features.reserve(dim);
            for (std::size_t d = 0; d < dim; ++d) row.features.push_back(std::stod(fields[d + 2]));
        } catch (const std::exception&) {
            throw std::runtime_error(path + ":" + std::to_string(line_no) + ": malformed number");
        }
        if (row.category < 0) {
            throw std::runtime_error(path + ":" + std::to_string(line_no) + ": negative category");
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw std::runtime_error(path + ": no data rows");
    return rows;
}

}  // namespace fedsub
