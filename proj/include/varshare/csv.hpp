#ifndef VARSHARE_CSV_HPP
#define VARSHARE_CSV_HPP

#include <Eigen/Dense>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "varshare/common.hpp"

namespace varshare {

struct CsvTable {
    std::vector<std::string> header;
    Eigen::MatrixXd values;  // rows = time points
};

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (ch != '\r') {
            cur.push_back(ch);
        }
    }
    out.push_back(cur);
    return out;
}

inline std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}

}  // namespace detail

// Strict numeric CSV: header row of variable names, then one row per time
// point. Cells must parse as finite doubles; row/col in error messages are
// 1-based and count data rows (header excluded).
inline CsvTable read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open CSV file: " + path);
    std::string line;
    if (!std::getline(in, line)) throw ValidationError("empty CSV file: " + path);
    CsvTable table;
    for (auto& name : detail::split_csv_line(line)) table.header.push_back(detail::trim(name));
    const std::size_t ncol = table.header.size();
    if (ncol == 0) throw ValidationError("no columns in CSV file: " + path);

    std::vector<double> data;
    std::size_t nrow = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto cells = detail::split_csv_line(line);
        ++nrow;
        if (cells.size() != ncol) {
            throw ValidationError(path + ": row " + std::to_string(nrow) + " has " +
                                  std::to_string(cells.size()) + " cells, expected " +
                                  std::to_string(ncol));
        }
        for (std::size_t c = 0; c < ncol; ++c) {
            std::string cell = detail::trim(cells[c]);
            double v = 0.0;
            auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
            if (ec != std::errc{} || ptr != cell.data() + cell.size()) {
                throw ValidationError(path + ": cannot parse value \"" + cell + "\" at row " +
                                      std::to_string(nrow) + " col " + std::to_string(c + 1));
            }
            if (!std::isfinite(v)) {
                throw ValidationError(path + ": non-finite value \"" + cell + "\" at row " +
                                      std::to_string(nrow) + " col " + std::to_string(c + 1));
            }
            data.push_back(v);
        }
    }
    table.values.resize(static_cast<Eigen::Index>(nrow), static_cast<Eigen::Index>(ncol));
    for (std::size_t r = 0; r < nrow; ++r)
        for (std::size_t c = 0; c < ncol; ++c)
            table.values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
                data[r * ncol + c];
    return table;
}

inline void write_csv(const std::string& path, const std::vector<std::string>& header,
                      const Eigen::MatrixXd& values) {
    if (static_cast<Eigen::Index>(header.size()) != values.cols())
        throw ValidationError("write_csv: header size does not match column count");
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot open for writing: " + path);
    for (std::size_t c = 0; c < header.size(); ++c) {
        if (c) out << ',';
        out << header[c];
    }
    out << '\n';
    for (Eigen::Index r = 0; r < values.rows(); ++r) {
        for (Eigen::Index c = 0; c < values.cols(); ++c) {
            if (c) out << ',';
            out << format_g15(values(r, c));
        }
        out << '\n';
    }
    if (!out) throw ValidationError("write failed: " + path);
}

}  // namespace varshare

#endif  // VARSHARE_CSV_HPP
