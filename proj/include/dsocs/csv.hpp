#pragma once

#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "dsocs/errors.hpp"
#include "dsocs/system.hpp"

namespace dsocs {

/// Formats a double with 17 significant digits, enough for bit-exact
/// round-trips through text.
inline std::string format_full(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
    std::vector<std::string> comments;
};

/// Writes a trajectory as CSV: `k,t,<coordinates...>,Ld[,V]`. Ld on row k
/// is the discrete Lagrangian of the step starting at k (nan on the last
/// row); V uses central velocity reconstruction (nan on both ends).
/// Comment lines start with '#'. No timestamps: identical runs produce
/// identical bytes.
inline void write_trajectory_csv(std::ostream& out, const DiscreteSystem& sys,
                                 const Trajectory& traj,
                                 const std::vector<std::string>& preamble = {}) {
    for (const auto& line : preamble) out << "# " << line << "\n";
    out << "k,t";
    for (std::size_t i = 0; i < sys.dim; ++i)
        out << ","
            << (i < sys.coordinate_names.size() ? sys.coordinate_names[i]
                                                : "q" + std::to_string(i + 1));
    out << ",Ld";
    if (sys.lyapunov) out << ",V";
    out << "\n";

    const std::size_t count = traj.points.size();
    for (std::size_t k = 0; k < count; ++k) {
        out << k << "," << format_full(static_cast<double>(k) * traj.h);
        for (double x : traj.points[k]) out << "," << format_full(x);
        if (k + 1 < count)
            out << "," << format_full(sys.lagrangian(traj.points[k], traj.points[k + 1]));
        else
            out << ",nan";
        if (sys.lyapunov) {
            if (k >= 1 && k + 1 < count) {
                const Vec v = (0.5 / traj.h) * (traj.points[k + 1] - traj.points[k - 1]);
                out << "," << format_full(sys.lyapunov(traj.points[k], v));
            } else {
                out << ",nan";
            }
        }
        out << "\n";
    }
}

inline void write_trajectory_csv_file(const std::string& path, const DiscreteSystem& sys,
                                      const Trajectory& traj,
                                      const std::vector<std::string>& preamble = {}) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot open output file: " + path);
    write_trajectory_csv(out, sys, traj, preamble);
}

inline CsvTable read_csv(std::istream& in) {
    CsvTable table;
    std::string line;
    bool have_header = false;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            table.comments.push_back(line);
            continue;
        }
        std::stringstream ss(line);
        std::string cell;
        if (!have_header) {
            while (std::getline(ss, cell, ',')) table.header.push_back(cell);
            have_header = true;
            continue;
        }
        std::vector<double> row;
        while (std::getline(ss, cell, ',')) row.push_back(std::strtod(cell.c_str(), nullptr));
        table.rows.push_back(std::move(row));
    }
    return table;
}

inline CsvTable read_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open csv file: " + path);
    return read_csv(in);
}

} // namespace dsocs
