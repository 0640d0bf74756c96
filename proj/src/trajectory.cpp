#include "cpsim/trajectory.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "cpsim/errors.hpp"

namespace cpsim {

std::size_t Trajectory::column_index(const std::string& name) const {
    for (std::size_t i = 0; i < columns.size(); ++i)
        if (columns[i] == name) return i;
    throw validation_error("Trajectory: no column named " + name);
}

std::vector<double> Trajectory::column(const std::string& name) const {
    std::size_t j = column_index(name);
    std::vector<double> out;
    out.reserve(rows.size());
    for (const auto& r : rows) out.push_back(r[j]);
    return out;
}

double Trajectory::back(const std::string& name) const {
    if (rows.empty()) throw validation_error("Trajectory: empty");
    return rows.back()[column_index(name)];
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_csv(const std::string& path, const Trajectory& t) {
    std::ofstream out(path);
    if (!out) throw validation_error("cannot open for writing: " + path);
    for (std::size_t i = 0; i < t.columns.size(); ++i)
        out << (i ? "," : "") << t.columns[i];
    out << "\n";
    for (const auto& r : t.rows) {
        for (std::size_t i = 0; i < r.size(); ++i)
            out << (i ? "," : "") << format_double(r[i]);
        out << "\n";
    }
}

void write_csv_pairs(const std::string& path, const std::string& xname,
                     const std::string& yname, const std::vector<double>& x,
                     const std::vector<double>& y) {
    std::ofstream out(path);
    if (!out) throw validation_error("cannot open for writing: " + path);
    out << xname << "," << yname << "\n";
    for (std::size_t i = 0; i < x.size(); ++i)
        out << format_double(x[i]) << "," << format_double(y[i]) << "\n";
}

void read_csv_pairs(const std::string& path, std::vector<double>& x,
                    std::vector<double>& y) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open: " + path);
    x.clear();
    y.clear();
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream ss(line);
        double a, b;
        if (ss >> a >> b) {
            x.push_back(a);
            y.push_back(b);
        }
        // non-numeric lines (headers) are skipped
    }
    if (x.empty()) throw config_error("no numeric rows in " + path);
}

}  // namespace cpsim
