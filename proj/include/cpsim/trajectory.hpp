#pragma once

#include <string>
#include <vector>

namespace cpsim {

// Column-labelled time series shared by every solver. Rows are emitted at
// output times; columns are solver specific.
struct Trajectory {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    std::size_t column_index(const std::string& name) const;
    std::vector<double> column(const std::string& name) const;
    double back(const std::string& name) const;
};

// CSV with 17 significant digits so values round-trip exactly.
std::string format_double(double v);
void write_csv(const std::string& path, const Trajectory& t);
void write_csv_pairs(const std::string& path, const std::string& xname,
                     const std::string& yname, const std::vector<double>& x,
                     const std::vector<double>& y);

// Two-column CSV reader (header optional) used for tabulated profile input.
void read_csv_pairs(const std::string& path, std::vector<double>& x,
                    std::vector<double>& y);

}  // namespace cpsim
