#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace hent {

/// Time series of entanglement quantities. `x` is a dimensionless time
/// (sigma*t, g*t or omega*t) whose meaning is recorded in `x_label`.
struct EntanglementSeries {
    std::string x_label = "x";
    std::vector<double> t;
    std::vector<double> x;
    std::vector<double> concurrence;
    std::vector<double> e_f;
    std::vector<double> e_av;
    std::vector<double> e_hidden;

    std::size_t size() const { return t.size(); }
    void reserve(std::size_t n);
    void push_back(double time, double scaled, double c, double ef, double eav);
};

/// Column names in CSV order.
const std::vector<std::string>& csv_columns();

/// Decimal, 12 significant digits, '.' separator.
std::string format_number(double v);

/// Header `t,x,concurrence,e_f,e_av,e_hidden` then one LF-terminated row
/// per grid point.
void write_csv(std::ostream& os, const EntanglementSeries& series);
std::string to_csv(const EntanglementSeries& series);

/// FNV-1a 64 over the column's formatted cells, each followed by '\n'.
std::uint64_t fnv1a64(const std::string& bytes, std::uint64_t h = 0xcbf29ce484222325ULL);
std::vector<std::uint64_t> column_checksums(const EntanglementSeries& series);

}  // namespace hent
