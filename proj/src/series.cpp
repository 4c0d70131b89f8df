#include "hent/series.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace hent {

void EntanglementSeries::reserve(std::size_t n) {
    t.reserve(n);
    x.reserve(n);
    concurrence.reserve(n);
    e_f.reserve(n);
    e_av.reserve(n);
    e_hidden.reserve(n);
}

void EntanglementSeries::push_back(double time, double scaled, double c, double ef, double eav) {
    t.push_back(time);
    x.push_back(scaled);
    concurrence.push_back(c);
    e_f.push_back(ef);
    e_av.push_back(eav);
    e_hidden.push_back(eav - ef);
}

const std::vector<std::string>& csv_columns() {
    static const std::vector<std::string> cols = {"t", "x", "concurrence", "e_f", "e_av", "e_hidden"};
    return cols;
}

std::string format_number(double v) {
    if (v == 0.0) v = 0.0;  // no "-0"
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

namespace {

const std::vector<double>& column(const EntanglementSeries& s, std::size_t k) {
    switch (k) {
        case 0: return s.t;
        case 1: return s.x;
        case 2: return s.concurrence;
        case 3: return s.e_f;
        case 4: return s.e_av;
        default: return s.e_hidden;
    }
}

}  // namespace

void write_csv(std::ostream& os, const EntanglementSeries& series) {
    const auto& cols = csv_columns();
    for (std::size_t k = 0; k < cols.size(); ++k) os << (k ? "," : "") << cols[k];
    os << '\n';
    for (std::size_t i = 0; i < series.size(); ++i) {
        for (std::size_t k = 0; k < cols.size(); ++k) os << (k ? "," : "") << format_number(column(series, k)[i]);
        os << '\n';
    }
}

std::string to_csv(const EntanglementSeries& series) {
    std::ostringstream os;
    write_csv(os, series);
    return os.str();
}

std::uint64_t fnv1a64(const std::string& bytes, std::uint64_t h) {
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::vector<std::uint64_t> column_checksums(const EntanglementSeries& series) {
    std::vector<std::uint64_t> out;
    for (std::size_t k = 0; k < csv_columns().size(); ++k) {
        std::uint64_t h = 0xcbf29ce484222325ULL;
        for (double v : column(series, k)) h = fnv1a64(format_number(v) + '\n', h);
        out.push_back(h);
    }
    return out;
}

}  // namespace hent
