#pragma once

// Result tables: '#'-prefixed metadata, a column-name line, then
// comma-separated rows with floats rendered at 17 significant digits.
// Reruns with identical config and seed are byte-identical.

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "dysco/analysis.hpp"
#include "dysco/experiments.hpp"
#include "dysco/propagate.hpp"

namespace dysco {

struct ResultTable {
    std::vector<std::pair<std::string, std::string>> meta;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

namespace detail {

inline std::string table_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace dysco::detail

/// Long-format table of a 2-D sweep: one row per (axis1, axis2) cell.
inline ResultTable make_table(const SweepResult& sweep) {
    ResultTable t;
    t.meta = sweep.meta;
    if (sweep.p0.size() == sweep.axis1.size() && sweep.axis1.size() == sweep.axis2.size()) {
        // paired axes (baseline comparisons): one row per grid point
        t.columns = {sweep.axis1_name, sweep.axis2_name, "p0"};
        for (std::size_t i = 0; i < sweep.axis1.size(); ++i)
            t.rows.push_back({sweep.axis1[i], sweep.axis2[i], sweep.p0[i]});
        return t;
    }
    t.columns = {sweep.axis1_name, sweep.axis2_name, "p0"};
    for (std::size_t i = 0; i < sweep.axis1.size(); ++i)
        for (std::size_t j = 0; j < sweep.axis2.size(); ++j)
            t.rows.push_back({sweep.axis1[i], sweep.axis2[j], sweep.at(i, j)});
    return t;
}

inline ResultTable make_table(const Spectrum& spec, const std::string& coord_name) {
    ResultTable t;
    t.columns = {coord_name, "magnitude"};
    for (std::size_t k = 0; k < spec.coord.size(); ++k)
        t.rows.push_back({spec.coord[k], spec.magnitude[k]});
    return t;
}

inline ResultTable make_table(const FilterFunction& ff) {
    ResultTable t;
    t.meta.emplace_back("duration_s", detail::table_g17(ff.duration));
    t.columns = {"omega_rad_s", "filter"};
    for (std::size_t k = 0; k < ff.omega.size(); ++k)
        t.rows.push_back({ff.omega[k], ff.values[k]});
    return t;
}

inline ResultTable make_table(const std::vector<TracePoint>& trace) {
    ResultTable t;
    t.columns = {"t_s", "pulse_index", "bloch_x", "bloch_y", "bloch_z"};
    for (const TracePoint& p : trace)
        t.rows.push_back({p.t, static_cast<double>(p.pulse_index), p.x, p.y, p.z});
    return t;
}

inline void emit_table(const ResultTable& table, std::ostream& os) {
    for (const auto& [k, v] : table.meta) os << "# " << k << " = " << v << "\n";
    for (std::size_t c = 0; c < table.columns.size(); ++c)
        os << (c ? "," : "") << table.columns[c];
    os << "\n";
    for (const auto& row : table.rows) {
        for (std::size_t c = 0; c < row.size(); ++c)
            os << (c ? "," : "") << detail::table_g17(row[c]);
        os << "\n";
    }
}

inline std::string table_to_string(const ResultTable& table) {
    std::ostringstream os;
    emit_table(table, os);
    return os.str();
}

inline void write_table_file(const ResultTable& table, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    emit_table(table, out);
    if (!out) throw std::runtime_error("write failed: " + path);
}

/// Inverse of emit_table; values round-trip exactly through %.17g.
inline ResultTable read_table(std::istream& in) {
    ResultTable t;
    std::string line;
    bool have_columns = false;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            const std::size_t eq = line.find('=');
            if (eq != std::string::npos) {
                std::string key = line.substr(1, eq - 1);
                std::string val = line.substr(eq + 1);
                while (!key.empty() && key.front() == ' ') key.erase(key.begin());
                while (!key.empty() && key.back() == ' ') key.pop_back();
                while (!val.empty() && val.front() == ' ') val.erase(val.begin());
                t.meta.emplace_back(key, val);
            }
            continue;
        }
        std::istringstream row(line);
        std::string cell;
        if (!have_columns) {
            while (std::getline(row, cell, ',')) t.columns.push_back(cell);
            have_columns = true;
            continue;
        }
        std::vector<double> values;
        while (std::getline(row, cell, ',')) values.push_back(std::strtod(cell.c_str(), nullptr));
        t.rows.push_back(std::move(values));
    }
    return t;
}

}  // namespace dysco
