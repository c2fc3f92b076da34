#pragma once

#include <cstddef>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "whiplash/errors.hpp"
#include "whiplash/format.hpp"
#include "whiplash/integrators.hpp"
#include "whiplash/optimizers.hpp"

namespace whiplash {

// Header `t,x0,...,v0,...,f,gamma,W` for a d-dimensional trajectory.
inline std::string trajectory_csv_header(std::size_t dim) {
    std::ostringstream out;
    out << 't';
    for (std::size_t i = 0; i < dim; ++i) out << ",x" << i;
    for (std::size_t i = 0; i < dim; ++i) out << ",v" << i;
    out << ",f,gamma,W";
    return out.str();
}

inline std::string trajectory_to_csv(const trajectory& traj, std::size_t dim) {
    std::ostringstream out;
    out << trajectory_csv_header(dim) << '\n';
    for (const trajectory_sample& s : traj.samples) {
        out << format_double(s.t);
        for (double c : s.x) out << ',' << format_double(c);
        for (double c : s.v) out << ',' << format_double(c);
        out << ',' << format_double(s.f_value) << ',' << format_double(s.gamma_value) << ','
            << format_double(s.lyapunov_w) << '\n';
    }
    return out.str();
}

// Header `k,x0,...,z0,...,f,grad_norm,alpha` for discrete iterate records.
inline std::string records_csv_header(std::size_t dim) {
    std::ostringstream out;
    out << 'k';
    for (std::size_t i = 0; i < dim; ++i) out << ",x" << i;
    for (std::size_t i = 0; i < dim; ++i) out << ",z" << i;
    out << ",f,grad_norm,alpha";
    return out.str();
}

inline std::string records_to_csv(const std::vector<iterate_record>& records, std::size_t dim) {
    std::ostringstream out;
    out << records_csv_header(dim) << '\n';
    for (const iterate_record& r : records) {
        out << r.k;
        for (double c : r.x) out << ',' << format_double(c);
        for (double c : r.z) out << ',' << format_double(c);
        out << ',' << format_double(r.f_value) << ',' << format_double(r.grad_norm) << ','
            << format_double(r.alpha) << '\n';
    }
    return out.str();
}

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw io_error("cannot open for writing: " + path);
    out << content;
    if (!out) throw io_error("write failed: " + path);
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw io_error("cannot open for reading: " + path);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

// Minimal reader for the files this library writes: splits on commas, no
// quoting. Returns rows of cells, header included.
inline std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::string cell;
        std::istringstream ls(line);
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        if (!line.empty() && line.back() == ',') cells.push_back("");
        rows.push_back(std::move(cells));
    }
    return rows;
}

}  // namespace whiplash
