// csv.hpp — deterministic CSV emission.  Floats are written with the
// shortest decimal representation that round-trips binary64, so identical
// runs produce byte-identical files and reloads are lossless.
#pragma once

#include <charconv>
#include <ostream>
#include <string>
#include <system_error>
#include <vector>

#include "hamcoup/errors.hpp"
#include "hamcoup/integrators.hpp"
#include "hamcoup/registry.hpp"

namespace hamcoup {

inline std::string format_double(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    if (res.ec != std::errc{})
        throw NumericError("format_double: conversion failed");
    return std::string(buf, res.ptr);
}

inline void write_csv_header(std::ostream& out,
                             const std::vector<std::string>& columns) {
    for (std::size_t i = 0; i < columns.size(); ++i)
        out << (i ? "," : "") << columns[i];
    out << '\n';
}

inline void write_csv_row(std::ostream& out, const std::vector<double>& values) {
    for (std::size_t i = 0; i < values.size(); ++i)
        out << (i ? "," : "") << format_double(values[i]);
    out << '\n';
}

inline std::vector<std::string> trajectory_columns(const BuiltModel& model) {
    std::vector<std::string> cols{"t"};
    for (const auto& [name, index] : model.observables) cols.push_back(name);
    if (!model.energy1_label.empty()) cols.push_back(model.energy1_label);
    if (!model.energy2_label.empty()) cols.push_back(model.energy2_label);
    cols.push_back("H_total");
    cols.push_back("dH_total");
    for (std::size_t i = 0; i < model.system.constraints.size(); ++i)
        cols.push_back("constraint_" + std::to_string(i + 1));
    return cols;
}

inline void write_trajectory_csv(std::ostream& out, const Trajectory& traj,
                                 const BuiltModel& model) {
    write_csv_header(out, trajectory_columns(model));
    const double h_total_0 = traj.energies.at(0)[2];
    std::vector<double> row;
    for (std::size_t i = 0; i < traj.size(); ++i) {
        row.clear();
        row.push_back(traj.times[i]);
        for (const auto& [name, index] : model.observables)
            row.push_back(traj.states[i].z()[index]);
        if (!model.energy1_label.empty()) row.push_back(traj.energies[i][0]);
        if (!model.energy2_label.empty()) row.push_back(traj.energies[i][1]);
        row.push_back(traj.energies[i][2]);
        row.push_back(traj.energies[i][2] - h_total_0);
        const Vec& g = traj.constraint_residuals[i];
        for (Index k = 0; k < g.size(); ++k) row.push_back(g[k]);
        write_csv_row(out, row);
    }
}

// Companion gnuplot script plotting the energy columns of a trajectory CSV.
inline void write_trajectory_gnuplot(std::ostream& out,
                                     const std::string& csv_path,
                                     const BuiltModel& model) {
    const auto cols = trajectory_columns(model);
    std::size_t h_total_col = 0;
    for (std::size_t i = 0; i < cols.size(); ++i)
        if (cols[i] == "dH_total") h_total_col = i + 1;  // gnuplot is 1-based
    out << "set datafile separator ','\n"
        << "set key autotitle columnhead\n"
        << "set xlabel 't'\n"
        << "plot";
    bool first = true;
    for (std::size_t i = 2; i <= cols.size(); ++i) {
        if (i == h_total_col || cols[i - 1].rfind("constraint_", 0) == 0) continue;
        out << (first ? " " : ", \\\n     ") << '\'' << csv_path << "' using 1:"
            << i << " with lines";
        first = false;
    }
    out << '\n';
}

} // namespace hamcoup
