#pragma once

#include <string>
#include <vector>

#include "contacton/chord.hpp"
#include "contacton/strip.hpp"

namespace contacton::io {

struct Series {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  void add(std::vector<double> row) { rows.push_back(std::move(row)); }
};

// CSV with a header row; doubles printed with 17 significant digits.
// Throws Error on an empty series or an unwritable path.
void emit_plot_data(const Series& series, const std::string& path);

// Header (n, grid, Legendrian labels, far-field mode), then one node per line:
// i j q... p... z
void write_solution(const instanton::StripMap& w, const std::string& path);

// Columns seed_q, duration, action, defect, margin, cond, flags.
void write_chord_table(const std::vector<action::ChordRecord>& records,
                       const std::string& path);

std::string format_double(double v);

}  // namespace contacton::io
