#include "contacton/io.hpp"

#include <cstdio>
#include <fstream>

namespace contacton::io {

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  return out;
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void emit_plot_data(const Series& series, const std::string& path) {
  if (series.rows.empty()) throw Error("refusing to write empty series to " + path);
  std::ofstream out = open_out(path);
  for (std::size_t c = 0; c < series.columns.size(); ++c)
    out << (c ? "," : "") << series.columns[c];
  out << '\n';
  for (const auto& row : series.rows) {
    if (row.size() != series.columns.size())
      throw DimensionError("series row width differs from header in " + path);
    for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << format_double(row[c]);
    out << '\n';
  }
  if (!out) throw Error("write failed for " + path);
}

void write_solution(const instanton::StripMap& w, const std::string& path) {
  std::ofstream out = open_out(path);
  const auto& g = w.grid();
  out << "# contacton strip solution\n";
  out << "n " << w.dim() << '\n';
  out << "grid " << format_double(g.tau_min) << ' ' << format_double(g.tau_max) << ' '
      << g.n_tau << ' ' << g.n_t << '\n';
  out << "lower " << w.lower().label() << '\n';
  out << "upper " << w.upper().label() << '\n';
  out << "far_field " << instanton::to_string(w.far_field()) << '\n';
  for (int i = 0; i <= g.n_tau; ++i)
    for (int j = 0; j <= g.n_t; ++j) {
      out << i << ' ' << j;
      const double* x = w.raw(i, j);
      for (int k = 0; k < w.width(); ++k) out << ' ' << format_double(x[k]);
      out << '\n';
    }
  if (!out) throw Error("write failed for " + path);
}

void write_chord_table(const std::vector<action::ChordRecord>& records,
                       const std::string& path) {
  std::ofstream out = open_out(path);
  out << "seed_q,duration,action,defect,margin,cond,flags\n";
  for (const auto& r : records) {
    std::string q;
    for (int k = 0; k < r.seed.q0.size(); ++k) q += (k ? ";" : "") + format_double(r.seed.q0[k]);
    out << q << ',';
    if (r.found) {
      const auto& c = r.report;
      out << format_double(c.duration) << ',' << format_double(c.action) << ','
          << format_double(c.defect) << ',' << format_double(c.margin) << ','
          << format_double(c.condition) << ',' << c.flags() << '\n';
    } else {
      std::string e = r.error;
      for (char& ch : e)
        if (ch == ',' || ch == '\n') ch = ' ';
      out << "nan,nan,nan,nan,nan,rejected: " << e << '\n';
    }
  }
  if (!out) throw Error("write failed for " + path);
}

}  // namespace contacton::io
