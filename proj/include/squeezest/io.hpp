#pragma once

// CSV file formats: header row, %.17g values, newline-terminated rows.

#include <cmath>
#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "squeezest/errors.hpp"
#include "squeezest/grid.hpp"
#include "squeezest/states.hpp"

namespace squeezest::io {

inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<double>> columns;
};

inline std::string to_csv(const Table& t) {
  std::string out;
  for (std::size_t c = 0; c < t.header.size(); ++c) {
    if (c) out += ',';
    out += t.header[c];
  }
  out += '\n';
  const std::size_t rows = t.columns.empty() ? 0 : t.columns.front().size();
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < t.columns.size(); ++c) {
      if (c) out += ',';
      out += format_double(t.columns[c][r]);
    }
    out += '\n';
  }
  return out;
}

inline void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open '" + path + "' for writing");
  f << text;
  if (!f) throw IoError("failed writing '" + path + "'");
}

inline std::string read_text(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open '" + path + "' for reading");
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

// Parses a numeric CSV with a header row; the header must match `expected`.
inline Table parse_csv(const std::string& text, const std::vector<std::string>& expected,
                       const std::string& what) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw ValidationError(what + ": empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  Table t;
  {
    std::istringstream hs(line);
    std::string cell;
    while (std::getline(hs, cell, ',')) t.header.push_back(cell);
  }
  if (t.header != expected) {
    std::string want;
    for (const auto& h : expected) want += (want.empty() ? "" : ",") + h;
    throw ValidationError(what + ": expected header '" + want + "', got '" + line + "'");
  }
  t.columns.assign(expected.size(), {});
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string cell;
    std::size_t c = 0;
    while (std::getline(ls, cell, ',')) {
      if (c >= expected.size()) throw ValidationError(what + ": too many columns on row " + std::to_string(row));
      // strtod rather than stod: subnormal tails of a wavefunction are valid input
      char* end = nullptr;
      const double v = std::strtod(cell.c_str(), &end);
      if (cell.empty() || end != cell.c_str() + cell.size() || std::isspace(static_cast<unsigned char>(cell[0])))
        throw ValidationError(what + ": bad number '" + cell + "' on row " + std::to_string(row));
      t.columns[c].push_back(v);
      ++c;
    }
    if (c != expected.size()) throw ValidationError(what + ": too few columns on row " + std::to_string(row));
  }
  return t;
}

// Recovers the uniform grid behind a sampled coordinate column.
inline GridSpec uniform_grid_from(const std::vector<double>& x, const std::string& what) {
  if (x.size() < 2) throw ValidationError(what + ": need at least 2 rows");
  const GridSpec g{x.front(), x.back(), x.size()};
  g.validate(what);
  const double h = g.step();
  for (std::size_t i = 0; i < x.size(); ++i)
    if (std::abs(x[i] - g.at(i)) > 1e-9 * h * static_cast<double>(x.size()))
      throw ValidationError(what + ": grid is not uniform at row " + std::to_string(i + 2));
  return g;
}

// Wavefunction file: columns x,re_psi,im_psi on a uniform grid.
inline WavefunctionGrid read_wavefunction_csv(const std::string& path) {
  const auto t = parse_csv(read_text(path), {"x", "re_psi", "im_psi"}, "wavefunction file");
  const GridSpec g = uniform_grid_from(t.columns[0], "wavefunction file");
  std::vector<complex> v(g.n);
  for (std::size_t i = 0; i < g.n; ++i) v[i] = {t.columns[1][i], t.columns[2][i]};
  return WavefunctionGrid(g, std::move(v));
}

inline std::string wavefunction_to_csv(const WavefunctionGrid& psi) {
  Table t{{"x", "re_psi", "im_psi"}, {{}, {}, {}}};
  for (std::size_t i = 0; i < psi.grid().n; ++i) {
    t.columns[0].push_back(psi.grid().at(i));
    t.columns[1].push_back(psi.values()[i].real());
    t.columns[2].push_back(psi.values()[i].imag());
  }
  return to_csv(t);
}

}  // namespace squeezest::io
