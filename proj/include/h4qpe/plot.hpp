#pragma once

// Minimal SVG line/scatter plots for the experiment CSV artifacts. The
// schema is recognized from the CSV column header.

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "h4qpe/config.hpp"
#include "h4qpe/errors.hpp"

namespace h4qpe {

struct CsvTable {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  std::size_t column(const std::string &name) const {
    const auto it = std::find(columns.begin(), columns.end(), name);
    if (it == columns.end())
      fail(ErrorKind::UnsupportedPlot, "CSV has no column '" + name + "'");
    return static_cast<std::size_t>(it - columns.begin());
  }
};

/// Comment lines ('#') are skipped; the first other line is the header.
inline CsvTable read_csv(std::istream &is) {
  CsvTable t;
  for (std::string line; std::getline(is, line);) {
    if (line.empty() || line[0] == '#')
      continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');)
      cells.push_back(detail::trim(cell));
    if (t.columns.empty())
      t.columns = std::move(cells);
    else
      t.rows.push_back(std::move(cells));
  }
  return t;
}

enum class PlotKind { Pes, Convergence, Overlap, Shots };

struct Series {
  std::string name;
  std::vector<std::pair<double, double>> points;
};

struct PlotSpec {
  PlotKind kind;
  std::string title, x_label, y_label;
  bool lines = true;
  std::vector<Series> series;
};

inline PlotKind detect_plot_kind(const CsvTable &t) {
  auto has = [&](const char *c) {
    return std::find(t.columns.begin(), t.columns.end(), c) != t.columns.end();
  };
  if (has("beta_deg") && has("method") && has("energy_hartree"))
    return PlotKind::Pes;
  if (has("beta_deg") && has("m_bits") && has("abs_error_hartree"))
    return PlotKind::Convergence;
  if (has("guess") && has("eval_index") && has("GS"))
    return PlotKind::Overlap;
  if (has("prep") && has("shots") && has("energy_hartree") && has("count"))
    return PlotKind::Shots;
  fail(ErrorKind::UnsupportedPlot, "unrecognized CSV schema");
}

inline PlotSpec plot_spec_from_csv(const CsvTable &t) {
  if (t.columns.empty() || t.rows.empty())
    fail(ErrorKind::UnsupportedPlot, "empty CSV");
  PlotSpec p{detect_plot_kind(t), "", "", "", true, {}};
  std::map<std::string, std::size_t> index;
  auto add = [&](const std::string &name, double x, double y) {
    auto [it, fresh] = index.try_emplace(name, p.series.size());
    if (fresh)
      p.series.push_back({name, {}});
    p.series[it->second].points.emplace_back(x, y);
  };
  auto num = [](const std::string &s) { return std::stod(s); };
  switch (p.kind) {
  case PlotKind::Pes: {
    p.title = "Potential energy surface";
    p.x_label = "beta (deg)";
    p.y_label = "energy (hartree)";
    const auto b = t.column("beta_deg"), m = t.column("method"), e = t.column("energy_hartree");
    for (const auto &r : t.rows)
      add(r[m], num(r[b]), num(r[e]));
    break;
  }
  case PlotKind::Convergence: {
    p.title = "IQPE error vs bits";
    p.x_label = "IQPE bits";
    p.y_label = "log10 |E - E_fci| (hartree)";
    const auto b = t.column("beta_deg"), m = t.column("m_bits"),
               e = t.column("abs_error_hartree");
    for (const auto &r : t.rows)
      add("beta=" + r[b], num(r[m]), std::log10(std::max(num(r[e]), 1e-16)));
    break;
  }
  case PlotKind::Overlap: {
    p.title = "Squared overlap vs VQE evaluations";
    p.x_label = "VQE evaluations";
    p.y_label = "|<psi|state>|^2";
    const auto g = t.column("guess"), k = t.column("eval_index");
    std::vector<std::size_t> labels;
    for (const char *l : {"GS", "ES1", "ES2", "ES3"})
      if (std::find(t.columns.begin(), t.columns.end(), l) != t.columns.end())
        labels.push_back(t.column(l));
    for (const auto &r : t.rows)
      for (std::size_t c : labels)
        add(r[g] + " " + t.columns[c], num(r[k]), num(r[c]));
    break;
  }
  case PlotKind::Shots: {
    p.title = "Reconstructed energies per shot count";
    p.x_label = "log10 shots";
    p.y_label = "energy (hartree)";
    p.lines = false;
    const auto pr = t.column("prep"), s = t.column("shots"), e = t.column("energy_hartree");
    for (const auto &r : t.rows)
      add(r[pr], std::log10(num(r[s])), num(r[e]));
    break;
  }
  }
  return p;
}

inline void write_svg(std::ostream &os, const PlotSpec &p) {
  constexpr double W = 720, H = 480, L = 80, R = 180, T = 40, B = 60;
  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
  for (const Series &s : p.series)
    for (const auto &[x, y] : s.points) {
      x0 = std::min(x0, x);
      x1 = std::max(x1, x);
      y0 = std::min(y0, y);
      y1 = std::max(y1, y);
    }
  if (x1 == x0) {
    x0 -= 0.5;
    x1 += 0.5;
  }
  if (y1 == y0) {
    y0 -= 0.5;
    y1 += 0.5;
  }
  const auto px = [&](double x) { return L + (x - x0) / (x1 - x0) * (W - L - R); };
  const auto py = [&](double y) { return H - B - (y - y0) / (y1 - y0) * (H - T - B); };
  static const char *palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                  "#9467bd", "#8c564b", "#e377c2", "#17becf"};
  os << std::setprecision(6);
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
     << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << W / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">"
     << p.title << "</text>\n";
  os << "<rect x=\"" << L << "\" y=\"" << T << "\" width=\"" << W - L - R << "\" height=\""
     << H - T - B << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int k = 0; k <= 4; ++k) {
    const double xv = x0 + (x1 - x0) * k / 4, yv = y0 + (y1 - y0) * k / 4;
    os << "<text x=\"" << px(xv) << "\" y=\"" << H - B + 16 << "\" text-anchor=\"middle\">"
       << xv << "</text>\n";
    os << "<text x=\"" << L - 6 << "\" y=\"" << py(yv) + 4 << "\" text-anchor=\"end\">" << yv
       << "</text>\n";
  }
  os << "<text x=\"" << (L + W - R) / 2 << "\" y=\"" << H - 16
     << "\" text-anchor=\"middle\">" << p.x_label << "</text>\n";
  os << "<text transform=\"translate(16," << (T + H - B) / 2
     << ") rotate(-90)\" text-anchor=\"middle\">" << p.y_label << "</text>\n";
  for (std::size_t i = 0; i < p.series.size(); ++i) {
    const Series &s = p.series[i];
    const char *colour = palette[i % std::size(palette)];
    os << "<g class=\"series\" data-name=\"" << s.name << "\">\n";
    if (p.lines) {
      os << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"1.5\" points=\"";
      for (const auto &[x, y] : s.points)
        os << px(x) << ',' << py(y) << ' ';
      os << "\"/>\n";
    }
    for (const auto &[x, y] : s.points)
      os << "<circle cx=\"" << px(x) << "\" cy=\"" << py(y) << "\" r=\"2.5\" fill=\"" << colour
         << "\"/>\n";
    os << "</g>\n";
    const double ly = T + 14 + 16 * static_cast<double>(i);
    os << "<rect x=\"" << W - R + 12 << "\" y=\"" << ly - 9 << "\" width=\"10\" height=\"10\" fill=\""
       << colour << "\"/><text x=\"" << W - R + 28 << "\" y=\"" << ly << "\">" << s.name
       << "</text>\n";
  }
  os << "</svg>\n";
}

/// Reads `csv_path`, writes `svg_path`; returns the number of series drawn.
inline std::size_t emit_plot(const std::string &csv_path, const std::string &svg_path) {
  std::ifstream in(csv_path);
  if (!in)
    fail(ErrorKind::InvalidInput, "cannot read " + csv_path);
  const PlotSpec p = plot_spec_from_csv(read_csv(in));
  std::ofstream out(svg_path);
  if (!out)
    fail(ErrorKind::InvalidInput, "cannot write " + svg_path);
  write_svg(out, p);
  return p.series.size();
}

} // namespace h4qpe
