#pragma once

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "colmod/harness/csv.hpp"

namespace colmod::harness {

struct Series {
  std::string name;
  std::vector<std::pair<double, double>> points;
};

struct LinePlot {
  std::string title;
  std::string x_label = "n";
  std::string y_label;
  bool log_y = false;
  std::vector<Series> series;
};

namespace detail {

inline std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      default: out += c;
    }
  }
  return out;
}

inline std::string tick(double v) {
  std::ostringstream os;
  os.precision(3);
  os << v;
  return os.str();
}

}  // namespace detail

inline std::string render_svg(const LinePlot& plot) {
  constexpr double kW = 640, kH = 420, kLeft = 70, kRight = 170, kTop = 40, kBottom = 50;
  static const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};
  auto ty = [&](double y) { return plot.log_y ? std::log10(y) : y; };
  double x0 = 1e300, x1 = -1e300, y0 = 1e300, y1 = -1e300;
  for (const auto& s : plot.series)
    for (auto [x, y] : s.points) {
      if (plot.log_y && !(y > 0.0)) continue;
      x0 = std::min(x0, x);
      x1 = std::max(x1, x);
      y0 = std::min(y0, ty(y));
      y1 = std::max(y1, ty(y));
    }
  if (x0 > x1) x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  if (x1 == x0) x1 = x0 + 1;
  if (y1 == y0) y0 -= 0.5, y1 += 0.5;
  const double pw = kW - kLeft - kRight;
  const double ph = kH - kTop - kBottom;
  auto px = [&](double x) { return kLeft + (x - x0) / (x1 - x0) * pw; };
  auto py = [&](double y) { return kTop + (1.0 - (ty(y) - y0) / (y1 - y0)) * ph; };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW << "\" height=\"" << kH
     << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << kLeft << "\" y=\"24\" font-size=\"14\">" << detail::escape(plot.title) << "</text>\n";
  os << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << pw << "\" height=\"" << ph
     << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double fx = x0 + (x1 - x0) * i / 4.0;
    const double fy = y0 + (y1 - y0) * i / 4.0;
    const double sx = kLeft + pw * i / 4.0;
    const double sy = kTop + ph * (1.0 - i / 4.0);
    os << "<text x=\"" << sx << "\" y=\"" << kTop + ph + 16 << "\" text-anchor=\"middle\">" << detail::tick(fx)
       << "</text>\n";
    os << "<text x=\"" << kLeft - 6 << "\" y=\"" << sy + 4 << "\" text-anchor=\"end\">"
       << (plot.log_y ? "1e" + detail::tick(fy) : detail::tick(fy)) << "</text>\n";
  }
  os << "<text x=\"" << kLeft + pw / 2 << "\" y=\"" << kH - 12 << "\" text-anchor=\"middle\">"
     << detail::escape(plot.x_label) << "</text>\n";
  os << "<text transform=\"translate(16," << kTop + ph / 2 << ") rotate(-90)\" text-anchor=\"middle\">"
     << detail::escape(plot.y_label) << "</text>\n";
  for (std::size_t k = 0; k < plot.series.size(); ++k) {
    const auto& s = plot.series[k];
    const char* color = kColors[k % std::size(kColors)];
    os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    for (auto [x, y] : s.points) {
      if (plot.log_y && !(y > 0.0)) continue;
      os << px(x) << ',' << py(y) << ' ';
    }
    os << "\"/>\n";
    const double ly = kTop + 14.0 + 18.0 * static_cast<double>(k);
    os << "<line x1=\"" << kW - kRight + 10 << "\" y1=\"" << ly - 4 << "\" x2=\"" << kW - kRight + 30 << "\" y2=\""
       << ly - 4 << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
    os << "<text x=\"" << kW - kRight + 36 << "\" y=\"" << ly << "\">" << detail::escape(s.name) << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

/// Entropy bounds and the mutual information of one run, read off its CSV rows.
inline std::vector<std::pair<std::string, LinePlot>> run_plots(const std::vector<CsvRow>& rows) {
  if (rows.empty()) return {};
  const std::string id = "run " + std::to_string(rows.front().run_id);
  LinePlot bounds{id + ": entropy production bounds", "n", "nats", false, {}};
  LinePlot gaps{id + ": bound gaps", "n", "nats", false, {}};
  LinePlot info{id + ": mutual information", "n", "nats", true, {}};
  Series ds{"dS_A", {}}, neg_b{"-dS_B", {}}, loc{"-dS_B_loc", {}}, q{"beta dQ_A", {}};
  Series clausius{"Clausius gap", {}}, extrinsic{"extrinsic gap", {}}, mi{"I(A:B)", {}};
  for (const auto& r : rows) {
    const double n = static_cast<double>(r.step);
    ds.points.emplace_back(n, r.ledger.dS_A);
    loc.points.emplace_back(n, r.ledger.neg_dS_B_loc);
    q.points.emplace_back(n, r.ledger.beta_dQ_A);
    clausius.points.emplace_back(n, r.ledger.clausius_gap);
    if (!r.analytic && r.ledger.neg_dS_B) neg_b.points.emplace_back(n, *r.ledger.neg_dS_B);
    if (!r.analytic && r.ledger.extrinsic_gap) extrinsic.points.emplace_back(n, *r.ledger.extrinsic_gap);
    if (!r.analytic && r.ledger.mutual_info) mi.points.emplace_back(n, *r.ledger.mutual_info);
  }
  bounds.series = {ds, neg_b, loc, q};
  gaps.series = {clausius, extrinsic};
  info.series = {mi};
  return {{"bounds", bounds}, {"gaps", gaps}, {"mutual_info", info}};
}

}  // namespace colmod::harness
