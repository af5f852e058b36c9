#include "smcsweep/analysis/plotdata.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "smcsweep/campaign/campaign.hpp"
#include "smcsweep/csv.hpp"

namespace smcsweep::analysis {

void write_long_csv(std::ostream& out, const std::vector<Trajectory>& points) {
  out << "sweep_point,step,mean,lower,upper\n";
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (const auto& p : points[i]) {
      out << point_label(i) << ',' << p.step << ',' << csv::format_double(p.mean) << ','
          << csv::format_double(p.mean - p.half_width) << ',' << csv::format_double(p.mean + p.half_width) << '\n';
    }
  }
}

void write_significance_csv(std::ostream& out, const std::vector<Trajectory>& points, double alpha,
                            SignificanceTest test) {
  out << "step,point_a,point_b,significant\n";
  if (points.empty()) return;
  for (std::size_t s = 0; s < points.front().size(); ++s) {
    const auto m = significance_matrix(points, s, alpha, test);
    for (std::size_t i = 0; i < m.size(); ++i) {
      for (std::size_t j = 0; j < m.size(); ++j) {
        out << points.front()[s].step << ',' << point_label(i) << ',' << point_label(j) << ',' << (m[i][j] ? 1 : 0)
            << '\n';
      }
    }
  }
}

namespace {

std::string xml_escape(const std::string& text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

constexpr const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                                    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

}  // namespace

std::string render_svg(const std::string& title, const std::vector<Trajectory>& points) {
  constexpr double width = 640, height = 400, left = 70, right = 90, top = 40, bottom = 50;
  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin, ymin = xmin, ymax = -xmin;
  for (const auto& t : points) {
    for (const auto& p : t) {
      xmin = std::min(xmin, static_cast<double>(p.step));
      xmax = std::max(xmax, static_cast<double>(p.step));
      ymin = std::min(ymin, p.mean - p.half_width);
      ymax = std::max(ymax, p.mean + p.half_width);
    }
  }
  if (!(xmin <= xmax)) xmin = 0, xmax = 1, ymin = 0, ymax = 1;
  if (xmax == xmin) xmax = xmin + 1;
  if (ymax == ymin) ymin -= 0.5, ymax += 0.5;
  auto sx = [&](double x) { return left + (x - xmin) / (xmax - xmin) * (width - left - right); };
  auto sy = [&](double y) { return height - bottom - (y - ymin) / (ymax - ymin) * (height - top - bottom); };

  std::ostringstream svg;
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n"
      << "  <title>" << xml_escape(title) << "</title>\n"
      << "  <rect x=\"0\" y=\"0\" width=\"" << width << "\" height=\"" << height << "\" fill=\"white\"/>\n"
      << "  <text x=\"" << width / 2 << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
      << "font-size=\"14\">" << xml_escape(title) << "</text>\n";

  // axes
  svg << "  <g stroke=\"black\" stroke-width=\"1\">\n"
      << "    <line x1=\"" << left << "\" y1=\"" << height - bottom << "\" x2=\"" << width - right << "\" y2=\""
      << height - bottom << "\"/>\n"
      << "    <line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\"" << height - bottom
      << "\"/>\n  </g>\n";
  svg << "  <g font-family=\"sans-serif\" font-size=\"10\">\n";
  for (int k = 0; k <= 4; ++k) {
    const double x = xmin + (xmax - xmin) * k / 4.0;
    const double y = ymin + (ymax - ymin) * k / 4.0;
    char ylabel[32];
    std::snprintf(ylabel, sizeof ylabel, "%.4g", y);
    svg << "    <text x=\"" << num(sx(x)) << "\" y=\"" << height - bottom + 15 << "\" text-anchor=\"middle\">"
        << static_cast<long long>(x) << "</text>\n"
        << "    <text x=\"" << left - 5 << "\" y=\"" << num(sy(y) + 3) << "\" text-anchor=\"end\">" << ylabel
        << "</text>\n";
  }
  svg << "    <text x=\"" << (left + width - right) / 2 << "\" y=\"" << height - 12
      << "\" text-anchor=\"middle\">step</text>\n  </g>\n";

  for (std::size_t i = 0; i < points.size(); ++i) {
    const char* colour = kPalette[i % std::size(kPalette)];
    const auto& t = points[i];
    if (t.empty()) continue;
    svg << "  <g>\n    <polygon fill=\"" << colour << "\" fill-opacity=\"0.15\" stroke=\"none\" points=\"";
    for (const auto& p : t) svg << num(sx(p.step)) << ',' << num(sy(p.mean + p.half_width)) << ' ';
    for (auto it = t.rbegin(); it != t.rend(); ++it) {
      svg << num(sx(it->step)) << ',' << num(sy(it->mean - it->half_width)) << ' ';
    }
    svg << "\"/>\n    <polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"1.5\" points=\"";
    for (const auto& p : t) svg << num(sx(p.step)) << ',' << num(sy(p.mean)) << ' ';
    svg << "\"/>\n    <text x=\"" << width - right + 8 << "\" y=\"" << top + 14 * (i + 1)
        << "\" font-family=\"sans-serif\" font-size=\"11\" fill=\"" << colour << "\">" << point_label(i)
        << "</text>\n  </g>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

namespace {

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
  out.close();
  if (!out) throw std::runtime_error("error writing " + path.string());
}

}  // namespace

PlotFiles emit_plotdata(const std::string& experiment, const std::string& observable,
                        const std::vector<Trajectory>& points, const std::filesystem::path& dir, double alpha,
                        SignificanceTest test, bool svg) {
  std::filesystem::create_directories(dir);
  const std::string stem = campaign::file_safe(experiment) + "_" + campaign::file_safe(observable);
  PlotFiles files;
  files.long_csv = dir / (stem + ".csv");
  files.significance_csv = dir / (stem + "_significance.csv");

  std::ostringstream long_csv;
  write_long_csv(long_csv, points);
  write_file(files.long_csv, long_csv.str());

  std::ostringstream sig_csv;
  write_significance_csv(sig_csv, points, alpha, test);
  write_file(files.significance_csv, sig_csv.str());

  if (svg) {
    files.svg = dir / (stem + "_plot.svg");
    write_file(*files.svg, render_svg(experiment + " " + observable, points));
  }
  return files;
}

}  // namespace smcsweep::analysis
