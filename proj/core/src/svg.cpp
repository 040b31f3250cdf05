#include "form/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace form {
namespace {

constexpr const char* kBlue = "#3b6fd8";
constexpr const char* kPink = "#e75a9a";

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char ch : s) {
    switch (ch) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += ch;
    }
  }
  return out;
}

struct Bounds {
  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0;
  double y0 = x0, y1 = -x0;

  void add(const VecD& p) {
    x0 = std::min(x0, p[0]);
    x1 = std::max(x1, p[0]);
    y0 = std::min(y0, p[1]);
    y1 = std::max(y1, p[1]);
  }
};

}  // namespace

std::string render_svg(const ScatterFigure& fig, int width, int height) {
  Bounds b;
  for (const auto& p : fig.sources) b.add(p);
  for (const auto& p : fig.targets) b.add(p);
  for (const auto& tr : fig.trajectories) {
    for (const auto& p : tr) b.add(p);
  }
  if (!std::isfinite(b.x0)) b = Bounds{-1.0, 1.0, -1.0, 1.0};
  // Square data window so circles stay circles.
  const double span = std::max({b.x1 - b.x0, b.y1 - b.y0, 1e-9}) * 1.1;
  const double cx = 0.5 * (b.x0 + b.x1);
  const double cy = 0.5 * (b.y0 + b.y1);
  const double margin = 48.0;
  const double plot = std::min(width, height) - 2.0 * margin;
  auto sx = [&](double x) { return margin + (x - (cx - span / 2)) / span * plot; };
  auto sy = [&](double y) { return margin + ((cy + span / 2) - y) / span * plot; };

  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
      << height << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << width / 2 << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\""
      << " font-size=\"16\">" << escape(fig.title) << "</text>\n";

  // axes through the origin when visible, else along the plot edges
  const double lo = margin, hi = margin + plot;
  const double ax_y = std::clamp(sy(0.0), lo, hi);
  const double ax_x = std::clamp(sx(0.0), lo, hi);
  out << "<g stroke=\"#999\" stroke-width=\"1\">\n";
  out << "<line x1=\"" << num(lo) << "\" y1=\"" << num(ax_y) << "\" x2=\"" << num(hi)
      << "\" y2=\"" << num(ax_y) << "\"/>\n";
  out << "<line x1=\"" << num(ax_x) << "\" y1=\"" << num(lo) << "\" x2=\"" << num(ax_x)
      << "\" y2=\"" << num(hi) << "\"/>\n";
  out << "</g>\n";
  out << "<text x=\"" << num(lo) << "\" y=\"" << num(hi + 20) << "\" font-family=\"sans-serif\""
      << " font-size=\"11\">x in [" << num(cx - span / 2) << ", " << num(cx + span / 2)
      << "] du</text>\n";

  out << "<g fill=\"none\" stroke=\"#bbb\" stroke-width=\"0.6\">\n";
  for (const auto& tr : fig.trajectories) {
    out << "<polyline class=\"trajectory\" points=\"";
    for (std::size_t i = 0; i < tr.size(); ++i) {
      if (i > 0) out << ' ';
      out << num(sx(tr[i][0])) << ',' << num(sy(tr[i][1]));
    }
    out << "\"/>\n";
  }
  out << "</g>\n";

  auto markers = [&](const std::vector<VecD>& pts, const char* cls, const char* color) {
    out << "<g fill=\"" << color << "\" fill-opacity=\"0.8\">\n";
    for (const auto& p : pts) {
      out << "<circle class=\"" << cls << "\" cx=\"" << num(sx(p[0])) << "\" cy=\""
          << num(sy(p[1])) << "\" r=\"2.5\"/>\n";
    }
    out << "</g>\n";
  };
  markers(fig.sources, "source", kBlue);
  markers(fig.targets, "target", kPink);

  // legend
  const double lx = width - margin - 120.0;
  out << "<g font-family=\"sans-serif\" font-size=\"12\">\n";
  out << "<rect x=\"" << num(lx) << "\" y=\"34\" width=\"10\" height=\"10\" fill=\"" << kBlue
      << "\"/><text x=\"" << num(lx + 16) << "\" y=\"43\">" << escape(fig.source_label)
      << "</text>\n";
  out << "<rect x=\"" << num(lx) << "\" y=\"52\" width=\"10\" height=\"10\" fill=\"" << kPink
      << "\"/><text x=\"" << num(lx + 16) << "\" y=\"61\">" << escape(fig.target_label)
      << "</text>\n";
  out << "</g>\n";
  out << "</svg>\n";
  return out.str();
}

}  // namespace form
