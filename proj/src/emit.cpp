#include "growup/emit.hpp"

#include "growup/error.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace growup {

std::string format_number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

std::string comment_block(const std::string& text) {
  std::ostringstream os;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) os << "# " << line << "\n";
  return os.str();
}

std::string csv_text(const std::string& header, const std::vector<std::string>& names,
                     const std::vector<std::vector<double>>& columns) {
  if (names.size() != columns.size()) fail(ErrorKind::Domain, "csv_shape", "column names and data disagree");
  const std::size_t rows = columns.empty() ? 0 : columns.front().size();
  for (const auto& c : columns)
    if (c.size() != rows) fail(ErrorKind::Domain, "csv_shape", "CSV columns differ in length");
  std::ostringstream os;
  os << comment_block(header);
  for (std::size_t j = 0; j < names.size(); ++j) os << (j ? "," : "") << names[j];
  os << "\n";
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < columns.size(); ++j) os << (j ? "," : "") << format_number(columns[j][i]);
    os << "\n";
  }
  return os.str();
}

void write_text(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::Io, "write_failed", "cannot write " + path);
  out << content;
  if (!out) fail(ErrorKind::Io, "write_failed", "error while writing " + path);
}

void ensure_directory(const std::string& path) {
  std::error_code ec;
  std::filesystem::create_directories(path, ec);
  if (ec) fail(ErrorKind::Io, "mkdir_failed", "cannot create directory " + path + ": " + ec.message());
}

namespace {

constexpr double kLeft = 80.0, kRight = 30.0, kTop = 60.0, kBottom = 60.0;

std::string px(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
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

std::vector<double> nice_ticks(double lo, double hi) {
  std::vector<double> t;
  if (!(hi > lo)) return t;
  const double raw = (hi - lo) / 6.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double f : {1.0, 2.0, 2.5, 5.0, 10.0}) {
    step = f * mag;
    if (raw <= step) break;
  }
  for (double v = std::ceil(lo / step) * step; v <= hi + 1e-9 * step; v += step)
    t.push_back(std::abs(v) < 1e-12 * step ? 0.0 : v);
  return t;
}

struct Frame2 {
  double x0, x1, y0, y1, w, h;
  bool logy;
  double X(double x) const { return kLeft + (x - x0) / (x1 - x0) * w; }
  double Yv(double y) const {
    const double a = logy ? std::log10(y) : y;
    const double lo = logy ? std::log10(y0) : y0, hi = logy ? std::log10(y1) : y1;
    return kTop + (1.0 - (a - lo) / (hi - lo)) * h;
  }
};

// Liang–Barsky clip of the segment (x0,y0)-(x1,y1) to the plot rectangle.
bool clip(double& ax, double& ay, double& bx, double& by, double xmin, double xmax, double ymin, double ymax) {
  double t0 = 0.0, t1 = 1.0;
  const double dx = bx - ax, dy = by - ay;
  const double p[4] = {-dx, dx, -dy, dy};
  const double q[4] = {ax - xmin, xmax - ax, ay - ymin, ymax - ay};
  for (int i = 0; i < 4; ++i) {
    if (p[i] == 0.0) {
      if (q[i] < 0.0) return false;
      continue;
    }
    const double r = q[i] / p[i];
    if (p[i] < 0.0) {
      if (r > t1) return false;
      if (r > t0) t0 = r;
    } else {
      if (r < t0) return false;
      if (r < t1) t1 = r;
    }
  }
  const double nax = ax + t0 * dx, nay = ay + t0 * dy;
  bx = ax + t1 * dx;
  by = ay + t1 * dy;
  ax = nax;
  ay = nay;
  return true;
}

}  // namespace

std::string render_svg(const PlotSpec& spec) {
  const double w = spec.width - kLeft - kRight, h = spec.height - kTop - kBottom;
  const Frame2 fr{spec.xmin, spec.xmax, spec.ymin, spec.ymax, w, h, spec.logy};
  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
     << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << spec.width << "\" height=\""
     << spec.height << "\" viewBox=\"0 0 " << spec.width << " " << spec.height << "\">\n"
     << "<rect x=\"0\" y=\"0\" width=\"" << spec.width << "\" height=\"" << spec.height
     << "\" fill=\"white\"/>\n"
     << "<rect x=\"" << px(kLeft) << "\" y=\"" << px(kTop) << "\" width=\"" << px(w) << "\" height=\"" << px(h)
     << "\" fill=\"none\" stroke=\"black\" stroke-width=\"1\"/>\n";
  os << "<text x=\"" << px(spec.width / 2.0) << "\" y=\"24\" font-family=\"sans-serif\" font-size=\"16\" "
     << "text-anchor=\"middle\">" << escape(spec.title) << "</text>\n";
  for (std::size_t i = 0; i < spec.notes.size(); ++i)
    os << "<text x=\"" << px(kLeft + 6) << "\" y=\"" << px(kTop + 16 + 14 * i)
       << "\" font-family=\"sans-serif\" font-size=\"11\" fill=\"#333333\">" << escape(spec.notes[i])
       << "</text>\n";

  // Axes, ticks and labels.
  for (double t : nice_ticks(spec.xmin, spec.xmax)) {
    const double X = fr.X(t);
    os << "<line x1=\"" << px(X) << "\" y1=\"" << px(kTop + h) << "\" x2=\"" << px(X) << "\" y2=\""
       << px(kTop + h + 5) << "\" stroke=\"black\"/>\n"
       << "<text x=\"" << px(X) << "\" y=\"" << px(kTop + h + 18)
       << "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\">" << format_number(t)
       << "</text>\n";
  }
  std::vector<double> yt;
  if (spec.logy) {
    for (double e = std::ceil(std::log10(spec.ymin)); e <= std::floor(std::log10(spec.ymax)); e += 1.0)
      yt.push_back(std::pow(10.0, e));
  } else {
    yt = nice_ticks(spec.ymin, spec.ymax);
  }
  for (double t : yt) {
    const double Y = fr.Yv(t);
    os << "<line x1=\"" << px(kLeft - 5) << "\" y1=\"" << px(Y) << "\" x2=\"" << px(kLeft) << "\" y2=\"" << px(Y)
       << "\" stroke=\"black\"/>\n"
       << "<text x=\"" << px(kLeft - 8) << "\" y=\"" << px(Y + 4)
       << "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">" << format_number(t)
       << "</text>\n";
  }
  if (spec.xmin < 0.0 && spec.xmax > 0.0)
    os << "<line x1=\"" << px(fr.X(0.0)) << "\" y1=\"" << px(kTop) << "\" x2=\"" << px(fr.X(0.0)) << "\" y2=\""
       << px(kTop + h) << "\" stroke=\"#999999\" stroke-width=\"0.6\"/>\n";
  if (!spec.logy && spec.ymin < 0.0 && spec.ymax > 0.0)
    os << "<line x1=\"" << px(kLeft) << "\" y1=\"" << px(fr.Yv(0.0)) << "\" x2=\"" << px(kLeft + w) << "\" y2=\""
       << px(fr.Yv(0.0)) << "\" stroke=\"#999999\" stroke-width=\"0.6\"/>\n";
  os << "<text x=\"" << px(kLeft + w / 2.0) << "\" y=\"" << px(spec.height - 16.0)
     << "\" font-family=\"sans-serif\" font-size=\"13\" text-anchor=\"middle\">" << escape(spec.xlabel)
     << "</text>\n"
     << "<text x=\"18\" y=\"" << px(kTop + h / 2.0) << "\" font-family=\"sans-serif\" font-size=\"13\" "
     << "text-anchor=\"middle\" transform=\"rotate(-90 18 " << px(kTop + h / 2.0) << ")\">" << escape(spec.ylabel)
     << "</text>\n";

  // Series as clipped polylines in pixel space.
  for (const auto& s : spec.series) {
    std::vector<std::vector<std::pair<double, double>>> pieces;
    std::vector<std::pair<double, double>> cur;
    auto flush = [&]() {
      if (cur.size() >= 2) pieces.push_back(cur);
      cur.clear();
    };
    for (std::size_t i = 0; i + 1 < s.x.size() && i + 1 < s.y.size(); ++i) {
      const bool ok = std::isfinite(s.x[i]) && std::isfinite(s.y[i]) && std::isfinite(s.x[i + 1]) &&
                      std::isfinite(s.y[i + 1]) && (!spec.logy || (s.y[i] > 0.0 && s.y[i + 1] > 0.0));
      if (!ok) {
        flush();
        continue;
      }
      double ax = fr.X(s.x[i]), ay = fr.Yv(s.y[i]), bx = fr.X(s.x[i + 1]), by = fr.Yv(s.y[i + 1]);
      const bool a_in = ax >= kLeft && ax <= kLeft + w && ay >= kTop && ay <= kTop + h;
      if (!clip(ax, ay, bx, by, kLeft, kLeft + w, kTop, kTop + h)) {
        flush();
        continue;
      }
      if (!a_in) flush();
      if (cur.empty()) cur.emplace_back(ax, ay);
      cur.emplace_back(bx, by);
      const bool b_in = std::abs(bx - fr.X(s.x[i + 1])) < 1e-9 && std::abs(by - fr.Yv(s.y[i + 1])) < 1e-9;
      if (!b_in) flush();
    }
    flush();
    for (const auto& piece : pieces) {
      os << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"" << px(s.width) << "\"";
      if (s.dashed) os << " stroke-dasharray=\"6,4\"";
      os << " points=\"";
      for (std::size_t k = 0; k < piece.size(); ++k) os << (k ? " " : "") << px(piece[k].first) << "," << px(piece[k].second);
      os << "\"/>\n";
    }
  }
  for (const auto& m : spec.markers) {
    if (!(m.x >= spec.xmin && m.x <= spec.xmax && m.y >= spec.ymin && m.y <= spec.ymax)) continue;
    const double X = fr.X(m.x), Y = fr.Yv(m.y);
    os << "<circle cx=\"" << px(X) << "\" cy=\"" << px(Y) << "\" r=\"4\" fill=\"" << m.color << "\"/>\n"
       << "<text x=\"" << px(X + 6) << "\" y=\"" << px(Y - 6) << "\" font-family=\"sans-serif\" font-size=\"12\" fill=\""
       << m.color << "\">" << escape(m.label) << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace growup
