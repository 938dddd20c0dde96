#include "nlilab/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "nlilab/errors.hpp"

namespace nlilab {

namespace {

struct Series {
  std::string scheme;
  std::vector<double> x, y, lo, hi;  // lo/hi only used by the FER panel
};

const char* kColors[] = {"#000000", "#2ca02c", "#1f77b4", "#d62728",
                         "#9467bd", "#ff7f0e", "#8c564b"};

std::string fmt(double v) {
  char b[48];
  std::snprintf(b, sizeof(b), "%.6g", v);
  return b;
}

void render_panel(const std::string& path, const std::string& ylabel,
                  const std::vector<Series>& series, bool logscale) {
  if (series.empty()) throw InputError("plot: no data series");
  for (const auto& s : series)
    if (s.x.empty()) throw InputError("plot: empty series " + s.scheme);

  const double w = 640, h = 480, ml = 70, mr = 20, mt = 30, mb = 50;
  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  for (const auto& s : series) {
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      xmin = std::min(xmin, s.x[i]);
      xmax = std::max(xmax, s.x[i]);
      double v = s.y[i];
      if (logscale) {
        // zero-FER points sit at the CI upper bound
        v = v > 0.0 ? v : s.hi[i];
        if (v <= 0.0) continue;
        v = std::log10(v);
      }
      ymin = std::min(ymin, v);
      ymax = std::max(ymax, v);
    }
  }
  if (xmax <= xmin) xmax = xmin + 1.0;
  if (ymax <= ymin) ymax = ymin + 1.0;
  const double xpad = 0.04 * (xmax - xmin), ypad = 0.07 * (ymax - ymin);
  xmin -= xpad; xmax += xpad; ymin -= ypad; ymax += ypad;

  const auto X = [&](double v) { return ml + (v - xmin) / (xmax - xmin) * (w - ml - mr); };
  const auto Y = [&](double v) {
    const double t = logscale ? std::log10(std::max(v, 1e-300)) : v;
    return h - mb - (t - ymin) / (ymax - ymin) * (h - mt - mb);
  };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h
     << "\" viewBox=\"0 0 " << w << " " << h << "\">\n";
  os << "<metadata id=\"data\">\n";
  os << "scheme,power_dbm,value,ci_lo,ci_hi\n";
  for (const auto& s : series)
    for (std::size_t i = 0; i < s.x.size(); ++i)
      os << s.scheme << "," << fmt(s.x[i]) << "," << fmt(s.y[i]) << ","
         << fmt(i < s.lo.size() ? s.lo[i] : 0.0) << ","
         << fmt(i < s.hi.size() ? s.hi[i] : 0.0) << "\n";
  os << "</metadata>\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  // axes
  os << "<line x1=\"" << ml << "\" y1=\"" << h - mb << "\" x2=\"" << w - mr << "\" y2=\""
     << h - mb << "\" stroke=\"black\"/>\n";
  os << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\"" << h - mb
     << "\" stroke=\"black\"/>\n";
  for (int t = 0; t <= 6; ++t) {
    const double xv = xmin + xpad + (xmax - xmin - 2 * xpad) * t / 6.0;
    os << "<text x=\"" << X(xv) << "\" y=\"" << h - mb + 18
       << "\" font-size=\"11\" text-anchor=\"middle\">" << fmt(xv) << "</text>\n";
    const double yv = ymin + ypad + (ymax - ymin - 2 * ypad) * t / 6.0;
    os << "<text x=\"" << ml - 8 << "\" y=\"" << h - mb - (yv - ymin) / (ymax - ymin) * (h - mt - mb) + 4
       << "\" font-size=\"11\" text-anchor=\"end\">"
       << (logscale ? "1e" + fmt(yv) : fmt(yv)) << "</text>\n";
  }
  os << "<text x=\"" << (ml + w - mr) / 2 << "\" y=\"" << h - 12
     << "\" font-size=\"13\" text-anchor=\"middle\">launch power (dBm)</text>\n";
  os << "<text x=\"16\" y=\"" << (mt + h - mb) / 2
     << "\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
     << (mt + h - mb) / 2 << ")\">" << ylabel << "</text>\n";

  int ci = 0;
  double ly = mt + 6;
  for (const auto& s : series) {
    const char* col = kColors[ci % 7];
    std::ostringstream pts;
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      double v = s.y[i];
      if (logscale && v <= 0.0) v = s.hi[i];
      if (logscale && v <= 0.0) continue;
      pts << (pts.tellp() > 0 ? " " : "") << X(s.x[i]) << "," << Y(v);
      if (logscale && i < s.lo.size() && s.hi[i] > 0.0) {
        const double lo = s.lo[i] > 0.0 ? s.lo[i] : s.hi[i] * 1e-2;
        os << "<line x1=\"" << X(s.x[i]) << "\" y1=\"" << Y(lo) << "\" x2=\"" << X(s.x[i])
           << "\" y2=\"" << Y(s.hi[i]) << "\" stroke=\"" << col
           << "\" stroke-width=\"1\" opacity=\"0.6\"/>\n";
      }
      os << "<circle cx=\"" << X(s.x[i]) << "\" cy=\"" << Y(v) << "\" r=\"3\" fill=\"" << col
         << "\"/>\n";
    }
    os << "<polyline points=\"" << pts.str() << "\" fill=\"none\" stroke=\"" << col
       << "\" stroke-width=\"1.5\"/>\n";
    os << "<text x=\"" << w - mr - 6 << "\" y=\"" << ly << "\" font-size=\"12\" fill=\"" << col
       << "\" text-anchor=\"end\">" << s.scheme << "</text>\n";
    ly += 16;
    ++ci;
  }
  os << "</svg>\n";

  std::ofstream f(path);
  if (!f) throw MissingArtifact("cannot write plot: " + path);
  f << os.str();
}

}  // namespace

std::vector<std::string> plot_metrics(const std::vector<MetricsRecord>& rows,
                                      const std::string& out_dir) {
  if (rows.empty()) throw InputError("plot: no metric rows");
  std::filesystem::create_directories(out_dir);

  std::map<std::string, Series> by_scheme;
  std::vector<std::string> order;
  for (const auto& r : rows) {
    if (!by_scheme.count(r.scheme)) order.push_back(r.scheme);
    by_scheme[r.scheme].scheme = r.scheme;
  }
  const auto collect = [&](auto&& get, bool with_ci) {
    std::vector<Series> out;
    for (const auto& name : order) {
      Series s = by_scheme[name];
      for (const auto& r : rows) {
        if (r.scheme != name) continue;
        s.x.push_back(r.power_dbm);
        s.y.push_back(get(r));
        if (with_ci) {
          s.lo.push_back(r.fer_ci_lo);
          s.hi.push_back(r.fer_ci_hi);
        }
      }
      out.push_back(std::move(s));
    }
    return out;
  };

  std::vector<std::string> paths;
  paths.push_back(out_dir + "/snr.svg");
  render_panel(paths.back(), "effective SNR (dB)",
               collect([](const MetricsRecord& r) { return r.snr_eff_db; }, false), false);
  paths.push_back(out_dir + "/gmi.svg");
  render_panel(paths.back(), "GMI (bit/2D symbol)",
               collect([](const MetricsRecord& r) { return r.gmi_b2d; }, false), false);
  paths.push_back(out_dir + "/fer.svg");
  render_panel(paths.back(), "post-FEC FER",
               collect([](const MetricsRecord& r) { return r.fer; }, true), true);
  return paths;
}

}  // namespace nlilab
