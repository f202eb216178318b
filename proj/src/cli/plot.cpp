#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "cltlab/cli.hpp"

namespace cltlab::cli {

PlotKind plot_kind_from_string(std::string_view s) {
  if (s == "convergence_loglog") return PlotKind::convergence_loglog;
  if (s == "t_profile") return PlotKind::t_profile;
  if (s == "bound_vs_mc") return PlotKind::bound_vs_mc;
  throw UsageError("unknown plot kind '" + std::string(s) + "'");
}

std::optional<double> loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int m = 0;
  for (std::size_t i = 0; i < std::min(x.size(), y.size()); ++i) {
    if (!(x[i] > 0.0) || !(std::abs(y[i]) > 0.0) || !std::isfinite(x[i]) || !std::isfinite(y[i])) continue;
    const double lx = std::log(x[i]);
    const double ly = std::log(std::abs(y[i]));
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++m;
  }
  if (m < 2) return std::nullopt;
  const double den = m * sxx - sx * sx;
  if (den <= 0.0) return std::nullopt;
  return (m * sxy - sx * sy) / den;
}

namespace {

struct Series {
  std::string label;
  std::vector<double> x, y;
  bool line = true;
};

constexpr const char* kColors[] = {"#1b6ca8", "#d1495b", "#66a182", "#edae49", "#8e6c8a", "#2e4057", "#00798c"};

std::string fmt(double v) {
  char b[32];
  std::snprintf(b, sizeof b, "%.4g", v);
  return b;
}

std::string escape(const std::string& s) {
  std::string o;
  for (char c : s) {
    if (c == '<') o += "&lt;";
    else if (c == '>') o += "&gt;";
    else if (c == '&') o += "&amp;";
    else o += c;
  }
  return o;
}

std::string draw(const std::vector<Series>& series, bool logx, bool logy, const std::string& title,
                 const std::string& xlabel, const std::string& ylabel, const std::vector<std::string>& notes) {
  const double W = 720, H = 460, L = 80, R = 200, T = 40, B = 60;
  double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
  const auto tx = [logx](double v) { return logx ? std::log10(v) : v; };
  const auto ty = [logy](double v) { return logy ? std::log10(v) : v; };
  const auto ok = [&](double x, double y) {
    return std::isfinite(x) && std::isfinite(y) && (!logx || x > 0) && (!logy || y > 0);
  };
  for (const auto& s : series)
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!ok(s.x[i], s.y[i])) continue;
      x0 = std::min(x0, tx(s.x[i]));
      x1 = std::max(x1, tx(s.x[i]));
      y0 = std::min(y0, ty(s.y[i]));
      y1 = std::max(y1, ty(s.y[i]));
    }
  const bool empty = !(x0 <= x1);
  if (empty) {
    x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  }
  if (x1 - x0 < 1e-12) x0 -= 0.5, x1 += 0.5;
  if (y1 - y0 < 1e-300) y0 -= 0.5, y1 += 0.5;
  const double pad = 0.05 * (y1 - y0);
  y0 -= pad;
  y1 += pad;
  const auto px = [&](double v) { return L + (tx(v) - x0) / (x1 - x0) * (W - L - R); };
  const auto py = [&](double v) { return H - B - (ty(v) - y0) / (y1 - y0) * (H - T - B); };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
     << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << L << "\" y=\"24\" font-size=\"15\">" << escape(title) << "</text>\n";
  os << "<rect x=\"" << L << "\" y=\"" << T << "\" width=\"" << W - L - R << "\" height=\"" << H - T - B
     << "\" fill=\"none\" stroke=\"#444\"/>\n";
  for (int k = 0; k <= 4; ++k) {
    const double fx = x0 + (x1 - x0) * k / 4.0;
    const double fy = y0 + (y1 - y0) * k / 4.0;
    const double sx = L + (W - L - R) * k / 4.0;
    const double sy = H - B - (H - T - B) * k / 4.0;
    os << "<text x=\"" << sx << "\" y=\"" << H - B + 16 << "\" text-anchor=\"middle\">"
       << fmt(logx ? std::pow(10.0, fx) : fx) << "</text>\n";
    os << "<text x=\"" << L - 6 << "\" y=\"" << sy + 4 << "\" text-anchor=\"end\">" << fmt(logy ? std::pow(10.0, fy) : fy)
       << "</text>\n";
  }
  os << "<text x=\"" << (L + W - R) / 2 << "\" y=\"" << H - 18 << "\" text-anchor=\"middle\">" << escape(xlabel)
     << (logx ? " (log)" : "") << "</text>\n";
  os << "<text x=\"16\" y=\"" << (T + H - B) / 2 << "\" transform=\"rotate(-90 16 " << (T + H - B) / 2
     << ")\" text-anchor=\"middle\">" << escape(ylabel) << (logy ? " (log)" : "") << "</text>\n";
  if (!empty) {
    std::size_t k = 0;
    for (const auto& s : series) {
      const char* col = kColors[k % std::size(kColors)];
      std::string pts;
      for (std::size_t i = 0; i < s.x.size(); ++i) {
        if (!ok(s.x[i], s.y[i])) continue;
        pts += fmt(px(s.x[i])) + "," + fmt(py(s.y[i])) + " ";
        if (!s.line)
          os << "<circle cx=\"" << fmt(px(s.x[i])) << "\" cy=\"" << fmt(py(s.y[i])) << "\" r=\"3\" fill=\"" << col << "\"/>\n";
      }
      if (s.line && !pts.empty())
        os << "<polyline fill=\"none\" stroke=\"" << col << "\" stroke-width=\"1.5\" points=\"" << pts << "\"/>\n";
      const double ly = T + 14 + 16.0 * static_cast<double>(k);
      os << "<text x=\"" << W - R + 10 << "\" y=\"" << ly << "\" fill=\"" << col << "\">" << escape(s.label) << "</text>\n";
      ++k;
    }
  }
  double ny = H - B - 10.0 * static_cast<double>(notes.size());
  for (const auto& n : notes) {
    os << "<text x=\"" << W - R + 10 << "\" y=\"" << ny << "\">" << escape(n) << "</text>\n";
    ny += 14;
  }
  os << "</svg>\n";
  return os.str();
}

std::optional<std::size_t> column(const Table& t, const std::string& name) {
  for (std::size_t i = 0; i < t.header.size(); ++i)
    if (t.header[i] == name) return i;
  return std::nullopt;
}

std::size_t require(const Table& t, std::initializer_list<const char*> names) {
  for (const char* n : names)
    if (auto c = column(t, n)) return *c;
  std::string want;
  for (const char* n : names) want += std::string(want.empty() ? "" : " or ") + n;
  throw UsageError("malformed CSV for this plot: missing column " + want);
}

double value(const Table& t, std::size_t row, std::size_t col) {
  const auto& c = t.rows[row][col];
  if (c.is_text) throw UsageError("malformed CSV: non-numeric value '" + c.text + "' in column " + t.header[col]);
  return c.number.value_or(NAN);
}

/// Grouping column for sweeps over a second parameter.
std::optional<std::size_t> group_column(const Table& t) {
  for (const char* g : {"t", "x", "h"})
    if (auto c = column(t, g)) return c;
  return std::nullopt;
}

}  // namespace

std::string render_svg(const Table& t, PlotKind kind) {
  std::vector<Series> series;
  std::vector<std::string> notes;
  if (t.rows.empty()) return draw(series, false, false, "(no rows)", "", "", notes);
  switch (kind) {
    case PlotKind::convergence_loglog: {
      const std::size_t cn = require(t, {"n"});
      const std::size_t cy = require(t, {"residual", "mc_value"});
      const auto cg = group_column(t);
      std::map<double, Series> groups;
      for (std::size_t r = 0; r < t.rows.size(); ++r) {
        const double g = cg ? value(t, r, *cg) : 0.0;
        auto& s = groups[g];
        s.label = cg ? t.header[*cg] + "=" + fmt(g) : "|" + t.header[cy] + "|";
        s.x.push_back(value(t, r, cn));
        s.y.push_back(std::abs(value(t, r, cy)));
      }
      for (auto& [g, s] : groups) {
        if (auto slope = loglog_slope(s.x, s.y)) s.label += "  slope " + fmt(*slope);
        series.push_back(s);
      }
      return draw(series, true, true, "|" + t.header[cy] + "| vs n", "n", "|" + t.header[cy] + "|", notes);
    }
    case PlotKind::t_profile: {
      const std::size_t cx = require(t, {"t", "x"});
      const std::size_t cm = require(t, {"mc_value"});
      const auto cp = column(t, "prediction");
      const auto cn = column(t, "n");
      std::map<double, std::pair<Series, Series>> groups;
      for (std::size_t r = 0; r < t.rows.size(); ++r) {
        const double n = cn ? value(t, r, *cn) : 0.0;
        auto& [mc, pred] = groups[n];
        mc.label = "mc n=" + fmt(n);
        mc.line = false;
        pred.label = "prediction n=" + fmt(n);
        mc.x.push_back(value(t, r, cx));
        mc.y.push_back(value(t, r, cm));
        if (cp) {
          pred.x.push_back(value(t, r, cx));
          pred.y.push_back(value(t, r, *cp));
        }
      }
      for (auto& [n, p] : groups) {
        series.push_back(p.first);
        if (cp) series.push_back(p.second);
      }
      return draw(series, false, false, "profile in " + t.header[cx], t.header[cx], "value", notes);
    }
    case PlotKind::bound_vs_mc: {
      const std::size_t cn = require(t, {"n"});
      const std::size_t cm = require(t, {"mc_value"});
      const std::size_t cb = require(t, {"bound", "total", "delta_bound"});
      const auto cg = group_column(t);
      std::map<double, std::pair<Series, Series>> groups;
      for (std::size_t r = 0; r < t.rows.size(); ++r) {
        const double g = cg ? value(t, r, *cg) : 0.0;
        auto& [mc, bd] = groups[g];
        const std::string suffix = cg ? " " + t.header[*cg] + "=" + fmt(g) : "";
        mc.label = "|mc|" + suffix;
        mc.line = false;
        bd.label = t.header[cb] + suffix;
        mc.x.push_back(value(t, r, cn));
        mc.y.push_back(std::abs(value(t, r, cm)));
        bd.x.push_back(value(t, r, cn));
        bd.y.push_back(value(t, r, cb));
      }
      for (auto& [g, p] : groups) {
        series.push_back(p.first);
        series.push_back(p.second);
      }
      return draw(series, true, true, "bound vs |mc|", "n", "magnitude", notes);
    }
  }
  throw UsageError("unknown plot kind");
}

std::filesystem::path plot(const std::filesystem::path& csv, PlotKind kind) {
  const Table t = read_csv(csv);
  const std::string svg = render_svg(t, kind);
  const char* names[] = {"convergence_loglog", "t_profile", "bound_vs_mc"};
  std::filesystem::path out = csv;
  out.replace_extension(std::string(".") + names[static_cast<int>(kind)] + ".svg");
  std::ofstream f(out, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + out.string());
  f << svg;
  return out;
}

}  // namespace cltlab::cli
