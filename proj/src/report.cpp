#include "ssalab/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "ssalab/errors.hpp"

namespace ssalab {

bool ExperimentReport::all_pass() const {
  return std::all_of(verdicts.begin(), verdicts.end(), [](const Verdict& v) { return v.pass; });
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

nlohmann::json to_json(const ModelParams& p) {
  return {{"scheme", to_string(p.scheme)}, {"a", p.a},   {"T", p.T}, {"delta", p.delta},
          {"omega", p.omega},              {"phi", p.phi}, {"N", p.N}, {"L", p.L}};
}

nlohmann::json to_json(const ExperimentReport& r) {
  nlohmann::json j;
  j["experiment"] = r.id;
  j["parameters"] = r.parameters;
  j["columns"] = r.columns;
  j["rows"] = r.rows;
  auto& vs = j["verdicts"] = nlohmann::json::array();
  for (const auto& v : r.verdicts)
    vs.push_back({{"id", v.id},
                  {"description", v.description},
                  {"measured", v.measured},
                  {"relation", v.relation},
                  {"threshold", v.threshold},
                  {"pass", v.pass}});
  j["extra"] = r.extra;
  return j;
}

std::string to_csv(const std::vector<std::string>& columns, const std::vector<std::vector<double>>& rows) {
  std::string out;
  for (std::size_t c = 0; c < columns.size(); ++c) out += (c ? "," : "") + columns[c];
  out += '\n';
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out += ',';
      out += format_double(row[c]);
    }
    out += '\n';
  }
  return out;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path.string() + " for writing");
  f << text;
  if (!f) throw std::runtime_error("write failed: " + path.string());
}

namespace {

std::string escape_xml(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string num(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, 2);
  return std::string(buf, res.ptr);
}

std::string tick_label(double v) {
  std::ostringstream os;
  os.precision(4);
  os << v;
  return os.str();
}

struct Axis {
  double lo, hi;
  bool log;
  double map(double v, double p0, double p1) const {
    const double a = log ? std::log10(lo) : lo;
    const double b = log ? std::log10(hi) : hi;
    const double x = log ? std::log10(v) : v;
    return p0 + (x - a) / (b - a) * (p1 - p0);
  }
};

Axis make_axis(const std::vector<PlotSeries>& series, bool use_x, bool log) {
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (const auto& s : series)
    for (double v : use_x ? s.x : s.y)
      if (std::isfinite(v) && (!log || v > 0.0)) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
  if (!std::isfinite(lo)) lo = 0.0, hi = 1.0;
  if (hi == lo) {
    const double pad = lo == 0.0 ? 1.0 : std::abs(lo) * 0.1;
    lo -= pad;
    hi += pad;
  }
  if (!log) {
    const double pad = 0.04 * (hi - lo);
    lo -= pad;
    hi += pad;
  }
  return {lo, hi, log};
}

}  // namespace

std::string svg_plot(const std::string& title, const std::string& x_label, const std::string& y_label,
                     const std::vector<PlotSeries>& series, bool log_x, bool log_y) {
  constexpr double W = 760, H = 480, left = 80, right = 180, top = 40, bottom = 60;
  const double x0 = left, x1 = W - right, y0 = H - bottom, y1 = top;
  const Axis ax = make_axis(series, true, log_x), ay = make_axis(series, false, log_y);

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\" viewBox=\"0 0 " << W
     << ' ' << H << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << (x0 + x1) / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">" << escape_xml(title)
     << "</text>\n";
  os << "<rect x=\"" << x0 << "\" y=\"" << y1 << "\" width=\"" << x1 - x0 << "\" height=\"" << y0 - y1
     << "\" fill=\"none\" stroke=\"black\"/>\n";

  for (int i = 0; i <= 5; ++i) {
    const double f = i / 5.0;
    const double xv = ax.log ? std::pow(10.0, std::log10(ax.lo) + f * (std::log10(ax.hi) - std::log10(ax.lo)))
                             : ax.lo + f * (ax.hi - ax.lo);
    const double yv = ay.log ? std::pow(10.0, std::log10(ay.lo) + f * (std::log10(ay.hi) - std::log10(ay.lo)))
                             : ay.lo + f * (ay.hi - ay.lo);
    const double px = ax.map(xv, x0, x1), py = ay.map(yv, y0, y1);
    os << "<line x1=\"" << num(px) << "\" y1=\"" << y0 << "\" x2=\"" << num(px) << "\" y2=\"" << y0 + 5
       << "\" stroke=\"black\"/>";
    os << "<text x=\"" << num(px) << "\" y=\"" << y0 + 18 << "\" text-anchor=\"middle\">" << tick_label(xv)
       << "</text>\n";
    os << "<line x1=\"" << x0 - 5 << "\" y1=\"" << num(py) << "\" x2=\"" << x0 << "\" y2=\"" << num(py)
       << "\" stroke=\"black\"/>";
    os << "<text x=\"" << x0 - 8 << "\" y=\"" << num(py + 4) << "\" text-anchor=\"end\">" << tick_label(yv)
       << "</text>\n";
  }
  os << "<text x=\"" << (x0 + x1) / 2 << "\" y=\"" << H - 15 << "\" text-anchor=\"middle\">" << escape_xml(x_label)
     << "</text>\n";
  os << "<text transform=\"translate(18," << (y0 + y1) / 2 << ") rotate(-90)\" text-anchor=\"middle\">"
     << escape_xml(y_label) << "</text>\n";

  int legend_row = 0;
  for (const auto& s : series) {
    const std::size_t n = std::min(s.x.size(), s.y.size());
    if (s.style == PlotSeries::Style::Points) {
      os << "<g fill=\"" << s.color << "\">";
      for (std::size_t i = 0; i < n; ++i) {
        if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
        os << "<circle cx=\"" << num(ax.map(s.x[i], x0, x1)) << "\" cy=\"" << num(ay.map(s.y[i], y0, y1))
           << "\" r=\"2.2\"/>";
      }
      os << "</g>\n";
    } else {
      os << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.5\" points=\"";
      for (std::size_t i = 0; i < n; ++i) {
        const double px = ax.map(s.x[i], x0, x1), py = ay.map(s.y[i], y0, y1);
        if (s.style == PlotSeries::Style::Step && i + 1 < n)
          os << num(px) << ',' << num(py) << ' ' << num(ax.map(s.x[i + 1], x0, x1)) << ',' << num(py) << ' ';
        else
          os << num(px) << ',' << num(py) << ' ';
      }
      os << "\"/>\n";
    }
    if (!s.label.empty()) {
      const double ly = y1 + 10 + 18 * legend_row++;
      os << "<rect x=\"" << x1 + 12 << "\" y=\"" << ly - 8 << "\" width=\"12\" height=\"10\" fill=\"" << s.color
         << "\"/><text x=\"" << x1 + 30 << "\" y=\"" << ly + 1 << "\">" << escape_xml(s.label) << "</text>\n";
    }
  }
  os << "</svg>\n";
  return os.str();
}

void write_report(const std::filesystem::path& dir, const ExperimentReport& r, const std::string& svg) {
  write_text(dir / (r.id + ".csv"), to_csv(r.columns, r.rows));
  write_text(dir / (r.id + ".json"), to_json(r).dump(2) + "\n");
  if (!svg.empty()) write_text(dir / (r.id + ".svg"), svg);
}

}  // namespace ssalab
