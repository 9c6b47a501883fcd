#include "svg.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>

namespace arpsim::cli {

namespace {

constexpr std::array<const char*, 256> kViridis = {
    "#440154", "#440256", "#450457", "#450559", "#46075a", "#46085c", "#460a5d", "#460b5e",
    "#470d60", "#470e61", "#471063", "#471164", "#471365", "#481467", "#481668", "#481769",
    "#48186a", "#481a6c", "#481b6d", "#481c6e", "#481d6f", "#481f70", "#482071", "#482173",
    "#482374", "#482475", "#482576", "#482677", "#482878", "#482979", "#472a7a", "#472c7a",
    "#472d7b", "#472e7c", "#472f7d", "#46307e", "#46327e", "#46337f", "#463480", "#453581",
    "#453781", "#453882", "#443983", "#443a83", "#443b84", "#433d84", "#433e85", "#423f85",
    "#424086", "#424186", "#414287", "#414487", "#404588", "#404688", "#3f4788", "#3f4889",
    "#3e4989", "#3e4a89", "#3e4c8a", "#3d4d8a", "#3d4e8a", "#3c4f8a", "#3c508b", "#3b518b",
    "#3b528b", "#3a538b", "#3a548c", "#39558c", "#39568c", "#38588c", "#38598c", "#375a8c",
    "#375b8d", "#365c8d", "#365d8d", "#355e8d", "#355f8d", "#34608d", "#34618d", "#33628d",
    "#33638d", "#32648e", "#32658e", "#31668e", "#31678e", "#31688e", "#30698e", "#306a8e",
    "#2f6b8e", "#2f6c8e", "#2e6d8e", "#2e6e8e", "#2e6f8e", "#2d708e", "#2d718e", "#2c718e",
    "#2c728e", "#2c738e", "#2b748e", "#2b758e", "#2a768e", "#2a778e", "#2a788e", "#29798e",
    "#297a8e", "#297b8e", "#287c8e", "#287d8e", "#277e8e", "#277f8e", "#27808e", "#26818e",
    "#26828e", "#26828e", "#25838e", "#25848e", "#25858e", "#24868e", "#24878e", "#23888e",
    "#23898e", "#238a8d", "#228b8d", "#228c8d", "#228d8d", "#218e8d", "#218f8d", "#21908d",
    "#21918c", "#20928c", "#20928c", "#20938c", "#1f948c", "#1f958b", "#1f968b", "#1f978b",
    "#1f988b", "#1f998a", "#1f9a8a", "#1e9b8a", "#1e9c89", "#1e9d89", "#1f9e89", "#1f9f88",
    "#1fa088", "#1fa188", "#1fa187", "#1fa287", "#20a386", "#20a486", "#21a585", "#21a685",
    "#22a785", "#22a884", "#23a983", "#24aa83", "#25ab82", "#25ac82", "#26ad81", "#27ad81",
    "#28ae80", "#29af7f", "#2ab07f", "#2cb17e", "#2db27d", "#2eb37c", "#2fb47c", "#31b57b",
    "#32b67a", "#34b679", "#35b779", "#37b878", "#38b977", "#3aba76", "#3bbb75", "#3dbc74",
    "#3fbc73", "#40bd72", "#42be71", "#44bf70", "#46c06f", "#48c16e", "#4ac16d", "#4cc26c",
    "#4ec36b", "#50c46a", "#52c569", "#54c568", "#56c667", "#58c765", "#5ac864", "#5cc863",
    "#5ec962", "#60ca60", "#63cb5f", "#65cb5e", "#67cc5c", "#69cd5b", "#6ccd5a", "#6ece58",
    "#70cf57", "#73d056", "#75d054", "#77d153", "#7ad151", "#7cd250", "#7fd34e", "#81d34d",
    "#84d44b", "#86d549", "#89d548", "#8bd646", "#8ed645", "#90d743", "#93d741", "#95d840",
    "#98d83e", "#9bd93c", "#9dd93b", "#a0da39", "#a2da37", "#a5db36", "#a8db34", "#aadc32",
    "#addc30", "#b0dd2f", "#b2dd2d", "#b5de2b", "#b8de29", "#bade28", "#bddf26", "#c0df25",
    "#c2df23", "#c5e021", "#c8e020", "#cae11f", "#cde11d", "#d0e11c", "#d2e21b", "#d5e21a",
    "#d8e219", "#dae319", "#dde318", "#dfe318", "#e2e418", "#e5e419", "#e7e419", "#eae51a",
    "#ece51b", "#efe51c", "#f1e51d", "#f4e61e", "#f6e620", "#f8e621", "#fbe723", "#fde725",
};

constexpr double kWidth = 640, kHeight = 440;
constexpr double kLeft = 70, kRight = 20, kTop = 40, kBottom = 55;

std::string esc(const std::string& s) {
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

std::string num(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

struct Range {
  double lo, hi;
  bool log;

  double frac(double v) const {
    if (log) return (std::log10(v) - std::log10(lo)) / (std::log10(hi) - std::log10(lo));
    return (v - lo) / (hi - lo);
  }
};

Range make_range(std::optional<double> lo, std::optional<double> hi, const std::vector<const std::vector<double>*>& data,
                 bool log, bool pad = true) {
  double a = std::numeric_limits<double>::infinity(), b = -a;
  for (const auto* d : data) {
    for (double v : *d) {
      if (!std::isfinite(v) || (log && v <= 0.0)) continue;
      a = std::min(a, v);
      b = std::max(b, v);
    }
  }
  if (!std::isfinite(a)) a = log ? 0.1 : 0.0, b = 1.0;
  // data-driven ends get a small margin so edge points stay visible
  if (pad && a < b) {
    if (log) {
      const double f = std::pow(b / a, 0.04);
      a /= f;
      b *= f;
    } else {
      const double pad = 0.04 * (b - a);
      if (!(a >= 0.0 && a - pad < 0.0)) a -= pad;
      b += pad;
    }
  }
  if (lo) a = *lo;
  if (hi) b = *hi;
  if (a == b) {
    const double pad = a == 0.0 ? 1.0 : 0.05 * std::abs(a);
    a -= log ? 0.5 * a : pad;
    b += log ? b : pad;
  }
  return {a, b, log};
}

std::vector<double> ticks(const Range& r) {
  std::vector<double> t;
  if (r.log) {
    for (double d = std::pow(10.0, std::floor(std::log10(r.lo))); d <= r.hi * 1.0001; d *= 10.0) {
      if (d >= r.lo * 0.9999) t.push_back(d);
    }
    if (t.size() < 2) t = {r.lo, r.hi};
    return t;
  }
  const double span = r.hi - r.lo;
  const double raw = span / 5.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double m : {1.0, 2.0, 5.0, 10.0}) {
    if (m * mag >= raw) {
      step = m * mag;
      break;
    }
  }
  for (double v = std::ceil(r.lo / step) * step; v <= r.hi + 1e-9 * span; v += step) {
    t.push_back(std::abs(v) < 1e-12 * span ? 0.0 : v);
  }
  return t;
}

class Frame {
 public:
  Frame(double ox, double oy, double w, double h, Range x, Range y) : ox_(ox), oy_(oy), w_(w), h_(h), x_(x), y_(y) {}

  double px(double v) const { return ox_ + kLeft + x_.frac(v) * pw(); }
  double py(double v) const { return oy_ + kTop + (1.0 - y_.frac(v)) * ph(); }
  double pw() const { return w_ - kLeft - kRight; }
  double ph() const { return h_ - kTop - kBottom; }
  const Range& x() const { return x_; }
  const Range& y() const { return y_; }

  void axes(std::ostream& os, const Axes& a, const std::string& clip_id) const {
    const double x0 = ox_ + kLeft, y0 = oy_ + kTop;
    os << "<defs><clipPath id=\"" << clip_id << "\"><rect x=\"" << num(x0) << "\" y=\"" << num(y0)
       << "\" width=\"" << num(pw()) << "\" height=\"" << num(ph()) << "\"/></clipPath></defs>\n";
    os << "<rect x=\"" << num(x0) << "\" y=\"" << num(y0) << "\" width=\"" << num(pw()) << "\" height=\""
       << num(ph()) << "\" fill=\"none\" stroke=\"#000\"/>\n";
    for (double t : ticks(x_)) {
      const double p = px(t);
      os << "<line x1=\"" << num(p) << "\" y1=\"" << num(y0 + ph()) << "\" x2=\"" << num(p) << "\" y2=\""
         << num(y0 + ph() + 5) << "\" stroke=\"#000\"/>";
      os << "<text x=\"" << num(p) << "\" y=\"" << num(y0 + ph() + 18) << "\" text-anchor=\"middle\">" << num(t)
         << "</text>\n";
    }
    for (double t : ticks(y_)) {
      const double p = py(t);
      os << "<line x1=\"" << num(x0 - 5) << "\" y1=\"" << num(p) << "\" x2=\"" << num(x0) << "\" y2=\"" << num(p)
         << "\" stroke=\"#000\"/>";
      os << "<text x=\"" << num(x0 - 8) << "\" y=\"" << num(p + 4) << "\" text-anchor=\"end\">" << num(t)
         << "</text>\n";
    }
    os << "<text x=\"" << num(ox_ + w_ / 2) << "\" y=\"" << num(oy_ + 22)
       << "\" text-anchor=\"middle\" font-size=\"15\">" << esc(a.title) << "</text>\n";
    os << "<text x=\"" << num(x0 + pw() / 2) << "\" y=\"" << num(oy_ + h_ - 12) << "\" text-anchor=\"middle\">"
       << esc(a.x_label) << "</text>\n";
    os << "<text transform=\"translate(" << num(ox_ + 16) << "," << num(y0 + ph() / 2)
       << ") rotate(-90)\" text-anchor=\"middle\">" << esc(a.y_label) << "</text>\n";
  }

  void series(std::ostream& os, const Series& s, const std::string& clip_id) const {
    auto usable = [&](std::size_t i) {
      return std::isfinite(s.x[i]) && std::isfinite(s.y[i]) && !(x_.log && s.x[i] <= 0.0) &&
             !(y_.log && s.y[i] <= 0.0);
    };
    const std::size_t n = std::min(s.x.size(), s.y.size());
    os << "<g clip-path=\"url(#" << clip_id << ")\">\n";
    if (s.line && n > 1) {
      os << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.5\" points=\"";
      for (std::size_t i = 0; i < n; ++i) {
        if (usable(i)) os << num(px(s.x[i])) << ',' << num(py(s.y[i])) << ' ';
      }
      os << "\"/>\n";
    }
    if (s.markers) {
      for (std::size_t i = 0; i < n; ++i) {
        if (!usable(i)) continue;
        os << "<circle cx=\"" << num(px(s.x[i])) << "\" cy=\"" << num(py(s.y[i])) << "\" r=\"2.5\" fill=\""
           << s.color << "\"/>";
      }
      os << '\n';
    }
    os << "</g>\n";
  }

  void legend(std::ostream& os, const std::vector<Series>& series) const {
    std::size_t n = 0, chars = 0;
    for (const Series& s : series) {
      if (s.label.empty()) continue;
      ++n;
      chars = std::max(chars, s.label.size());
    }
    if (n == 0) return;
    const double bw = 36 + 7.0 * static_cast<double>(chars);
    const double x = ox_ + kLeft + pw() - bw - 6;
    double y = oy_ + kTop + 6;
    os << "<rect x=\"" << num(x) << "\" y=\"" << num(y) << "\" width=\"" << num(bw) << "\" height=\""
       << num(16.0 * static_cast<double>(n) + 6) << "\" fill=\"#fff\" fill-opacity=\"0.85\" stroke=\"#999\"/>\n";
    y += 16;
    for (const Series& s : series) {
      if (s.label.empty()) continue;
      if (s.line) {
        os << "<line x1=\"" << num(x + 6) << "\" y1=\"" << num(y - 4) << "\" x2=\"" << num(x + 24) << "\" y2=\""
           << num(y - 4) << "\" stroke=\"" << s.color << "\" stroke-width=\"2\"/>";
      } else {
        os << "<circle cx=\"" << num(x + 15) << "\" cy=\"" << num(y - 4) << "\" r=\"2.5\" fill=\"" << s.color
           << "\"/>";
      }
      os << "<text x=\"" << num(x + 30) << "\" y=\"" << num(y) << "\">" << esc(s.label) << "</text>\n";
      y += 16;
    }
  }

 private:
  double ox_, oy_, w_, h_;
  Range x_, y_;
};

void open_doc(std::ostream& os, double w, double h) {
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(w) << "\" height=\"" << num(h)
     << "\" viewBox=\"0 0 " << num(w) << ' ' << num(h) << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"#fff\"/>\n";
}

double panel_width(const Axes& a) { return a.square ? kHeight - kTop - kBottom + kLeft + kRight : kWidth; }

void draw_chart(std::ostream& os, double ox, const Axes& a, const std::vector<Series>& series, int index) {
  std::vector<const std::vector<double>*> xs, ys;
  for (const Series& s : series) {
    xs.push_back(&s.x);
    ys.push_back(&s.y);
  }
  const Frame f(ox, 0.0, panel_width(a), kHeight, make_range(a.x_min, a.x_max, xs, a.log_x),
                make_range(a.y_min, a.y_max, ys, a.log_y));
  const std::string clip = "plot" + std::to_string(index);
  f.axes(os, a, clip);
  for (const Series& s : series) f.series(os, s, clip);
  f.legend(os, series);
}

}  // namespace

const char* colormap(double t) {
  if (!std::isfinite(t)) t = 0.0;
  const auto i = static_cast<std::size_t>(std::clamp(t, 0.0, 1.0) * 255.0 + 0.5);
  return kViridis[i];
}

std::string line_chart(const Axes& axes, const std::vector<Series>& series) { return chart_row({{axes, series}}); }

std::string chart_row(const std::vector<std::pair<Axes, std::vector<Series>>>& panels) {
  std::ostringstream os;
  double total = 0.0;
  for (const auto& p : panels) total += panel_width(p.first);
  open_doc(os, total, kHeight);
  double ox = 0.0;
  for (std::size_t i = 0; i < panels.size(); ++i) {
    draw_chart(os, ox, panels[i].first, panels[i].second, static_cast<int>(i));
    ox += panel_width(panels[i].first);
  }
  os << "</svg>\n";
  return os.str();
}

std::string heatmap(const Heatmap& h) {
  const double bar = 70;
  std::ostringstream os;
  open_doc(os, kWidth + bar, kHeight);
  // cell edges halfway between coordinates
  auto edges = [](const std::vector<double>& c) {
    std::vector<double> e(c.size() + 1);
    if (c.size() == 1) {
      e = {c[0] - 0.5, c[0] + 0.5};
      return e;
    }
    for (std::size_t i = 1; i < c.size(); ++i) e[i] = 0.5 * (c[i - 1] + c[i]);
    e.front() = c.front() - (e[1] - c.front());
    e.back() = c.back() + (c.back() - e[c.size() - 1]);
    return e;
  };
  const std::vector<double> ex = edges(h.x), ey = edges(h.y);
  const Frame f(0.0, 0.0, kWidth, kHeight, make_range(h.axes.x_min, h.axes.x_max, {&ex}, false, false),
                make_range(h.axes.y_min, h.axes.y_max, {&ey}, false, false));
  const std::string clip = "plot0";
  os << "<g clip-path=\"url(#" << clip << ")\" shape-rendering=\"crispEdges\">\n";
  const double span = h.v_max > h.v_min ? h.v_max - h.v_min : 1.0;
  for (std::size_t ix = 0; ix < h.x.size(); ++ix) {
    for (std::size_t iy = 0; iy < h.y.size(); ++iy) {
      const double v = h.values[ix * h.y.size() + iy];
      const double x0 = f.px(ex[ix]), x1 = f.px(ex[ix + 1]);
      const double y0 = f.py(ey[iy + 1]), y1 = f.py(ey[iy]);
      os << "<rect x=\"" << num(x0) << "\" y=\"" << num(y0) << "\" width=\"" << num(x1 - x0 + 0.3)
         << "\" height=\"" << num(y1 - y0 + 0.3) << "\" fill=\"" << colormap((v - h.v_min) / span) << "\"/>";
    }
    os << '\n';
  }
  os << "</g>\n";
  f.axes(os, h.axes, clip);
  for (const Series& s : h.overlays) f.series(os, s, clip);

  // colour bar
  const double bx = kWidth + 10, by = kTop, bh = kHeight - kTop - kBottom;
  for (int i = 0; i < 64; ++i) {
    os << "<rect x=\"" << num(bx) << "\" y=\"" << num(by + bh * (63 - i) / 64.0) << "\" width=\"16\" height=\""
       << num(bh / 64.0 + 0.3) << "\" fill=\"" << colormap((i + 0.5) / 64.0) << "\"/>";
  }
  os << "\n<text x=\"" << num(bx + 20) << "\" y=\"" << num(by + 10) << "\">" << num(h.v_max) << "</text>";
  os << "<text x=\"" << num(bx + 20) << "\" y=\"" << num(by + bh) << "\">" << num(h.v_min) << "</text>\n";
  os << "</svg>\n";
  return os.str();
}

}  // namespace arpsim::cli
