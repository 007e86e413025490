#include "reshuffle/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <stdexcept>
#include <vector>

namespace reshuffle {

namespace {

struct Series {
  std::string method;
  std::vector<double> epoch, mean, ci;
};

const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                "#9467bd", "#8c564b"};

std::optional<double> pick(const SummaryRow& r, PlotMetric m, bool ci) {
  switch (m) {
    case PlotMetric::kFValue: return ci ? r.f_ci : r.f_mean;
    case PlotMetric::kDistSq: return ci ? r.dist_ci : r.dist_mean;
    case PlotMetric::kGradNormSq: return ci ? r.grad_ci : r.grad_mean;
  }
  return std::nullopt;
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3g", v);
  return buf;
}

}  // namespace

std::string emit_plot(std::span<const SummaryRow> rows, const PlotSpec& spec) {
  if (rows.empty()) throw std::runtime_error("emit_plot: no rows");

  // Group rows by method, keeping first-appearance order.
  std::vector<Series> series;
  for (const SummaryRow& r : rows) {
    const auto mean = pick(r, spec.metric, false);
    if (!mean)
      throw std::runtime_error("emit_plot: requested metric missing in CSV");
    const auto ci = pick(r, spec.metric, true);
    auto it = std::find_if(series.begin(), series.end(),
                           [&](const Series& s) { return s.method == r.method; });
    if (it == series.end()) {
      series.push_back(Series{r.method, {}, {}, {}});
      it = series.end() - 1;
    }
    it->epoch.push_back(static_cast<double>(r.epoch));
    it->mean.push_back(*mean);
    it->ci.push_back(ci.value_or(0.0));
  }

  // Log-scale floor: a decade below the smallest positive value.
  double min_pos = std::numeric_limits<double>::infinity();
  double max_val = 0.0;
  double max_epoch = 0.0;
  for (const Series& s : series)
    for (std::size_t i = 0; i < s.mean.size(); ++i) {
      const double hi = s.mean[i] + s.ci[i];
      if (s.mean[i] > 0.0) min_pos = std::min(min_pos, s.mean[i]);
      max_val = std::max(max_val, hi);
      max_epoch = std::max(max_epoch, s.epoch[i]);
    }
  if (!std::isfinite(min_pos)) min_pos = 1e-16;
  if (max_val <= 0.0) max_val = 1.0;
  const double floor = min_pos / 10.0;
  const double ylo = std::log10(floor);
  const double yhi = std::log10(std::max(max_val, floor * 10.0));

  const double ml = 70, mr = 20, mt = 40, mb = 45;
  const double pw = spec.width - ml - mr, ph = spec.height - mt - mb;
  auto xpix = [&](double e) {
    return ml + (max_epoch > 0 ? e / max_epoch : 0.0) * pw;
  };
  auto ypix = [&](double v) {
    const double lv = std::log10(std::max(v, floor));
    return mt + (yhi - lv) / (yhi - ylo) * ph;
  };

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
         std::to_string(spec.width) + "\" height=\"" +
         std::to_string(spec.height) + "\" viewBox=\"0 0 " +
         std::to_string(spec.width) + " " + std::to_string(spec.height) +
         "\">\n";
  svg += "<text x=\"" + num(ml) + "\" y=\"20\" font-family=\"sans-serif\" "
         "font-size=\"14\">" + spec.title + "</text>\n";

  // Axes.
  svg += "<line x1=\"" + num(ml) + "\" y1=\"" + num(mt + ph) + "\" x2=\"" +
         num(ml + pw) + "\" y2=\"" + num(mt + ph) +
         "\" stroke=\"#000\" stroke-width=\"1\"/>\n";
  svg += "<line x1=\"" + num(ml) + "\" y1=\"" + num(mt) + "\" x2=\"" +
         num(ml) + "\" y2=\"" + num(mt + ph) +
         "\" stroke=\"#000\" stroke-width=\"1\"/>\n";

  // Decade ticks on y, a few epoch ticks on x.
  for (int dec = static_cast<int>(std::ceil(ylo));
       dec <= static_cast<int>(std::floor(yhi)); ++dec) {
    const double y = mt + (yhi - dec) / (yhi - ylo) * ph;
    svg += "<line x1=\"" + num(ml - 4) + "\" y1=\"" + num(y) + "\" x2=\"" +
           num(ml) + "\" y2=\"" + num(y) + "\" stroke=\"#000\"/>\n";
    svg += "<text x=\"" + num(ml - 8) + "\" y=\"" + num(y + 4) +
           "\" font-family=\"sans-serif\" font-size=\"11\" "
           "text-anchor=\"end\">1e" + std::to_string(dec) + "</text>\n";
  }
  const int xticks = 5;
  for (int k = 0; k <= xticks; ++k) {
    const double e = max_epoch * k / xticks;
    svg += "<line x1=\"" + num(xpix(e)) + "\" y1=\"" + num(mt + ph) +
           "\" x2=\"" + num(xpix(e)) + "\" y2=\"" + num(mt + ph + 4) +
           "\" stroke=\"#000\"/>\n";
    svg += "<text x=\"" + num(xpix(e)) + "\" y=\"" + num(mt + ph + 16) +
           "\" font-family=\"sans-serif\" font-size=\"11\" "
           "text-anchor=\"middle\">" + sci(e) + "</text>\n";
  }
  svg += "<text x=\"" + num(ml + pw / 2) + "\" y=\"" +
         num(spec.height - 8.0) +
         "\" font-family=\"sans-serif\" font-size=\"12\" "
         "text-anchor=\"middle\">epoch</text>\n";
  if (!spec.y_label.empty())
    svg += "<text x=\"14\" y=\"" + num(mt + ph / 2) +
           "\" font-family=\"sans-serif\" font-size=\"12\" "
           "text-anchor=\"middle\" transform=\"rotate(-90 14 " +
           num(mt + ph / 2) + ")\">" + spec.y_label + "</text>\n";

  // CI bands first, then the lines on top.
  for (std::size_t s = 0; s < series.size(); ++s) {
    const Series& sr = series[s];
    const char* color = kPalette[s % 6];
    std::string d = "M";
    for (std::size_t i = 0; i < sr.epoch.size(); ++i)
      d += (i ? " L" : "") + std::string(" ") + num(xpix(sr.epoch[i])) + " " +
           num(ypix(sr.mean[i] + sr.ci[i]));
    for (std::size_t i = sr.epoch.size(); i-- > 0;)
      d += " L " + num(xpix(sr.epoch[i])) + " " +
           num(ypix(std::max(sr.mean[i] - sr.ci[i], floor)));
    d += " Z";
    svg += "<path d=\"" + d + "\" fill=\"" + color +
           "\" fill-opacity=\"0.15\" stroke=\"none\"/>\n";
  }
  for (std::size_t s = 0; s < series.size(); ++s) {
    const Series& sr = series[s];
    const char* color = kPalette[s % 6];
    std::string pts;
    for (std::size_t i = 0; i < sr.epoch.size(); ++i)
      pts += (i ? " " : "") + num(xpix(sr.epoch[i])) + "," +
             num(ypix(sr.mean[i]));
    svg += "<polyline points=\"" + pts + "\" fill=\"none\" stroke=\"" + color +
           "\" stroke-width=\"1.5\"/>\n";
    svg += "<text x=\"" + num(ml + pw - 4) + "\" y=\"" +
           num(mt + 14.0 * (s + 1)) +
           "\" font-family=\"sans-serif\" font-size=\"12\" fill=\"" + color +
           "\" text-anchor=\"end\">" + sr.method + "</text>\n";
  }
  svg += "</svg>\n";
  return svg;
}

}  // namespace reshuffle
