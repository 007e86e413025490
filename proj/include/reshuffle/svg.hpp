#ifndef RESHUFFLE_SVG_HPP
#define RESHUFFLE_SVG_HPP

#include <span>
#include <string>

#include "reshuffle/csv.hpp"

namespace reshuffle {

// Which summary metric a plot draws.
enum class PlotMetric { kFValue, kDistSq, kGradNormSq };

struct PlotSpec {
  PlotMetric metric = PlotMetric::kDistSq;
  std::string title;
  std::string y_label;
  int width = 640;
  int height = 420;
};

// Renders one polyline per method with a shaded CI band, log-scaled y axis.
// Output is byte-for-byte deterministic for identical inputs. Throws if the
// rows are empty or the requested metric is missing.
std::string emit_plot(std::span<const SummaryRow> rows, const PlotSpec& spec);

}  // namespace reshuffle

#endif
