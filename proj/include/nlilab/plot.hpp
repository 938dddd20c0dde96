#ifndef NLILAB_PLOT_HPP
#define NLILAB_PLOT_HPP

#include <string>
#include <vector>

#include "nlilab/experiment.hpp"

namespace nlilab {

/// Renders the three result panels (effective SNR, GMI, FER vs launch
/// power, one series per scheme) as standalone SVG files in out_dir:
/// snr.svg, gmi.svg, fer.svg. The FER panel is log-scale with Wilson CI
/// whiskers; FER = 0 points are drawn at their CI upper bound. Each file
/// embeds its data table in a <metadata> element. Returns the file paths.
std::vector<std::string> plot_metrics(const std::vector<MetricsRecord>& rows,
                                      const std::string& out_dir);

}  // namespace nlilab

#endif
