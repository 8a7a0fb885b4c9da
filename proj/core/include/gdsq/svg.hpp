#pragma once

#include <string>

#include "gdsq/genericity.hpp"
#include "gdsq/maps.hpp"
#include "gdsq/singularity.hpp"

namespace gdsq {

// Hand-emitted SVG: branch polylines, dots on fold vertices, a cross marker
// on each cusp, circles on the two central points.
std::string render_singular_curve_svg(const SingularCurve& curve, const GdsMap& g, int width = 720,
                                      int height = 720);

// Margin histogram for a Monte Carlo summary.
std::string render_margin_histogram_svg(const MonteCarloSummary& s, int bins = 40, int width = 720,
                                        int height = 440);

}  // namespace gdsq
