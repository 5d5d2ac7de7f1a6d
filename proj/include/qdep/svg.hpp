#pragma once

#include <string>
#include <vector>

#include "qdep/bet.hpp"
#include "qdep/diagram.hpp"
#include "qdep/surface.hpp"

namespace qdep {

// Static SVG renderers. Output depends only on the passed values, so a
// diagram re-read from JSON re-renders byte for byte.

// 10x10 decile map: white neutral, blue negative, pink positive, striped mixed.
std::string diagram_svg(const DependenceDiagram& diagram);

// d x d heatmap of the normalized surface, white at zero, blue negative,
// pink positive, intensity |q|.
std::string surface_svg(const QSurface& surface);

// Depth-2 symmetry overlay: shaded quarters where the selected Walsh product
// is negative, plus the pseudo-observation scatter.
std::string bet_svg(const std::vector<double>& u, const std::vector<double>& v,
                    const PatternSelection& selection);

}  // namespace qdep
