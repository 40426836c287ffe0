#pragma once

#include "leapclust/types.hpp"

#include <string>

namespace leapclust {

struct ScatterOptions {
    std::string title;
    int width = 480;
    int height = 480;
    double radius = 2.5;
};

/// Static SVG scatter plot of the first two columns, one colour per label.
std::string scatter_svg(const PointSet& points, const ClusterAssignment& labels, const ScatterOptions& options = {});

}  // namespace leapclust
