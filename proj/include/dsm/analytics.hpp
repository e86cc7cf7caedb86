#pragma once

#include <string>
#include <vector>

#include "dsm/geometry.hpp"

namespace dsm {

struct LengthHistogram {
    double bin_width = 0.0;
    std::vector<long> counts;  // counts[i] covers [i*bin, (i+1)*bin)
};

enum class LengthClass { Short, Medium, Long };

// Per-sketch rows of above/below-mean length codes, rows sorted ascending by
// stroke count (stable: ties keep input order).
struct TemporalMatrix {
    struct Row {
        int sketch_index = 0;
        std::vector<int> codes;  // per stroke in drawing order: 1 above mean, 0 otherwise
    };
    std::vector<Row> rows;
};

LengthHistogram length_histogram(const std::vector<Sketch>& sketches, double bin_width);

// short if length < short_max, long if length > long_min, medium otherwise.
LengthClass length_class(double length, double short_max, double long_min);

TemporalMatrix temporal_matrix(const std::vector<Sketch>& sketches);

// Drawing-order rank per stroke: order / (n-1); a single-stroke sketch
// yields rank 0. Pairs are sorted by stroke id.
std::vector<std::pair<int, double>> order_colormap(const Sketch& k);

struct ClassCounts {
    long short_count = 0;
    long medium_count = 0;
    long long_count = 0;
};

ClassCounts count_length_classes(const std::vector<Sketch>& sketches, double short_max,
                                 double long_min);

// Full analysis report as JSON (histogram, class counts, temporal matrix,
// per-sketch order colormaps).
std::string analysis_report_json(const std::vector<Sketch>& sketches, double bin_width,
                                 double short_max, double long_min);

} // namespace dsm
