#include "dsm/analytics.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "dsm/errors.hpp"

namespace dsm {

using nlohmann::json;

LengthHistogram length_histogram(const std::vector<Sketch>& sketches, double bin_width) {
    if (bin_width <= 0.0) throw InvalidArgument("histogram bin width must be > 0");
    LengthHistogram h;
    h.bin_width = bin_width;
    for (const auto& k : sketches)
        for (const auto& s : k.strokes) {
            auto bin = static_cast<size_t>(std::floor(stroke_length(s) / bin_width));
            if (bin >= h.counts.size()) h.counts.resize(bin + 1, 0);
            ++h.counts[bin];
        }
    return h;
}

LengthClass length_class(double length, double short_max, double long_min) {
    if (short_max <= 0.0 || short_max > long_min)
        throw InvalidArgument("thresholds must satisfy 0 < short_max <= long_min");
    if (length < short_max) return LengthClass::Short;
    if (length > long_min) return LengthClass::Long;
    return LengthClass::Medium;
}

TemporalMatrix temporal_matrix(const std::vector<Sketch>& sketches) {
    TemporalMatrix m;
    for (size_t idx = 0; idx < sketches.size(); ++idx) {
        const auto& k = sketches[idx];
        TemporalMatrix::Row row;
        row.sketch_index = static_cast<int>(idx);
        if (k.strokes.empty()) {
            m.rows.push_back(std::move(row));
            continue;
        }
        std::vector<double> by_order(k.strokes.size(), 0.0);
        double mean = 0.0;
        for (const auto& s : k.strokes) {
            double len = stroke_length(s);
            by_order[static_cast<size_t>(s.order)] = len;
            mean += len;
        }
        mean /= static_cast<double>(k.strokes.size());
        row.codes.reserve(by_order.size());
        for (double len : by_order) row.codes.push_back(len > mean ? 1 : 0);
        m.rows.push_back(std::move(row));
    }
    std::stable_sort(m.rows.begin(), m.rows.end(),
                     [](const auto& a, const auto& b) { return a.codes.size() < b.codes.size(); });
    return m;
}

std::vector<std::pair<int, double>> order_colormap(const Sketch& k) {
    std::vector<std::pair<int, double>> out;
    const auto n = k.strokes.size();
    out.reserve(n);
    for (const auto& s : k.strokes) {
        double rank = n > 1 ? static_cast<double>(s.order) / static_cast<double>(n - 1) : 0.0;
        out.emplace_back(s.id, rank);
    }
    std::sort(out.begin(), out.end());
    return out;
}

ClassCounts count_length_classes(const std::vector<Sketch>& sketches, double short_max,
                                 double long_min) {
    ClassCounts c;
    for (const auto& k : sketches)
        for (const auto& s : k.strokes) {
            switch (length_class(stroke_length(s), short_max, long_min)) {
                case LengthClass::Short: ++c.short_count; break;
                case LengthClass::Medium: ++c.medium_count; break;
                case LengthClass::Long: ++c.long_count; break;
            }
        }
    return c;
}

std::string analysis_report_json(const std::vector<Sketch>& sketches, double bin_width,
                                 double short_max, double long_min) {
    json j;
    auto h = length_histogram(sketches, bin_width);
    j["histogram"] = {{"bin_width", h.bin_width}, {"counts", h.counts}};
    auto c = count_length_classes(sketches, short_max, long_min);
    j["length_classes"] = {{"short_max", short_max},
                           {"long_min", long_min},
                           {"short", c.short_count},
                           {"medium", c.medium_count},
                           {"long", c.long_count}};
    auto tm = temporal_matrix(sketches);
    json rows = json::array();
    for (const auto& r : tm.rows)
        rows.push_back({{"sketch", r.sketch_index}, {"codes", r.codes}});
    j["temporal_matrix"] = {{"rows", rows}};
    json cmaps = json::array();
    for (size_t i = 0; i < sketches.size(); ++i) {
        json ranks = json::array();
        for (const auto& [id, rank] : order_colormap(sketches[i]))
            ranks.push_back(json::array({id, rank}));
        cmaps.push_back({{"sketch", static_cast<int>(i)}, {"ranks", ranks}});
    }
    j["order_colormaps"] = cmaps;
    return j.dump(2) + "\n";
}

} // namespace dsm
