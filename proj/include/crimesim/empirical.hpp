#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace crimesim {

struct BeatRecord {
    std::string beat_id;
    double crime_density = 0.0;    // events per km^2 per month
    double officer_density = 0.0;  // officers per km^2
    double area = 1.0;             // km^2

    void validate() const {
        if (!(crime_density >= 0) || !(officer_density >= 0))
            throw std::invalid_argument("beat " + beat_id + ": densities must be non-negative");
        if (!(area > 0)) throw std::invalid_argument("beat " + beat_id + ": area must be positive");
    }
};

/// Lower-middle element for even counts.
inline double lower_median(std::vector<double> v) {
    if (v.empty()) throw std::invalid_argument("median of empty set");
    const auto k = (v.size() - 1) / 2;
    std::nth_element(v.begin(), v.begin() + long(k), v.end());
    return v[k];
}

/// Median-centred log ratio of smoothed crime to officer density, one value per beat.
inline std::vector<double> mismatch(const std::vector<BeatRecord>& records, double alpha = 0.5, double beta = 0.5) {
    if (!(alpha > 0) || !(beta > 0)) throw std::invalid_argument("smoothing constants must be positive");
    if (records.empty()) throw std::invalid_argument("no beat records");
    std::vector<double> r(records.size());
    for (std::size_t i = 0; i < records.size(); ++i) {
        records[i].validate();
        r[i] = std::log((records[i].crime_density + alpha) / (records[i].officer_density + beta));
    }
    const double med = lower_median(r);
    for (auto& v : r) v -= med;
    return r;
}

}  // namespace crimesim
