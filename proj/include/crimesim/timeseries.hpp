#pragma once

#include <array>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace crimesim {

/// Spatially averaged diagnostics on a uniform time grid.
struct TimeSeries {
    static constexpr std::array<const char*, 5> kChannels{"avgA", "avgRho", "avgPi", "avgH", "avgS"};

    double t0 = 0.0;
    double dt_sample = 1.0;
    std::array<std::vector<double>, 5> data;

    std::size_t size() const { return data[0].size(); }
    double time(std::size_t i) const { return t0 + double(i) * dt_sample; }

    void push(double a, double rho, double pi, double h, double s) {
        data[0].push_back(a);
        data[1].push_back(rho);
        data[2].push_back(pi);
        data[3].push_back(h);
        data[4].push_back(s);
    }

    static std::size_t channel_index(const std::string& name) {
        for (std::size_t i = 0; i < kChannels.size(); ++i)
            if (name == kChannels[i]) return i;
        throw std::invalid_argument("unknown channel: " + name);
    }

    const std::vector<double>& channel(const std::string& name) const { return data[channel_index(name)]; }
    std::vector<double>& channel(const std::string& name) { return data[channel_index(name)]; }

    /// Index range [first, last) of samples with t in [t_begin, t_end].
    std::pair<std::size_t, std::size_t> window(double t_begin, double t_end) const {
        if (!(dt_sample > 0)) throw std::invalid_argument("dt_sample must be positive");
        const double eps = 1e-9 * dt_sample;
        std::size_t first = 0, last = 0;
        for (std::size_t i = 0; i < size(); ++i) {
            const double t = time(i);
            if (t < t_begin - eps) first = i + 1;
            if (t <= t_end + eps) last = i + 1;
        }
        if (last < first) last = first;
        return {first, last};
    }

    /// Appends another series that continues this one.
    void append(const TimeSeries& o) {
        for (std::size_t c = 0; c < data.size(); ++c) data[c].insert(data[c].end(), o.data[c].begin(), o.data[c].end());
    }
};

}  // namespace crimesim
