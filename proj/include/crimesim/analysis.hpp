#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <fftw3.h>

#include "field.hpp"
#include "timeseries.hpp"

namespace crimesim {

struct Spectrum {
    std::vector<double> freqs;
    std::vector<double> power;
    double window_begin = 0.0, window_end = 0.0;
    double bin_width = 0.0;
};

/// One-sided power spectrum of the mean-removed window, zero-padded to a power of two.
/// Normalised so that the total power equals the variance of the windowed samples.
inline Spectrum power_spectrum(const std::vector<double>& x, double dt, double t0 = 0.0) {
    const std::size_t n = x.size();
    if (n < 1024) throw std::invalid_argument("spectrum window needs at least 1024 samples");
    if (!(dt > 0)) throw std::invalid_argument("sampling step must be positive");
    std::size_t npad = 1;
    while (npad < n) npad <<= 1;
    double mean = 0;
    for (double v : x) mean += v;
    mean /= double(n);

    std::vector<double> in(npad, 0.0);
    for (std::size_t i = 0; i < n; ++i) in[i] = x[i] - mean;
    std::vector<std::complex<double>> out(npad / 2 + 1);
    fftw_plan plan = fftw_plan_dft_r2c_1d(int(npad), in.data(), reinterpret_cast<fftw_complex*>(out.data()),
                                          FFTW_ESTIMATE);
    fftw_execute(plan);
    fftw_destroy_plan(plan);

    Spectrum s;
    s.bin_width = 1.0 / (double(npad) * dt);
    s.window_begin = t0;
    s.window_end = t0 + double(n - 1) * dt;
    s.freqs.resize(out.size());
    s.power.resize(out.size());
    const double norm = 1.0 / (double(npad) * double(n));
    for (std::size_t k = 0; k < out.size(); ++k) {
        const double c = (k == 0 || k == npad / 2) ? 1.0 : 2.0;
        s.freqs[k] = double(k) * s.bin_width;
        s.power[k] = c * std::norm(out[k]) * norm;
    }
    return s;
}

inline Spectrum power_spectrum(const TimeSeries& ts, const std::string& channel, double t_begin, double t_end) {
    const auto [a, b] = ts.window(t_begin, t_end);
    const auto& x = ts.channel(channel);
    return power_spectrum(std::vector<double>(x.begin() + long(a), x.begin() + long(b)), ts.dt_sample, ts.time(a));
}

/// Frequency of maximal power (zero frequency excluded).
inline double peak_frequency(const Spectrum& s) {
    if (s.power.size() < 2) throw std::invalid_argument("empty spectrum");
    const auto it = std::max_element(s.power.begin() + 1, s.power.end());
    return s.freqs[std::size_t(it - s.power.begin())];
}

inline double fundamental_frequency(const Spectrum& s, int subphase_count) {
    if (subphase_count < 1) throw std::invalid_argument("subphase_count must be at least 1");
    return peak_frequency(s) / double(subphase_count);
}

/// Local spectral maxima whose power exceeds rel_threshold times the global peak.
inline std::vector<std::pair<double, double>> spectral_peaks(const Spectrum& s, double rel_threshold = 0.05) {
    std::vector<std::pair<double, double>> out;
    if (s.power.size() < 3) return out;
    const double top = *std::max_element(s.power.begin() + 1, s.power.end());
    for (std::size_t k = 1; k + 1 < s.power.size(); ++k)
        if (s.power[k] > s.power[k - 1] && s.power[k] >= s.power[k + 1] && s.power[k] >= rel_threshold * top)
            out.emplace_back(s.freqs[k], s.power[k]);
    return out;
}

inline std::vector<double> window_samples(const TimeSeries& ts, const std::string& channel, double t0, double t1) {
    const auto [a, b] = ts.window(t0, t1);
    const auto& x = ts.channel(channel);
    return {x.begin() + long(a), x.begin() + long(b)};
}

/// Half the peak-to-peak range.
inline double oscillation_amplitude(const std::vector<double>& x) {
    if (x.empty()) throw std::invalid_argument("empty window");
    const auto [lo, hi] = std::minmax_element(x.begin(), x.end());
    return 0.5 * (*hi - *lo);
}

inline double oscillation_amplitude(const TimeSeries& ts, const std::string& channel, double t0, double t1) {
    return oscillation_amplitude(window_samples(ts, channel, t0, t1));
}

inline std::vector<std::pair<double, double>> return_map(const std::vector<double>& x, std::size_t stride) {
    if (stride < 1) throw std::invalid_argument("stride must be at least 1");
    std::vector<std::pair<double, double>> out;
    for (std::size_t i = 0; i + stride < x.size(); i += stride) out.emplace_back(x[i], x[i + stride]);
    return out;
}

inline std::vector<std::pair<double, double>> return_map(const TimeSeries& ts, const std::string& channel,
                                                         std::size_t stride, double t0 = -INFINITY,
                                                         double t1 = INFINITY) {
    return return_map(window_samples(ts, channel, t0, t1), stride);
}

inline std::vector<std::pair<double, double>> phase_portrait(const TimeSeries& ts, const std::string& cx,
                                                             const std::string& cy, double t0, double t1) {
    const auto x = window_samples(ts, cx, t0, t1), y = window_samples(ts, cy, t0, t1);
    std::vector<std::pair<double, double>> out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = {x[i], y[i]};
    return out;
}

/// Signed shoelace area of a polyline closed back to its first point.
inline double loop_area(const std::vector<std::pair<double, double>>& pts) {
    double a = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const auto& p = pts[i];
        const auto& q = pts[(i + 1) % pts.size()];
        a += p.first * q.second - q.first * p.second;
    }
    return 0.5 * a;
}

/// Largest distance between points of a set (O(n^2)).
inline double diameter(const std::vector<std::pair<double, double>>& pts) {
    double d = 0;
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = i + 1; j < pts.size(); ++j)
            d = std::max(d, std::hypot(pts[i].first - pts[j].first, pts[i].second - pts[j].second));
    return d;
}

struct LinearFit {
    double slope = 0.0, intercept = 0.0, r2 = 0.0;
};

inline LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("fit needs >= 2 paired points");
    const double n = double(x.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (!(sxx > 0)) throw std::invalid_argument("fit abscissae are all equal");
    LinearFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    f.r2 = syy > 0 ? (sxy * sxy) / (sxx * syy) : 1.0;
    return f;
}

inline double mean(const std::vector<double>& x) {
    if (x.empty()) throw std::invalid_argument("empty sample");
    double s = 0;
    for (double v : x) s += v;
    return s / double(x.size());
}

inline double stddev(const std::vector<double>& x) {
    const double m = mean(x);
    double s = 0;
    for (double v : x) s += (v - m) * (v - m);
    return std::sqrt(s / double(x.size()));
}

/// Interior local maxima of a field above threshold (8-neighbour test).
inline std::size_t count_hotspots(const ScalarField& f, double threshold) {
    const std::size_t n = f.grid.n;
    std::size_t c = 0;
    for (std::size_t y = 0; y < n; ++y)
        for (std::size_t x = 0; x < n; ++x) {
            const double v = f(x, y);
            if (v < threshold) continue;
            bool peak = true;
            for (int dy = -1; dy <= 1 && peak; ++dy)
                for (int dx = -1; dx <= 1; ++dx) {
                    if (!dx && !dy) continue;
                    const long xx = long(x) + dx, yy = long(y) + dy;
                    if (xx < 0 || yy < 0 || xx >= long(n) || yy >= long(n)) continue;
                    if (f(std::size_t(xx), std::size_t(yy)) > v) { peak = false; break; }
                }
            c += peak;
        }
    return c;
}

}  // namespace crimesim
