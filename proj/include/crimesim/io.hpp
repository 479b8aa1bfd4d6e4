#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "analysis.hpp"
#include "empirical.hpp"
#include "field.hpp"
#include "stability.hpp"
#include "timeseries.hpp"

namespace crimesim::io {

namespace fs = std::filesystem;

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Writes via a temporary sibling and renames into place.
inline void write_atomic(const fs::path& path, const std::string& content) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary);
        if (!f) throw IoError("cannot open " + tmp.string());
        f << content;
        if (!f) throw IoError("write failed: " + tmp.string());
    }
    fs::rename(tmp, path);
}

inline std::string read_file(const fs::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open " + path.string());
    std::ostringstream os;
    os << f.rdbuf();
    return os.str();
}

inline std::string fmt(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

inline std::vector<std::string> split(const std::string& line, char sep = ',') {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream is(line);
    while (std::getline(is, cur, sep)) {
        while (!cur.empty() && (cur.back() == '\r' || cur.back() == ' ')) cur.pop_back();
        std::size_t b = cur.find_first_not_of(' ');
        out.push_back(b == std::string::npos ? std::string() : cur.substr(b));
    }
    return out;
}

inline double to_double(const std::string& s) {
    std::size_t used = 0;
    double v = 0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        throw IoError("not a number: '" + s + "'");
    }
    if (used != s.size()) throw IoError("not a number: '" + s + "'");
    return v;
}

// ---- time series -------------------------------------------------------

inline std::string timeseries_csv(const TimeSeries& ts) {
    std::ostringstream os;
    os << "t,avgA,avgRho,avgPi,avgH,avgS\n";
    for (std::size_t i = 0; i < ts.size(); ++i) {
        os << fmt(ts.time(i));
        for (const auto& ch : ts.data) os << ',' << fmt(ch[i]);
        os << '\n';
    }
    return os.str();
}

inline TimeSeries parse_timeseries_csv(const std::string& text) {
    std::istringstream is(text);
    std::string line;
    if (!std::getline(is, line)) throw IoError("empty time series");
    const auto head = split(line);
    if (head.size() != 6 || head[0] != "t") throw IoError("unexpected time series header");
    std::vector<std::size_t> map(5);
    for (std::size_t c = 0; c < 5; ++c) map[c] = TimeSeries::channel_index(head[c + 1]);
    TimeSeries ts;
    std::vector<double> t;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        const auto f = split(line);
        if (f.size() != 6) throw IoError("malformed time series row");
        t.push_back(to_double(f[0]));
        for (std::size_t c = 0; c < 5; ++c) ts.data[map[c]].push_back(to_double(f[c + 1]));
    }
    if (t.size() < 2) throw IoError("time series needs at least two rows");
    ts.t0 = t.front();
    ts.dt_sample = (t.back() - t.front()) / double(t.size() - 1);
    return ts;
}

// ---- fields ------------------------------------------------------------

/// One row per y index, comma-separated x values.
inline std::string field_csv(const ScalarField& f) {
    std::ostringstream os;
    for (std::size_t y = 0; y < f.ny(); ++y) {
        for (std::size_t x = 0; x < f.nx(); ++x) os << (x ? "," : "") << fmt(f(x, y));
        os << '\n';
    }
    return os.str();
}

inline std::string snapshot_name(const std::string& prefix, const std::string& field, double t) {
    return prefix + "_" + field + "_t" + fmt(t) + ".csv";
}

/// 8-bit graymap scaled between the field's min and max.
inline void write_pgm(const fs::path& path, const ScalarField& f) {
    const double lo = f.min(), hi = f.max();
    const double span = hi > lo ? hi - lo : 1.0;
    std::string data = "P5\n" + std::to_string(f.nx()) + " " + std::to_string(f.ny()) + "\n255\n";
    for (std::size_t yy = f.ny(); yy-- > 0;)
        for (std::size_t x = 0; x < f.nx(); ++x)
            data.push_back(char(static_cast<unsigned char>(std::lround(255.0 * (f(x, yy) - lo) / span))));
    write_atomic(path, data);
    fs::path side = path;
    side.replace_extension(".json");
    nlohmann::json j = {{"min", lo}, {"max", hi}, {"width", f.nx()}, {"height", f.ny()}};
    write_atomic(side, j.dump(2) + "\n");
}

// ---- analysis outputs --------------------------------------------------

inline std::string spectrum_csv(const Spectrum& s) {
    std::ostringstream os;
    os << "freq,power\n";
    for (std::size_t k = 0; k < s.freqs.size(); ++k) os << fmt(s.freqs[k]) << ',' << fmt(s.power[k]) << '\n';
    return os.str();
}

inline std::string pairs_csv(const std::vector<std::pair<double, double>>& p) {
    std::ostringstream os;
    os << "x,y\n";
    for (const auto& [x, y] : p) os << fmt(x) << ',' << fmt(y) << '\n';
    return os.str();
}

inline std::string sweep_csv(const std::vector<SweepRow>& rows) {
    std::ostringstream os;
    os << "param,tau_c_star,mu_star,m,n\n";
    for (const auto& r : rows) {
        os << fmt(r.param) << ',';
        if (r.critical)
            os << fmt(r.critical->tau) << ',' << fmt(r.critical->mode.mu) << ',' << r.critical->mode.m << ','
               << r.critical->mode.n << '\n';
        else
            os << "inf,nan,-1,-1\n";
    }
    return os.str();
}

inline std::string eigen_table_csv(const std::vector<std::pair<double, cplx>>& rows) {
    std::ostringstream os;
    os << "tau,re,im\n";
    for (const auto& [t, l] : rows) os << fmt(t) << ',' << fmt(l.real()) << ',' << fmt(l.imag()) << '\n';
    return os.str();
}

// ---- beats -------------------------------------------------------------

inline std::vector<BeatRecord> parse_beats_csv(const std::string& text) {
    std::istringstream is(text);
    std::string line;
    if (!std::getline(is, line)) throw IoError("empty beat file");
    const auto head = split(line);
    const std::vector<std::string> want{"beat_id", "crime_density", "officer_density", "area"};
    if (head != want) throw IoError("beat file header must be beat_id,crime_density,officer_density,area");
    std::vector<BeatRecord> out;
    while (std::getline(is, line)) {
        if (line.empty() || line == "\r") continue;
        const auto f = split(line);
        if (f.size() != 4) throw IoError("malformed beat row: " + line);
        BeatRecord r{f[0], to_double(f[1]), to_double(f[2]), to_double(f[3])};
        r.validate();
        out.push_back(std::move(r));
    }
    return out;
}

inline std::string mismatch_csv(const std::vector<BeatRecord>& beats, const std::vector<double>& m) {
    std::ostringstream os;
    os << "beat_id,mismatch\n";
    for (std::size_t i = 0; i < beats.size(); ++i) os << beats[i].beat_id << ',' << fmt(m[i]) << '\n';
    return os.str();
}

}  // namespace crimesim::io
