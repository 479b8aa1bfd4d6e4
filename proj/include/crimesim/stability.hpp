#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "equilibrium.hpp"
#include "params.hpp"

namespace crimesim {

using cplx = std::complex<double>;

struct ModeIndex {
    int m = 0;
    int n = 0;
    double mu = 0.0;

    static ModeIndex make(int m, int n, double L) {
        if (m < 0 || n < 0) throw std::invalid_argument("mode indices must be non-negative");
        const double pi = std::numbers::pi;
        return {m, n, double(m * m + n * n) * pi * pi / (L * L)};
    }
    /// Mode with an explicit eigenvalue (no lattice indices).
    static ModeIndex from_mu(double mu) { return {-1, -1, mu}; }
};

struct CharPoly {
    double a3 = 0, a2 = 0, a1 = 0, a0 = 0;
    double b1 = 0, b0 = 0;
    double alpha = 0, zeta = 0;

    bool all_positive() const { return a3 > 0 && a2 > 0 && a1 > 0 && a0 > 0; }

    cplx eval(cplx z) const { return (((z + a3) * z + a2) * z + a1) * z + a0; }
};

enum class Stability { Stable, Unstable, Marginal };

inline const char* to_string(Stability s) {
    switch (s) {
        case Stability::Stable: return "stable";
        case Stability::Unstable: return "unstable";
        default: return "marginal";
    }
}

namespace detail {
inline void check_eq(const EquilibriumState& eq, double tau) {
    if (!(tau > 0)) throw std::invalid_argument("tau must be positive");
    if (eq.pi_bar > 0 && !(eq.h_bar != 0))
        throw std::invalid_argument("H_bar vanishes while pi_bar > 0");
}
}  // namespace detail

/// Linearisation of the continuum model about eq, projected on one Neumann mode.
inline Eigen::Matrix4d jacobian(const EquilibriumState& eq, const ModeIndex& mode, double tau,
                                double eta) {
    detail::check_eq(eq, tau);
    const double mu = mode.mu;
    const double e = std::exp(-eq.pi_bar);
    const double A = eq.a_bar, r = eq.rho_bar, H = eq.h_bar;
    Eigen::Matrix4d J;
    J << -eta * mu - 1.0 + r * e, A * e, -r * A * e, 0.0,
        2.0 * mu * r / A - r * e, -mu - A * e, 0.0, 0.0,
        0.0, 0.0, -mu, eq.pi_bar > 0 ? 2.0 * mu * eq.pi_bar / H : 0.0,
        r * e / tau, A * e / tau, -H / tau, -1.0 / tau;
    return J;
}

/// Closed-form coefficients of det(lambda I - J) = l^4 + a3 l^3 + a2 l^2 + a1 l + a0.
inline CharPoly char_coeffs(const EquilibriumState& eq, const ModeIndex& mode, double tau,
                            double eta) {
    detail::check_eq(eq, tau);
    const double mu = mode.mu, p = eq.pi_bar;
    const double e = std::exp(-p);
    CharPoly c;
    c.alpha = eq.a_bar * e;
    c.zeta = eq.rho_bar * e;
    const double al = c.alpha, ze = c.zeta, it = 1.0 / tau;
    c.b1 = (1.0 + eta) * mu + 1.0 + al - ze;
    c.b0 = (eta * mu + 1.0) * (mu + al) - 3.0 * mu * ze;
    const double q2 = (1.0 + 2.0 * eta) * mu * mu + 2.0 * mu + (1.0 + eta) * mu * al + al - 4.0 * mu * ze;
    c.a3 = (2.0 + eta) * mu + 1.0 + al - ze + it;
    c.a2 = q2 + it * ((2.0 + eta) * mu + 1.0 + al - ze + 2.0 * mu * p);
    c.a1 = mu * (eta * mu + 1.0) * (mu + al) - 3.0 * mu * mu * ze +
           it * (q2 + 2.0 * mu * p * ((1.0 + eta) * mu + 1.0 + al));
    c.a0 = mu * it * ((1.0 + 2.0 * p) * (eta * mu + 1.0) * (mu + al) - 3.0 * mu * ze);
    return c;
}

/// Roots by companion-matrix eigenvalues, sorted by descending real part.
inline std::vector<cplx> poly_roots(const std::vector<double>& monic_tail) {
    const int d = int(monic_tail.size());
    if (d == 0) return {};
    Eigen::MatrixXd C = Eigen::MatrixXd::Zero(d, d);
    for (int j = 0; j < d; ++j) C(0, j) = -monic_tail[std::size_t(j)];
    for (int i = 1; i < d; ++i) C(i, i - 1) = 1.0;
    Eigen::EigenSolver<Eigen::MatrixXd> es(C, false);
    std::vector<cplx> r(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i) r[std::size_t(i)] = es.eigenvalues()[i];
    std::sort(r.begin(), r.end(), [](cplx a, cplx b) {
        if (a.real() != b.real()) return a.real() > b.real();
        return a.imag() > b.imag();
    });
    return r;
}

inline std::vector<cplx> quartic_roots(const CharPoly& c) {
    return poly_roots({c.a3, c.a2, c.a1, c.a0});
}

inline double hurwitz_h3(const CharPoly& c) {
    return c.a1 * c.a2 * c.a3 - c.a1 * c.a1 - c.a0 * c.a3 * c.a3;
}

inline double marginal_tolerance(const CharPoly& c) {
    return 1e-9 * std::max(std::abs(c.a1 * c.a2 * c.a3), 1.0);
}

inline Stability classify(const CharPoly& c) {
    const double h3 = hurwitz_h3(c);
    if (!c.all_positive()) return Stability::Unstable;
    const double tol = marginal_tolerance(c);
    if (h3 > tol) return Stability::Stable;
    if (std::abs(h3) <= tol) return Stability::Marginal;
    return Stability::Unstable;
}

inline double hopf_frequency(const CharPoly& c) {
    if (!(c.a3 != 0) || !(c.a1 / c.a3 > 0)) throw std::invalid_argument("a1/a3 must be positive");
    return std::sqrt(c.a1 / c.a3);
}

/// Eigenvalue with the largest real part; for mu = 0 the structural zero root is divided out.
inline cplx dominant_root(const CharPoly& c, const ModeIndex& mode) {
    if (mode.mu == 0.0) return poly_roots({c.a3, c.a2, c.a1}).front();
    return quartic_roots(c).front();
}

struct TauRange {
    double lo = 1e-2;
    double hi = 1e3;
    int scan_points = 200;
};

/// Smallest root of f on a logarithmic scan of range where accept(root) holds,
/// refined by bisection to relative width rel_width.
inline std::optional<double> first_sign_change(const std::function<double(double)>& f,
                                               const std::function<bool(double)>& accept,
                                               const TauRange& range, double rel_width = 1e-8) {
    if (!(range.lo > 0) || !(range.hi > range.lo) || range.scan_points < 2)
        throw std::invalid_argument("bad search range");
    const double llo = std::log(range.lo), lhi = std::log(range.hi);
    double x0 = range.lo, f0 = f(x0);
    for (int i = 1; i < range.scan_points; ++i) {
        const double x1 = std::exp(llo + (lhi - llo) * double(i) / double(range.scan_points - 1));
        const double f1 = f(x1);
        if (f0 == 0.0 && accept(x0)) return x0;
        if ((f0 < 0) != (f1 < 0)) {
            double a = x0, b = x1, fa = f0;
            while (b - a > rel_width * a) {
                const double m = 0.5 * (a + b);
                const double fm = f(m);
                if ((fm < 0) == (fa < 0)) { a = m; fa = fm; } else { b = m; }
            }
            const double root = 0.5 * (a + b);
            if (accept(root)) return root;
        }
        x0 = x1;
        f0 = f1;
    }
    return std::nullopt;
}

inline std::optional<double> tau_c_mode(const EquilibriumState& eq, const ModeIndex& mode, double eta,
                                        const TauRange& range = {}) {
    auto h3 = [&](double t) { return hurwitz_h3(char_coeffs(eq, mode, t, eta)); };
    auto pos = [&](double t) { return char_coeffs(eq, mode, t, eta).all_positive(); };
    return first_sign_change(h3, pos, range);
}

struct CriticalDelay {
    double tau = 0.0;
    ModeIndex mode;
};

/// Minimum of tau_c over modes 0 <= m <= n <= cutoff (the spectrum is symmetric in m, n).
inline std::optional<CriticalDelay> tau_c_star(const EquilibriumState& eq, double eta, double L,
                                               int cutoff = 20, const TauRange& range = {}) {
    if (cutoff < 1) throw std::invalid_argument("mode cutoff must be at least 1");
    std::optional<CriticalDelay> best;
    std::vector<char> seen(std::size_t(2 * cutoff * cutoff + 1), 0);
    for (int n = 0; n <= cutoff; ++n)
        for (int m = 0; m <= n; ++m) {
            if (m == 0 && n == 0) continue;
            const int k = m * m + n * n;
            if (seen[std::size_t(k)]) continue;
            seen[std::size_t(k)] = 1;
            const ModeIndex mode = ModeIndex::make(m, n, L);
            if (auto t = tau_c_mode(eq, mode, eta, range); t && (!best || *t < best->tau))
                best = CriticalDelay{*t, mode};
        }
    return best;
}

struct GrowthResult {
    cplx lambda;
    ModeIndex mode;
};

/// Dominant eigenvalue over all modes 0 <= m, n <= cutoff.
inline GrowthResult dominant_growth(const EquilibriumState& eq, double eta, double L, int cutoff,
                                    double tau) {
    GrowthResult best{cplx(-INFINITY, 0.0), {}};
    for (int n = 0; n <= cutoff; ++n)
        for (int m = 0; m <= n; ++m) {
            const ModeIndex mode = ModeIndex::make(m, n, L);
            const cplx r = dominant_root(char_coeffs(eq, mode, tau, eta), mode);
            if (r.real() > best.lambda.real()) best = {r, mode};
        }
    return best;
}

struct Transversality {
    double derivative = 0.0;
    bool conclusive = true;
};

inline double central_difference(const std::function<double(double)>& f, double x, double step) {
    return (f(x + step) - f(x - step)) / (2.0 * step);
}

inline Transversality transversality(const std::function<double(double)>& re_lambda, double tau_c,
                                     double step_frac = 1e-3) {
    Transversality t;
    t.derivative = central_difference(re_lambda, tau_c, step_frac * tau_c);
    t.conclusive = std::abs(t.derivative) >= 1e-6;
    return t;
}

inline Transversality transversality(const EquilibriumState& eq, double eta, const ModeIndex& mode,
                                     double tau_c, double step_frac = 1e-3) {
    auto re = [&](double t) { return dominant_root(char_coeffs(eq, mode, t, eta), mode).real(); };
    return transversality(re, tau_c, step_frac);
}

struct StabilityReport {
    ModeIndex mode;
    CharPoly coeffs;
    double hurwitz_h3 = 0.0;
    bool all_ai_positive = false;
    std::array<cplx, 4> roots{};
    cplx dominant;
    std::optional<double> tau_c;
    std::optional<double> omega0;
};

inline StabilityReport stability_report(const EquilibriumState& eq, const ModeIndex& mode, double tau,
                                        double eta, const TauRange& range = {}) {
    StabilityReport r;
    r.mode = mode;
    r.coeffs = char_coeffs(eq, mode, tau, eta);
    r.hurwitz_h3 = crimesim::hurwitz_h3(r.coeffs);
    r.all_ai_positive = r.coeffs.all_positive();
    const auto roots = quartic_roots(r.coeffs);
    std::copy(roots.begin(), roots.end(), r.roots.begin());
    r.dominant = r.roots[0];
    r.tau_c = tau_c_mode(eq, mode, eta, range);
    if (r.tau_c) r.omega0 = hopf_frequency(char_coeffs(eq, mode, *r.tau_c, eta));
    return r;
}

enum class SweepAxis { Eta, Kappa, Pi0 };

inline SweepAxis parse_axis(const std::string& s) {
    if (s == "eta") return SweepAxis::Eta;
    if (s == "kappa") return SweepAxis::Kappa;
    if (s == "pi0") return SweepAxis::Pi0;
    throw std::invalid_argument("unknown sweep axis: " + s);
}

struct SweepRow {
    double param = 0.0;
    std::optional<CriticalDelay> critical;
};

inline std::vector<SweepRow> phase_sweep(SweepAxis axis, const std::vector<double>& grid,
                                         const ModelParams& fixed, int cutoff = 20,
                                         const TauRange& range = {}) {
    if (!std::is_sorted(grid.begin(), grid.end()))
        throw std::invalid_argument("sweep grid must be ascending");
    std::vector<SweepRow> out;
    out.reserve(grid.size());
    for (double v : grid) {
        ModelParams p = fixed;
        switch (axis) {
            case SweepAxis::Eta: p.eta = v; break;
            case SweepAxis::Kappa: p.kappa = v; break;
            case SweepAxis::Pi0: p.pi0 = v; break;
        }
        out.push_back({v, tau_c_star(equilibrium_nondim(p), p.eta, p.L, cutoff, range)});
    }
    return out;
}

}  // namespace crimesim
