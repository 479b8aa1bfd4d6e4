#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include <Eigen/Sparse>

#include "field.hpp"

namespace crimesim {

using SpMat = Eigen::SparseMatrix<double, Eigen::RowMajor>;
using Vec = Eigen::VectorXd;

/// Structured quadrilateral mesh of a square; nodes follow Grid ordering.
struct Mesh {
    Grid grid;

    explicit Mesh(const Grid& g) : grid(g) {}
    static Mesh square(double L, double h) { return Mesh(Grid::square(L, h)); }

    double L() const { return grid.side(); }
    double h() const { return grid.h; }
    std::size_t nodes() const { return grid.size(); }
    std::size_t cells_per_axis() const { return grid.n - 1; }
    std::size_t cells() const { return cells_per_axis() * cells_per_axis(); }

    /// Local node order (0,0), (1,0), (0,1), (1,1).
    std::array<std::size_t, 4> cell_nodes(std::size_t cx, std::size_t cy) const {
        const std::size_t n = grid.n, i = cy * n + cx;
        return {i, i + 1, i + n, i + n + 1};
    }

    bool on_boundary(std::size_t i) const {
        const std::size_t ix = i % grid.n, iy = i / grid.n;
        return ix == 0 || iy == 0 || ix == grid.n - 1 || iy == grid.n - 1;
    }
};

/// Q1 element tables at the 2x2 Gauss points.
struct Q1Reference {
    std::array<std::array<double, 4>, 4> phi{};  // [q][a]
    std::array<std::array<double, 4>, 4> dx{};   // scaled by 1/h
    std::array<std::array<double, 4>, 4> dy{};
    double jw = 0.0;                             // quadrature weight x Jacobian
    std::array<std::array<double, 4>, 4> mass{};
    std::array<std::array<double, 4>, 4> stiff{};
    std::array<std::array<std::array<double, 4>, 4>, 4> triple{};  // [c][a][b] = int phi_c phi_a phi_b

    explicit Q1Reference(double h) {
        const double g = 0.5 / std::sqrt(3.0);
        const std::array<double, 2> pts{0.5 - g, 0.5 + g};
        jw = 0.25 * h * h;
        for (int qy = 0; qy < 2; ++qy)
            for (int qx = 0; qx < 2; ++qx) {
                const int q = qy * 2 + qx;
                const double x = pts[std::size_t(qx)], y = pts[std::size_t(qy)];
                phi[q] = {(1 - x) * (1 - y), x * (1 - y), (1 - x) * y, x * y};
                dx[q] = {-(1 - y) / h, (1 - y) / h, -y / h, y / h};
                dy[q] = {-(1 - x) / h, -x / h, (1 - x) / h, x / h};
            }
        for (int a = 0; a < 4; ++a)
            for (int b = 0; b < 4; ++b) {
                double m = 0, k = 0;
                for (int q = 0; q < 4; ++q) {
                    m += jw * phi[q][a] * phi[q][b];
                    k += jw * (dx[q][a] * dx[q][b] + dy[q][a] * dy[q][b]);
                    for (int c = 0; c < 4; ++c) triple[c][a][b] += jw * phi[q][c] * phi[q][a] * phi[q][b];
                }
                mass[a][b] = m;
                stiff[a][b] = k;
            }
    }
};

/// Linear combination c_m M + c_k K + c_n N(w) - c_d D(W), where
///   N(w)_ij = int w phi_j phi_i,   D(W)_ij = int (2 grad W / W) . grad phi_i phi_j.
struct OperatorTerms {
    double mass = 0.0;
    double stiffness = 0.0;
    double reaction = 0.0;
    const std::vector<double>* reaction_weight = nullptr;
    double drift = 0.0;
    const std::vector<double>* drift_potential = nullptr;
};

/// Assembles Q1 operators into matrices sharing one sparsity pattern.
class Assembler {
public:
    explicit Assembler(const Mesh& mesh) : mesh_(mesh), ref_(mesh.h()) {
        const std::size_t N = mesh.nodes();
        std::vector<Eigen::Triplet<double>> trip;
        trip.reserve(mesh.cells() * 16);
        for (std::size_t cy = 0; cy < mesh.cells_per_axis(); ++cy)
            for (std::size_t cx = 0; cx < mesh.cells_per_axis(); ++cx) {
                const auto nd = mesh.cell_nodes(cx, cy);
                for (int a = 0; a < 4; ++a)
                    for (int b = 0; b < 4; ++b)
                        trip.emplace_back(int(nd[std::size_t(a)]), int(nd[std::size_t(b)]), 1.0);
            }
        pattern_.resize(int(N), int(N));
        pattern_.setFromTriplets(trip.begin(), trip.end());
        pattern_.makeCompressed();
        slots_.resize(mesh.cells() * 16);
        std::size_t k = 0;
        for (std::size_t cy = 0; cy < mesh.cells_per_axis(); ++cy)
            for (std::size_t cx = 0; cx < mesh.cells_per_axis(); ++cx) {
                const auto nd = mesh.cell_nodes(cx, cy);
                for (int a = 0; a < 4; ++a)
                    for (int b = 0; b < 4; ++b)
                        slots_[k++] = int(&pattern_.coeffRef(int(nd[std::size_t(a)]), int(nd[std::size_t(b)])) -
                                          pattern_.valuePtr());
            }
    }

    const Mesh& mesh() const { return mesh_; }
    const Q1Reference& reference() const { return ref_; }

    /// Zero matrix with the shared pattern.
    SpMat empty() const {
        SpMat m = pattern_;
        std::fill(m.valuePtr(), m.valuePtr() + m.nonZeros(), 0.0);
        return m;
    }

    void assemble(const OperatorTerms& t, SpMat& out) const {
        if (out.nonZeros() != pattern_.nonZeros()) out = empty();
        double* val = out.valuePtr();
        std::fill(val, val + out.nonZeros(), 0.0);
        const std::size_t N = mesh_.nodes();
        if (t.reaction_weight && t.reaction_weight->size() != N)
            throw std::invalid_argument("reaction weight has wrong size");
        if (t.drift_potential) {
            if (t.drift_potential->size() != N) throw std::invalid_argument("drift potential has wrong size");
            for (double w : *t.drift_potential)
                if (!(w > 0)) throw std::domain_error("drift potential must be strictly positive");
        }
        const bool react = t.reaction != 0.0 && t.reaction_weight;
        const bool drift = t.drift != 0.0 && t.drift_potential;
        std::array<std::array<double, 4>, 4> base{};
        for (int a = 0; a < 4; ++a)
            for (int b = 0; b < 4; ++b)
                base[a][b] = t.mass * ref_.mass[a][b] + t.stiffness * ref_.stiff[a][b];

        std::size_t k = 0;
        for (std::size_t cy = 0; cy < mesh_.cells_per_axis(); ++cy)
            for (std::size_t cx = 0; cx < mesh_.cells_per_axis(); ++cx) {
                const auto nd = mesh_.cell_nodes(cx, cy);
                auto E = base;
                if (react) {
                    const auto& w = *t.reaction_weight;
                    for (int c = 0; c < 4; ++c) {
                        const double wc = t.reaction * w[nd[std::size_t(c)]];
                        for (int a = 0; a < 4; ++a)
                            for (int b = 0; b < 4; ++b) E[a][b] += wc * ref_.triple[c][a][b];
                    }
                }
                if (drift) {
                    const auto& W = *t.drift_potential;
                    const std::array<double, 4> wn{W[nd[0]], W[nd[1]], W[nd[2]], W[nd[3]]};
                    for (int q = 0; q < 4; ++q) {
                        double w = 0, gx = 0, gy = 0;
                        for (int c = 0; c < 4; ++c) {
                            w += ref_.phi[q][c] * wn[std::size_t(c)];
                            gx += ref_.dx[q][c] * wn[std::size_t(c)];
                            gy += ref_.dy[q][c] * wn[std::size_t(c)];
                        }
                        const double s = -t.drift * ref_.jw * 2.0 / w;
                        gx *= s;
                        gy *= s;
                        for (int a = 0; a < 4; ++a) {
                            const double ga = gx * ref_.dx[q][a] + gy * ref_.dy[q][a];
                            for (int b = 0; b < 4; ++b) E[a][b] += ga * ref_.phi[q][b];
                        }
                    }
                }
                for (int a = 0; a < 4; ++a)
                    for (int b = 0; b < 4; ++b) val[slots_[k++]] += E[a][b];
            }
    }

    SpMat assemble(const OperatorTerms& t) const {
        SpMat m = empty();
        assemble(t, m);
        return m;
    }

    SpMat mass() const { return assemble({.mass = 1.0}); }
    SpMat stiffness() const { return assemble({.stiffness = 1.0}); }
    SpMat weighted_mass(const std::vector<double>& w) const {
        return assemble({.reaction = 1.0, .reaction_weight = &w});
    }
    /// D(W) with the sign convention of OperatorTerms (positive coefficient).
    SpMat drift(const std::vector<double>& W) const {
        return assemble({.drift = -1.0, .drift_potential = &W});
    }

private:
    Mesh mesh_;
    Q1Reference ref_;
    SpMat pattern_;
    std::vector<int> slots_;
};

}  // namespace crimesim
