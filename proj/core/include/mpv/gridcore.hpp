#pragma once

// Periodic 1D spatial grid, truncated momentum grid, discrete derivatives and
// quadratures.  Phase-space samples are stored q-major: value(j, i) sits at
// j * Np + i with q_j spatial and p_i momentum.

#include <functional>
#include <ostream>
#include <span>
#include <vector>

#include "mpv/phasealg.hpp"
#include "mpv/schouten.hpp"

namespace mpv {

enum class DiffScheme { FD4, Fourier };

const char* to_string(DiffScheme s);

struct SpatialGrid {
    double L = 1.0;
    int Nq = 64;

    SpatialGrid() = default;
    SpatialGrid(double L, int Nq);

    double dq() const { return L / Nq; }
    double node(int j) const { return j * L / Nq; }
    friend bool operator==(const SpatialGrid&, const SpatialGrid&) = default;
};

struct PhaseGrid {
    SpatialGrid spatial;
    double Pmax = 8.0;
    int Np = 256;

    PhaseGrid() = default;
    PhaseGrid(SpatialGrid s, double Pmax, int Np);

    int Nq() const { return spatial.Nq; }
    double dp() const { return 2.0 * Pmax / (Np - 1); }
    double p(int i) const { return -Pmax + i * dp(); }
    double q(int j) const { return spatial.node(j); }
    std::size_t size() const { return static_cast<std::size_t>(spatial.Nq) * Np; }
    friend bool operator==(const PhaseGrid&, const PhaseGrid&) = default;
};

/// Samples on a SpatialGrid.
class GridFn {
public:
    GridFn() = default;
    explicit GridFn(const SpatialGrid& g, double fill = 0.0);
    GridFn(const SpatialGrid& g, std::vector<double> values);
    static GridFn from(const SpatialGrid& g, const std::function<double(double)>& f);

    const SpatialGrid& grid() const { return grid_; }
    int size() const { return static_cast<int>(v_.size()); }
    double& operator[](int j) { return v_[j]; }
    double operator[](int j) const { return v_[j]; }
    std::span<double> values() { return v_; }
    std::span<const double> values() const { return v_; }
    double max_abs() const;
    bool all_finite() const;

    GridFn& operator+=(const GridFn& o);
    GridFn& operator-=(const GridFn& o);
    GridFn& operator*=(const GridFn& o);
    GridFn& operator*=(double s);
    friend GridFn operator+(GridFn a, const GridFn& b) { return a += b; }
    friend GridFn operator-(GridFn a, const GridFn& b) { return a -= b; }
    friend GridFn operator*(GridFn a, const GridFn& b) { return a *= b; }
    friend GridFn operator*(double s, GridFn a) { return a *= s; }
    friend GridFn operator*(GridFn a, double s) { return a *= s; }
    GridFn operator-() const { return -1.0 * *this; }

private:
    SpatialGrid grid_;
    std::vector<double> v_;
};

/// Samples on a PhaseGrid.
class PhaseFn {
public:
    PhaseFn() = default;
    explicit PhaseFn(const PhaseGrid& g, double fill = 0.0);
    static PhaseFn from(const PhaseGrid& g, const std::function<double(double, double)>& f);
    /// q-independent values g(p) or p-independent values a(q) broadcast to the phase grid.
    static PhaseFn from_p(const PhaseGrid& g, const std::function<double(double)>& f);
    static PhaseFn from_q(const PhaseGrid& g, const GridFn& a);

    const PhaseGrid& grid() const { return grid_; }
    std::size_t size() const { return v_.size(); }
    double& at(int j, int i) { return v_[static_cast<std::size_t>(j) * grid_.Np + i]; }
    double at(int j, int i) const { return v_[static_cast<std::size_t>(j) * grid_.Np + i]; }
    std::span<double> values() { return v_; }
    std::span<const double> values() const { return v_; }
    std::span<double> row(int j) { return {v_.data() + static_cast<std::size_t>(j) * grid_.Np, std::size_t(grid_.Np)}; }
    std::span<const double> row(int j) const {
        return {v_.data() + static_cast<std::size_t>(j) * grid_.Np, std::size_t(grid_.Np)};
    }
    double max_abs() const;
    bool all_finite() const;

    PhaseFn& operator+=(const PhaseFn& o);
    PhaseFn& operator-=(const PhaseFn& o);
    PhaseFn& operator*=(const PhaseFn& o);
    PhaseFn& operator*=(double s);
    friend PhaseFn operator+(PhaseFn a, const PhaseFn& b) { return a += b; }
    friend PhaseFn operator-(PhaseFn a, const PhaseFn& b) { return a -= b; }
    friend PhaseFn operator*(PhaseFn a, const PhaseFn& b) { return a *= b; }
    friend PhaseFn operator*(double s, PhaseFn a) { return a *= s; }
    friend PhaseFn operator*(PhaseFn a, double s) { return a *= s; }
    PhaseFn operator-() const { return -1.0 * *this; }

private:
    PhaseGrid grid_;
    std::vector<double> v_;
};

GridFn ddq(const GridFn& f, DiffScheme scheme = DiffScheme::Fourier);
PhaseFn ddq(const PhaseFn& f, DiffScheme scheme = DiffScheme::Fourier);
/// Fourth-order centred differences with one-sided closures at |p| = Pmax.
/// Throws std::invalid_argument for DiffScheme::Fourier.
PhaseFn ddp(const PhaseFn& f, DiffScheme scheme = DiffScheme::FD4);
/// Minus the trapezoid-weighted adjoint of an eighth-order bounded difference.
/// Discrete p-moments satisfy sum w p^k D f = -k sum w p^(k-1) f for k <= 8.
PhaseFn ddp_conservative(const PhaseFn& f);

/// Zero-mean antiderivative in q (Fourier).  Throws std::domain_error if the
/// mean of f exceeds tol * max|f|.
GridFn antiderivative_q(const GridFn& f, double tol = 1e-10);

double quad_q(const GridFn& f);
/// Trapezoid weights in p.
std::vector<double> trapezoid_weights(const PhaseGrid& g);
double quad_p(const PhaseFn& f, int j);
double quad_qp(const PhaseFn& f);
/// q -> integral of p^m f dp.
GridFn moment_quad(const PhaseFn& f, int m);

/// sum_k quad_q(A_k * X_k); throws std::invalid_argument on length mismatch.
double pairing(const std::vector<GridFn>& A, const std::vector<GridFn>& X);
double pairing(const std::vector<GridFn>& A, const GradedTensor& X);

/// Pointwise evaluation of 1D symbolic objects; throws std::invalid_argument if dim != 1.
GridFn sample(const Poly& a, const SpatialGrid& g);
GridFn sample(const SymTensor& X, const SpatialGrid& g);
PhaseFn sample(const PhasePoly& h, const PhaseGrid& g);

void write_csv(std::ostream& os, const GridFn& f);
void write_csv(std::ostream& os, const PhaseFn& f);

}  // namespace mpv
