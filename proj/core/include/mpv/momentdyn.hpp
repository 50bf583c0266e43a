#pragma once

// Kinetic moments on the periodic line and their coadjoint dynamics.
//
// In one dimension a moment of order m is a single grid function A_m, and a
// contravariant field of order k is a single grid function X_k.  Every
// coadjoint term has the shape
//     L_{X_k} A_j + div(X_k) A_j,   result order m = j - k + 1,
// which in 1D is  m A_j X_k' + k X_k A_j' + k X_k' A_j.

#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "mpv/gridcore.hpp"

namespace mpv {

/// Thrown by time steppers when the state picks up NaN or Inf.
class NonFiniteState : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Moments rho = A_0, M = A_1, A_2..A_K.
class MomentState {
public:
    MomentState(const SpatialGrid& g, int K);
    explicit MomentState(std::vector<GridFn> orders);

    const SpatialGrid& grid() const { return a_.front().grid(); }
    int K() const { return static_cast<int>(a_.size()) - 1; }
    GridFn& operator[](int m) { return a_.at(m); }
    const GridFn& operator[](int m) const { return a_.at(m); }
    GridFn& rho() { return a_[0]; }
    const GridFn& rho() const { return a_[0]; }
    GridFn& M() { return a_[1]; }
    const GridFn& M() const { return a_[1]; }
    const std::vector<GridFn>& orders() const { return a_; }

    bool all_finite() const;
    double max_abs() const;

    MomentState& operator+=(const MomentState& o);
    MomentState& operator*=(double s);
    friend MomentState operator+(MomentState a, const MomentState& b) { return a += b; }
    friend MomentState operator-(MomentState a, const MomentState& b) { return a += -1.0 * b; }
    friend MomentState operator*(double s, MomentState a) { return a *= s; }

private:
    std::vector<GridFn> a_;
};

/// (sigma, Y) sampled on a grid.
struct SField {
    GridFn sigma;
    GridFn Y;
    explicit SField(const SpatialGrid& g) : sigma(g), Y(g) {}
    SField(GridFn s, GridFn y) : sigma(std::move(s)), Y(std::move(y)) {}
};

/// Orders >= 2; a missing key is the zero field.
using NField = std::map<int, GridFn>;

/// (rho, M).
struct SDual {
    GridFn rho;
    GridFn M;
    bool all_finite() const { return rho.all_finite() && M.all_finite(); }
    SDual& operator+=(const SDual& o) {
        rho += o.rho;
        M += o.M;
        return *this;
    }
    SDual& operator*=(double s) {
        rho *= s;
        M *= s;
        return *this;
    }
    friend SDual operator+(SDual a, const SDual& b) { return a += b; }
    friend SDual operator*(double s, SDual a) { return a *= s; }
};

/// Orders >= 2; a missing key is the zero field.
using NDual = std::map<int, GridFn>;

/// X_0..X_n for a full contravariant field.
struct ContraField {
    std::vector<GridFn> X;
    int max_order() const { return static_cast<int>(X.size()) - 1; }
};

ContraField embed(const SField& s, const NField& n);
SDual s_part(const MomentState& S);
NDual n_part(const MomentState& S);
MomentState assemble(const SDual& s, const NDual& n, int K);

/// A coadjoint term that needed a moment above the truncation order.
struct DroppedTerm {
    int result_order;
    int field_order;
    int needed_order;
};

struct TruncationReport {
    std::vector<DroppedTerm> dropped;
    bool empty() const { return dropped.empty(); }
    std::string to_text() const;
};

// Tensor operators.  `A` is a moment of order m + k - 1, X a field of order k.
GridFn star(const GridFn& A, const GridFn& X, int m, DiffScheme scheme = DiffScheme::Fourier);
GridFn ast(const GridFn& X, const GridFn& A, int k, DiffScheme scheme = DiffScheme::Fourier);
GridFn gen_lie(const GridFn& X, const GridFn& A, int k, int m, DiffScheme scheme = DiffScheme::Fourier);
GridFn div_tensor(const GridFn& X, int k, DiffScheme scheme = DiffScheme::Fourier);

/// L_{X_k} A_j + div(X_k) A_j with result order m = j - k + 1.
GridFn coad_term(const GridFn& X, int k, const GridFn& A, int j, DiffScheme scheme = DiffScheme::Fourier);

/// Coadjoint action of a full field on a full moment state, truncated at S.K().
MomentState coad_full(const ContraField& X, const MomentState& S, TruncationReport* report = nullptr,
                      DiffScheme scheme = DiffScheme::Fourier);

/// Coadjoint action of (sigma, Y) on (rho, M).
SDual coad_s_on_sdual(const SField& s, const SDual& S, DiffScheme scheme = DiffScheme::Fourier);
/// Coadjoint action of n on n*, orders 2..K.
NDual coad_n_on_ndual(const NField& X, const NDual& A, int K, TruncationReport* report = nullptr,
                      DiffScheme scheme = DiffScheme::Fourier);

SDual dual_right(const SDual& S, const NField& Xn, DiffScheme scheme = DiffScheme::Fourier);
NDual dual_left(const SField& s, const NDual& A, int K, DiffScheme scheme = DiffScheme::Fourier);
NDual b_star(const SField& s, const SDual& S, DiffScheme scheme = DiffScheme::Fourier);
SDual a_star(const NField& Xn, const NDual& A, DiffScheme scheme = DiffScheme::Fourier);

MomentState matched_coadjoint(const SField& s, const NField& Xn, const MomentState& S,
                              TruncationReport* report = nullptr, DiffScheme scheme = DiffScheme::Fourier);

/// Variational derivatives of a Hamiltonian: dH/d(rho, M) and dH/dA_k, k >= 2.
struct Variational {
    SField s;
    NField n;
};

MomentState lp_rhs(const Variational& H, const MomentState& S, TruncationReport* report = nullptr,
                   DiffScheme scheme = DiffScheme::Fourier);

/// Internal energy w(rho) for the isentropic fluid.
struct FluidHamiltonian {
    std::function<double(double)> w;
    std::function<double(double)> dw;
    /// Use -M^2/(2 rho^2) in the Bernoulli function instead of -M^2/rho^2.
    bool bernoulli_half_factor = false;

    /// w = kappa rho^(gamma - 1) / (gamma - 1), pressure kappa rho^gamma.
    static FluidHamiltonian polytropic(double kappa, double gamma, bool half_factor = false);
    double enthalpy(double rho) const { return rho * dw(rho) + w(rho); }
    double pressure(double rho) const { return rho * rho * dw(rho); }
};

/// Velocity Y = M / rho and Bernoulli function sigma for the fluid Hamiltonian.
/// Throws std::domain_error on nonpositive density.
SField euler_variational(const FluidHamiltonian& H, const SDual& S);
SDual euler_rhs(const FluidHamiltonian& H, const SDual& S, DiffScheme scheme = DiffScheme::Fourier);

NDual n_rhs(const NField& H, const NDual& A, int K, TruncationReport* report = nullptr,
            DiffScheme scheme = DiffScheme::Fourier);

/// Classical four-stage Runge-Kutta.  Throws NonFiniteState if the result is
/// not finite and std::invalid_argument if dt <= 0.
template <class State, class Rhs>
State rk4_step(const Rhs& rhs, const State& y, double dt) {
    if (!(dt > 0.0)) throw std::invalid_argument("rk4_step: dt must be positive");
    const State k1 = rhs(y);
    const State k2 = rhs(y + (0.5 * dt) * k1);
    const State k3 = rhs(y + (0.5 * dt) * k2);
    const State k4 = rhs(y + dt * k3);
    State out = y + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (!out.all_finite()) throw NonFiniteState("rk4_step: state is no longer finite");
    return out;
}

}  // namespace mpv
