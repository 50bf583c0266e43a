#pragma once

// Momentum form of the Vlasov equation: one-form densities
//     Pi = Pi_q dq + Pi_p dp
// on the phase grid, with f = div(Pi#) and Pi# = Pi_p d/dq - Pi_q d/dp.
//
// Sign convention: the evolution is Pi' = -L_X Pi for the particle flow
// X = (p/m, -e phi'), which is the convention under which div(Pi#) moves
// exactly like the Vlasov density.

#include <algorithm>
#include <map>
#include <vector>

#include "mpv/gridcore.hpp"
#include "mpv/kinetic.hpp"
#include "mpv/phasealg.hpp"

namespace mpv {

struct OneFormGrid {
    PhaseFn Pi_q;
    PhaseFn Pi_p;

    OneFormGrid() = default;
    explicit OneFormGrid(const PhaseGrid& g) : Pi_q(g), Pi_p(g) {}
    OneFormGrid(PhaseFn q, PhaseFn p);

    const PhaseGrid& grid() const { return Pi_q.grid(); }
    bool all_finite() const { return Pi_q.all_finite() && Pi_p.all_finite(); }
    double max_abs() const { return std::max(Pi_q.max_abs(), Pi_p.max_abs()); }

    OneFormGrid& operator+=(const OneFormGrid& o);
    OneFormGrid& operator-=(const OneFormGrid& o);
    OneFormGrid& operator*=(double s);
    friend OneFormGrid operator+(OneFormGrid a, const OneFormGrid& b) { return a += b; }
    friend OneFormGrid operator-(OneFormGrid a, const OneFormGrid& b) { return a -= b; }
    friend OneFormGrid operator*(double s, OneFormGrid a) { return a *= s; }
};

/// A vector field vq d/dq + vp d/dp on the phase grid.
struct PhaseVector {
    PhaseFn vq;
    PhaseFn vp;

    PhaseVector& operator+=(const PhaseVector& o);
    friend PhaseVector operator+(PhaseVector a, const PhaseVector& b) { return a += b; }
};

/// Exact one-form with polynomial-in-p coefficients (1D only).
struct OneForm {
    PhasePoly Pi_q;
    PhasePoly Pi_p;
};

PhaseVector sharp(const OneFormGrid& Pi);
/// qcomp = Pi_p, pcomp = -Pi_q.
HamField sharp(const OneForm& Pi);

/// d(Pi_p)/dq - d(Pi_q)/dp.
PhaseFn div_sharp(const OneFormGrid& Pi, DiffScheme scheme = DiffScheme::Fourier);
PhasePoly div_sharp(const OneForm& Pi);

/// The particle flow of h: (dh/dp, -dh/dq).
PhaseVector hamiltonian_vector(const PhaseFn& h, DiffScheme scheme = DiffScheme::Fourier);

/// integral of Pi_q vq + Pi_p vp over the box.
double pair(const OneFormGrid& Pi, const PhaseVector& X);

/// <X_h, Pi> computed directly.  Throws std::runtime_error when it differs
/// from the divergence form  integral div(Pi#) h  by more than tol relative to
/// the size of the integrands.
double pairing_ham(const OneFormGrid& Pi, const PhaseFn& h, DiffScheme scheme = DiffScheme::Fourier,
                   double tol = 1e-8);
/// integral of div(Pi#) h.
double pairing_ham_div(const OneFormGrid& Pi, const PhaseFn& h, DiffScheme scheme = DiffScheme::Fourier);

/// -L_X Pi for a one-form density:  -(X.grad Pi_a + Pi_a div X + Pi_b d_a X^b).
OneFormGrid j_lp_apply(const OneFormGrid& Pi, const PhaseVector& X, DiffScheme scheme = DiffScheme::Fourier);

/// (p/m, -e phi').
PhaseVector vlasov_flow(const GridFn& phi, const PhaseGrid& g, const VlasovParams& params);

/// Potential for Pi: prescribed, or solved from the density of div(Pi#).
GridFn field_for(const OneFormGrid& Pi, const VlasovParams& params);

/// Pi_q' = -X(Pi_q) + e phi'' Pi_p,  Pi_p' = -X(Pi_p) - Pi_q / m.
OneFormGrid momvlasov_rhs(const OneFormGrid& Pi, const VlasovParams& params);
OneFormGrid momvlasov_rhs(const OneFormGrid& Pi, const GridFn& phi, const VlasovParams& params);

struct PiSplit {
    /// One-form whose divergence is the m-th moment component of div(Pi#).
    std::vector<OneFormGrid> components;
    OneFormGrid Pi_s;
    OneFormGrid Pi_n;
    /// Pi - Pi_s - Pi_n.
    OneFormGrid residual;
};

/// Gauge Pi_q = 0, Pi_p = zero-mean q-antiderivative of each divergence
/// component.  Throws std::domain_error if a component has a nonzero q-mean
/// at some momentum node.
PiSplit split_pi(const OneFormGrid& Pi, int K, DiffScheme scheme = DiffScheme::Fourier);

struct MatchedPiRates {
    OneFormGrid s;
    OneFormGrid n;
};

/// Sum over slots k and components l of j_lp_apply(Pi_(l), V_k), routed to s
/// when l <= k.  `slots` maps k to the field generated by dH/dPi_(k).
MatchedPiRates matched_momvlasov_rhs(const std::vector<OneFormGrid>& components,
                                     const std::map<int, PhaseVector>& slots,
                                     DiffScheme scheme = DiffScheme::Fourier);

/// Slot 0: (0, -e phi'),  slot 2: (p/m, 0).
std::map<int, PhaseVector> plasma_field_slots(const GridFn& phi, const PhaseGrid& g, const VlasovParams& params);

/// ||div#(momvlasov_rhs(Pi)) - vlasov_rhs(div#(Pi))|| / ||vlasov_rhs(div#(Pi))||, L2 over the box.
double intertwine_check(const OneFormGrid& Pi, const VlasovParams& params);

}  // namespace mpv
