#pragma once

// 1D-1V Vlasov-Poisson on the periodic line, its moment decomposition and the
// split of the Vlasov right-hand side along that decomposition.

#include <map>
#include <vector>

#include "mpv/gridcore.hpp"
#include "mpv/momentdyn.hpp"

namespace mpv {

enum class FieldMode { SelfConsistent, Prescribed };

struct VlasovParams {
    double m = 1.0;
    double e = 1.0;
    FieldMode field_mode = FieldMode::SelfConsistent;
    /// Used when field_mode == Prescribed.
    GridFn prescribed_phi;
    /// Neutralizing background density; when unset the mean of rho is used.
    bool background_set = false;
    double background = 0.0;
    DiffScheme scheme = DiffScheme::Fourier;
    /// Worker threads for the advection sweeps; results do not depend on it.
    int threads = 1;

    void validate() const;
};

struct KineticState {
    PhaseFn f;
    GridFn phi;
    double t = 0.0;
};

/// phi'' = -e (rho - background), zero-mean phi.  Throws std::domain_error if
/// the source mean exceeds 1e-10 relative to max|rho|.
GridFn poisson_solve(const GridFn& rho, const VlasovParams& params);

/// The potential implied by the field mode: prescribed, or solved from f.
GridFn field_for(const PhaseFn& f, const VlasovParams& params);
KineticState make_state(PhaseFn f, const VlasovParams& params);

/// e phi' df/dp - (p/m) df/dq, using state.phi.
PhaseFn vlasov_rhs(const KineticState& state, const VlasovParams& params);

/// {f, h} = f_q h_p - h_q f_p.
PhaseFn coadjoint_vlasov(const PhaseFn& h, const PhaseFn& f, DiffScheme scheme = DiffScheme::Fourier);

/// Single-particle energy p^2/(2m) + e phi(q) on the phase grid.
PhaseFn particle_energy(const GridFn& phi, const PhaseGrid& g, const VlasovParams& params);

/// Strang-split semi-Lagrangian step.  Throws std::invalid_argument when
/// dt * Pmax / (m dq) >= 5 and NonFiniteState when f stops being finite.
KineticState step(const KineticState& state, const VlasovParams& params, double dt);

/// energy is  integral (p^2/2m) f + (1/2) integral phi'^2  in the self-consistent
/// mode and  integral (p^2/2m + e phi) f  with a prescribed potential.
struct Diagnostics {
    double mass;
    double l2;
    double energy;
};
Diagnostics diagnostics(const KineticState& state, const VlasovParams& params);

/// Raw recursion f~ = -d(p f)/dp, f_{k+1} = f~_k - k f_k, f_(m) = f_m / m!.
/// The j-th p-moment of f_(m) is C(j, m) times the j-th moment of f.
/// Throws std::domain_error if f does not decay at |p| = Pmax.
PhaseFn f_component(const PhaseFn& f, int m);

struct FDecomposition {
    /// c_m has the m-th moment of f and no other moment of order <= K.
    std::vector<PhaseFn> components;
    PhaseFn f_s;
    PhaseFn f_n;
    PhaseFn residual;
};
FDecomposition decompose_f(const PhaseFn& f, int K);

struct MatchedRates {
    PhaseFn s;
    PhaseFn n;
};

/// Splits sum_{k,l} {h_k, c_l} by the moment order it feeds: terms with l <= k
/// land in orders 0 and 1 and go to the s part.  `slots` maps k to dH/df_(k).
MatchedRates matched_vlasov_rhs(const std::vector<PhaseFn>& components, const std::map<int, PhaseFn>& slots,
                                DiffScheme scheme = DiffScheme::Fourier);

/// dH/df_(0) = e phi and dH/df_(2) = p^2 / (2m).
std::map<int, PhaseFn> plasma_slots(const GridFn& phi, const PhaseGrid& g, const VlasovParams& params);

/// Relative L2 mismatch per moment order 0..K between moments of vlasov_rhs
/// and lp_rhs under the Vlasov substitution.  Requires the prescribed field.
std::vector<double> poisson_map_check(const PhaseFn& f, const VlasovParams& params, int K);

/// Moments 0..K of f as a MomentState.
MomentState moments_of(const PhaseFn& f, int K);

}  // namespace mpv
