#pragma once

// Seeded random instances for the identity suites.  Symbolic objects get small
// rational coefficients; grid data is band-limited in q and Gaussian-decaying
// in p so every discrete identity is tested away from truncation effects.

#include "mpv/gridcore.hpp"
#include "mpv/lcg.hpp"
#include "mpv/schouten.hpp"

namespace mpv {

/// Up to `max_terms` monomials of total degree <= max_degree, coefficients
/// n/d with |n| <= 3 and 1 <= d <= 3.  May be zero.
Poly random_poly(Lcg64& rng, int dim, int max_degree, int max_terms = 3);
SymTensor random_tensor(Lcg64& rng, int dim, int order, int max_degree);
/// Sum of random homogeneous parts of orders lo..hi.
GradedTensor random_graded(Lcg64& rng, int dim, int lo, int hi, int max_degree);
SPair random_spair(Lcg64& rng, int dim, int max_degree);
/// Orders 2..max_order.
NPart random_npart(Lcg64& rng, int dim, int max_order, int max_degree);

/// a_0 + sum_{k=1..modes} a_k cos(2 pi k q / L) + b_k sin(2 pi k q / L), |a|, |b| <= 1.
GridFn random_trig(Lcg64& rng, const SpatialGrid& g, int modes);
/// A random_trig draw kept in closed form, with its exact derivative.
struct TrigSeries {
    std::vector<double> a;
    std::vector<double> b;
    double L;
    double value(double q) const;
    double derivative(double q) const;
};
TrigSeries random_trig_series(Lcg64& rng, double L, int modes);

/// Sum of two separable terms trig(q) * (1 + c1 p + c2 p^2) exp(-(p - mu)^2 / (2 s^2))
/// with |mu| <= 0.3 and s in [0.8, 1].
PhaseFn random_phase(Lcg64& rng, const PhaseGrid& g, int modes);

}  // namespace mpv
