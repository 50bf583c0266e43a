#include "mpv/corpus.hpp"

#include <cmath>
#include <numbers>

namespace mpv {

Poly random_poly(Lcg64& rng, int dim, int max_degree, int max_terms) {
    Poly p(dim);
    const int terms = rng.uniform_int(0, max_terms);
    for (int t = 0; t < terms; ++t) {
        Exponent e{};
        const int deg = rng.uniform_int(0, max_degree);
        for (int i = 0; i < deg; ++i) ++e[rng.uniform_int(0, dim - 1)];
        const int num = rng.uniform_int(-3, 3);
        const int den = rng.uniform_int(1, 3);
        p.add_term(e, Rational(num, den));
    }
    return p;
}

SymTensor random_tensor(Lcg64& rng, int dim, int order, int max_degree) {
    SymTensor t(dim, order);
    for (const IndexSet& I : all_index_sets(dim, order)) t.set(I, random_poly(rng, dim, max_degree));
    return t;
}

GradedTensor random_graded(Lcg64& rng, int dim, int lo, int hi, int max_degree) {
    GradedTensor x(dim);
    for (int k = lo; k <= hi; ++k) x.add(random_tensor(rng, dim, k, max_degree));
    return x;
}

SPair random_spair(Lcg64& rng, int dim, int max_degree) {
    SymTensor sigma = random_tensor(rng, dim, 0, max_degree);
    SymTensor Y = random_tensor(rng, dim, 1, max_degree);
    return {sigma, Y};
}

NPart random_npart(Lcg64& rng, int dim, int max_order, int max_degree) {
    return NPart(random_graded(rng, dim, 2, max_order, max_degree));
}

double TrigSeries::value(double q) const {
    const double w = 2.0 * std::numbers::pi / L;
    double s = a[0];
    for (std::size_t k = 1; k < a.size(); ++k) s += a[k] * std::cos(w * k * q) + b[k] * std::sin(w * k * q);
    return s;
}

double TrigSeries::derivative(double q) const {
    const double w = 2.0 * std::numbers::pi / L;
    double s = 0.0;
    for (std::size_t k = 1; k < a.size(); ++k) s += w * k * (b[k] * std::cos(w * k * q) - a[k] * std::sin(w * k * q));
    return s;
}

TrigSeries random_trig_series(Lcg64& rng, double L, int modes) {
    TrigSeries t{std::vector<double>(modes + 1, 0.0), std::vector<double>(modes + 1, 0.0), L};
    for (int k = 0; k <= modes; ++k) {
        t.a[k] = rng.uniform(-1.0, 1.0);
        if (k > 0) t.b[k] = rng.uniform(-1.0, 1.0);
    }
    return t;
}

GridFn random_trig(Lcg64& rng, const SpatialGrid& g, int modes) {
    const TrigSeries t = random_trig_series(rng, g.L, modes);
    return GridFn::from(g, [&](double q) { return t.value(q); });
}

PhaseFn random_phase(Lcg64& rng, const PhaseGrid& g, int modes) {
    PhaseFn out(g);
    for (int term = 0; term < 2; ++term) {
        const TrigSeries t = random_trig_series(rng, g.spatial.L, modes);
        const double c1 = rng.uniform(-0.5, 0.5);
        const double c2 = rng.uniform(-0.2, 0.2);
        const double mu = rng.uniform(-0.3, 0.3);
        const double s = rng.uniform(0.8, 1.0);
        out += PhaseFn::from(g, [&](double q, double p) {
            const double x = (p - mu) / s;
            return t.value(q) * (1.0 + c1 * p + c2 * p * p) * std::exp(-0.5 * x * x);
        });
    }
    return out;
}

}  // namespace mpv
