#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "mpv/corpus.hpp"
#include "mpv/momvlasov.hpp"

using namespace mpv;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double maxwell(double p) { return std::exp(-p * p / 2) / std::sqrt(kTwoPi); }

PhaseGrid grid(int Nq, int Np) { return PhaseGrid(SpatialGrid(kTwoPi, Nq), 8.0, Np); }

Poly q1() { return Poly::variable(1, 1); }
PhasePoly P(const Poly& c, int deg) { return PhasePoly::monomial(c, IndexSet(deg, 1)); }
PhasePoly Q(const Poly& c) { return PhasePoly::from_q(c); }

double l2(const PhaseFn& f) { return std::sqrt(quad_qp(f * f)); }

VlasovParams prescribed(const GridFn& phi) {
    VlasovParams p;
    p.field_mode = FieldMode::Prescribed;
    p.prescribed_phi = phi;
    return p;
}

/// Zero-mean trigonometric coefficients times a Maxwellian in p.
OneFormGrid smooth_pi(Lcg64& rng, const PhaseGrid& g) {
    TrigSeries a = random_trig_series(rng, g.spatial.L, 3), b = random_trig_series(rng, g.spatial.L, 3);
    a.a[0] = 0.0;
    b.a[0] = 0.0;
    const double c1 = rng.uniform(-0.5, 0.5);
    return {PhaseFn::from(g, [&](double q, double p) { return a.value(q) * maxwell(p); }),
            PhaseFn::from(g, [&](double q, double p) { return b.value(q) * (1 + c1 * p) * maxwell(p); })};
}

}  // namespace

TEST(Symbolic, SharpAndDivergence) {
    const OneForm q_dp{PhasePoly(1), Q(q1())};
    EXPECT_EQ(div_sharp(q_dp), Q(Poly::constant(1, 1)));
    const OneForm p_dq{P(Poly::constant(1, 1), 1), PhasePoly(1)};
    EXPECT_EQ(div_sharp(p_dq), Q(Poly::constant(1, -1)));

    const HamField s = sharp(p_dq);
    EXPECT_TRUE(s.qcomp[0].is_zero());
    EXPECT_EQ(s.pcomp[0], -P(Poly::constant(1, 1), 1));

    const OneForm two_d{PhasePoly(2), PhasePoly(2)};
    EXPECT_THROW(sharp(two_d), std::invalid_argument);
    EXPECT_THROW(div_sharp(two_d), std::invalid_argument);
}

TEST(Symbolic, ExactFormsAreDivergenceFree) {
    Lcg64 rng(91);
    for (int i = 0; i < 30; ++i) {
        PhasePoly g(1);
        for (int d = 0; d <= 3; ++d) g += P(random_poly(rng, 1, 3), d);
        EXPECT_TRUE(div_sharp(OneForm{partial_q(g, 1), partial_p(g, 1)}).is_zero());
    }
}

TEST(Grid, SharpSwapsComponents) {
    const PhaseGrid g = grid(8, 32);
    Lcg64 rng(92);
    const OneFormGrid Pi{random_phase(rng, g, 2), random_phase(rng, g, 2)};
    const PhaseVector v = sharp(Pi);
    EXPECT_EQ((v.vq - Pi.Pi_p).max_abs(), 0.0);
    EXPECT_EQ((v.vp + Pi.Pi_q).max_abs(), 0.0);
}

TEST(Pairing, KineticEnergyAgainstDqForm) {
    const PhaseGrid g = grid(16, 256);
    const PhaseFn a = PhaseFn::from(g, [](double q, double p) { return (1 + std::cos(q)) * maxwell(p); });
    const OneFormGrid Pi{a, PhaseFn(g)};
    const PhaseFn h = PhaseFn::from_p(g, [](double p) { return p * p / 2; });
    const double direct = pair(Pi, hamiltonian_vector(h));
    EXPECT_NEAR(direct, 0.0, 1e-12);
    EXPECT_NEAR(pairing_ham(Pi, h), pairing_ham_div(Pi, h), 1e-10);

    const OneFormGrid Pi2{PhaseFn::from(g, [](double q, double p) { return (1 + std::cos(q)) * p * maxwell(p); }), PhaseFn(g)};
    // <X_h, Pi> = integral Pi_q h_p = integral (1 + cos q) p^2 M dp dq = 2 pi.
    EXPECT_NEAR(pairing_ham(Pi2, h), kTwoPi, 1e-8);
    EXPECT_NEAR(pairing_ham_div(Pi2, h), kTwoPi, 1e-8);
}

TEST(Pairing, ExactFormsPairToZero) {
    const PhaseGrid g = grid(32, 256);
    Lcg64 rng(93);
    for (int i = 0; i < 10; ++i) {
        const PhaseFn phi = random_phase(rng, g, 3);
        const OneFormGrid Pi{ddq(phi), ddp(phi)};
        const PhaseFn h = PhaseFn::from(g, [](double q, double p) { return p * p / 2 + 0.3 * std::sin(q) + 0.1 * p * std::cos(q); });
        const double scale = l2(Pi.Pi_q) + l2(Pi.Pi_p);
        EXPECT_LT(std::abs(pairing_ham_div(Pi, h)), 1e-8 * scale);
        EXPECT_LT(std::abs(pair(Pi, hamiltonian_vector(h))), 1e-8 * scale);
    }
}

TEST(Pairing, BoundaryLeakThrows) {
    const PhaseGrid g = grid(8, 64);
    const OneFormGrid Pi{PhaseFn::from_p(g, [](double p) { return p; }), PhaseFn(g)};
    const PhaseFn h = PhaseFn::from_p(g, [](double p) { return p * p / 2; });
    EXPECT_THROW(pairing_ham(Pi, h), std::runtime_error);
}

TEST(JLp, ZeroInputsGiveZero) {
    const PhaseGrid g = grid(8, 32);
    Lcg64 rng(94);
    const OneFormGrid Pi{random_phase(rng, g, 2), random_phase(rng, g, 2)};
    EXPECT_EQ(j_lp_apply(Pi, PhaseVector{PhaseFn(g), PhaseFn(g)}).max_abs(), 0.0);
    const PhaseVector X{random_phase(rng, g, 2), random_phase(rng, g, 2)};
    EXPECT_EQ(j_lp_apply(OneFormGrid(g), X).max_abs(), 0.0);
}

TEST(JLp, AdjointToVectorFieldBracketOnPolynomialFields) {
    const PhaseGrid g = grid(32, 256);
    Lcg64 rng(95);
    // Fields X_h, X_k with h, k quadratic in p, so every p-derivative is exact.
    for (int i = 0; i < 10; ++i) {
        std::vector<TrigSeries> hs, ks;
        for (int d = 0; d <= 2; ++d) {
            hs.push_back(random_trig_series(rng, kTwoPi, 2));
            ks.push_back(random_trig_series(rng, kTwoPi, 2));
        }
        auto field = [&](const std::vector<TrigSeries>& c) {
            return PhaseVector{PhaseFn::from(g, [&](double q, double p) { return c[1].value(q) + 2 * p * c[2].value(q); }),
                               PhaseFn::from(g, [&](double q, double p) {
                                   return -(c[0].derivative(q) + p * c[1].derivative(q) + p * p * c[2].derivative(q));
                               })};
        };
        const PhaseVector X = field(hs), Y = field(ks);
        const OneFormGrid Pi = smooth_pi(rng, g);
        // [X, Y] by direct differentiation; coefficients are polynomial of degree <= 2 in p.
        const PhaseVector br{X.vq * ddq(Y.vq) + X.vp * ddp(Y.vq) - Y.vq * ddq(X.vq) - Y.vp * ddp(X.vq),
                             X.vq * ddq(Y.vp) + X.vp * ddp(Y.vp) - Y.vq * ddq(X.vp) - Y.vp * ddp(X.vp)};
        const double lhs = pair(j_lp_apply(Pi, X), Y);
        const double rhs = pair(Pi, br);
        EXPECT_NEAR(lhs, rhs, 1e-8 * std::max(1.0, std::abs(rhs))) << i;
    }
}

TEST(MomVlasov, ConstantFormAccelerates) {
    const PhaseGrid g = grid(8, 32);
    const VlasovParams p = prescribed(GridFn(g.spatial));
    const OneFormGrid Pi{PhaseFn(g, 0.7), PhaseFn(g, -0.2)};
    const OneFormGrid r = momvlasov_rhs(Pi, p);
    EXPECT_LT(r.Pi_q.max_abs(), 1e-13);
    EXPECT_LT((r.Pi_p - PhaseFn(g, -0.7)).max_abs(), 1e-13);
}

TEST(MomVlasov, EqualsLieDerivativeAlongParticleFlow) {
    const PhaseGrid g = grid(32, 128);
    Lcg64 rng(96);
    for (int i = 0; i < 10; ++i) {
        const GridFn phi = random_trig(rng, g.spatial, 3);
        VlasovParams p = prescribed(phi);
        p.m = 1.5;
        p.e = -0.7;
        const OneFormGrid Pi = smooth_pi(rng, g);
        const OneFormGrid a = momvlasov_rhs(Pi, p);
        const OneFormGrid b = j_lp_apply(Pi, vlasov_flow(phi, g, p));
        EXPECT_LT((a - b).max_abs(), 1e-11 * std::max(1.0, a.max_abs()));
    }
}

TEST(SplitPi, ReconstructsAndSeparatesMoments) {
    const PhaseGrid g = grid(32, 256);
    Lcg64 rng(97);
    const OneFormGrid Pi = smooth_pi(rng, g);
    const int K = 4;
    const PiSplit sp = split_pi(Pi, K);
    ASSERT_EQ(sp.components.size(), std::size_t(K + 1));
    const FDecomposition dec = decompose_f(div_sharp(Pi), K);
    EXPECT_LT((div_sharp(sp.Pi_s) - dec.f_s).max_abs(), 1e-10);
    EXPECT_LT((div_sharp(sp.Pi_n) - dec.f_n).max_abs(), 1e-10);
    EXPECT_LT((sp.Pi_s + sp.Pi_n + sp.residual - Pi).max_abs(), 1e-14);
    for (int m = 0; m <= K; ++m) {
        const PhaseFn f = div_sharp(sp.components[m]);
        EXPECT_EQ(sp.components[m].Pi_q.max_abs(), 0.0);
        for (int j = 0; j <= K; ++j) {
            if (j == m) continue;
            EXPECT_LT(moment_quad(f, j).max_abs(), 1e-8) << "m=" << m << " j=" << j;
        }
    }
}

TEST(SplitPi, NonzeroMeanThrows) {
    const PhaseGrid g = grid(16, 128);
    const OneFormGrid Pi{PhaseFn::from_p(g, [](double p) { return p * maxwell(p); }), PhaseFn(g)};
    EXPECT_THROW(split_pi(Pi, 3), std::domain_error);
}

TEST(MatchedPi, SplitSumsToUnsplitRate) {
    const PhaseGrid g = grid(32, 256);
    Lcg64 rng(98);
    const GridFn phi = random_trig(rng, g.spatial, 2);
    const VlasovParams p = prescribed(phi);
    const OneFormGrid Pi = smooth_pi(rng, g);
    const PiSplit sp = split_pi(Pi, 4);
    const MatchedPiRates mr = matched_momvlasov_rhs(sp.components, plasma_field_slots(phi, g, p));
    const PhaseFn full = div_sharp(momvlasov_rhs(sp.Pi_s + sp.Pi_n, phi, p));
    EXPECT_LE(l2(div_sharp(mr.s + mr.n) - full) / l2(full), 1e-6);
    EXPECT_THROW(matched_momvlasov_rhs({}, plasma_field_slots(phi, g, p)), std::invalid_argument);
}

TEST(Intertwine, ZeroFormIsExact) {
    const PhaseGrid g = grid(16, 64);
    EXPECT_EQ(intertwine_check(OneFormGrid(g), prescribed(GridFn::from(g.spatial, [](double q) { return std::sin(q); }))), 0.0);
}

TEST(Intertwine, ErrorConvergesAtFourthOrder) {
    Lcg64 rng(99);
    const TrigSeries phi_s = random_trig_series(rng, kTwoPi, 2);
    std::vector<double> err;
    for (int s : {1, 2}) {
        const PhaseGrid g = grid(32 * s, 128 * s);
        Lcg64 data(100);
        const OneFormGrid Pi = smooth_pi(data, g);
        err.push_back(intertwine_check(Pi, prescribed(GridFn::from(g.spatial, [&](double q) { return 0.2 * phi_s.value(q); }))));
    }
    EXPECT_LT(err[1], 1e-5);
    EXPECT_GE(std::log2(err[0] / err[1]), 3.0);
}

TEST(Intertwine, SelfConsistentFieldFromDivergence) {
    const PhaseGrid g = grid(32, 256);
    Lcg64 rng(101);
    const OneFormGrid Pi = smooth_pi(rng, g);
    const VlasovParams p;
    const GridFn rho = moment_quad(div_sharp(Pi), 0);
    EXPECT_LT((field_for(Pi, p) - poisson_solve(rho, p)).max_abs(), 1e-12);
}
