#include <gtest/gtest.h>

#include "mpv/corpus.hpp"
#include "mpv/phasealg.hpp"

using namespace mpv;

namespace {

Poly q1() { return Poly::variable(1, 1); }
Poly k(const Rational& v) { return Poly::constant(1, v); }
PhasePoly P(const Poly& c, int deg) { return PhasePoly::monomial(c, IndexSet(deg, 1)); }

SymTensor tensor(int order, const Poly& c) {
    SymTensor t(c.dim(), order);
    t.set(IndexSet(order, 1), c);
    return t;
}

// 1D phase polynomial as an ordinary polynomial in (q, p).
Poly as_qp(const PhasePoly& h) {
    Poly out(2);
    for (const auto& [I, c] : h.terms()) {
        for (const auto& [e, v] : c.terms()) {
            Exponent x{};
            x[0] = e[0];
            x[1] = static_cast<std::uint8_t>(I.size());
            out.add_term(x, v);
        }
    }
    return out;
}

Poly oracle_bracket(const PhasePoly& h, const PhasePoly& g) {
    const Poly a = as_qp(h);
    const Poly b = as_qp(g);
    return partial(a, 1) * partial(b, 2) - partial(b, 1) * partial(a, 2);
}

}  // namespace

TEST(Kappa, Examples) {
    EXPECT_EQ(kappa(tensor(0, q1())), PhasePoly::from_q(q1()));
    EXPECT_EQ(kappa(tensor(2, q1())), P(q1(), 2));
}

TEST(Kappa, InverseRoundTrip) {
    Lcg64 rng(31);
    for (int i = 0; i < 100; ++i) {
        const GradedTensor X = random_graded(rng, 1 + i % 3, 0, 4, 3);
        EXPECT_EQ(kappa_inv(kappa(X)), X);
    }
}

TEST(Kappa, MultiplicityInTwoDimensions) {
    SymTensor t(2, 2);
    t.set({1, 2}, Poly::constant(2, 1));
    const PhasePoly h = kappa(t);
    EXPECT_EQ(h.coeff({1, 2}), Poly::constant(2, 2));
}

TEST(CanonicalBracket, Examples) {
    EXPECT_EQ(canonical_bracket(PhasePoly::from_q(q1()), PhasePoly::momentum(1, 1)), PhasePoly::from_q(k(1)));
    const PhasePoly h = P(q1(), 2) + PhasePoly::from_q(q1() * q1());
    EXPECT_TRUE(canonical_bracket(h, h).is_zero());
    const PhasePoly r = canonical_bracket(P(q1(), 2), PhasePoly::from_q(q1() * q1()));
    EXPECT_EQ(r, P(Rational(-4) * q1() * q1(), 1));
    EXPECT_EQ(as_qp(r), oracle_bracket(P(q1(), 2), PhasePoly::from_q(q1() * q1())));
}

TEST(DecomposePhase, Examples) {
    const PhaseSplit a = decompose_phase(PhasePoly::from_q(q1()));
    EXPECT_EQ(a.s, PhasePoly::from_q(q1()));
    EXPECT_TRUE(a.n.is_zero());

    const PhasePoly energy = P(k(Rational(1, 2)), 2) + PhasePoly::from_q(q1());
    const PhaseSplit b = decompose_phase(energy);
    EXPECT_EQ(b.s, PhasePoly::from_q(q1()));
    EXPECT_EQ(b.n, P(k(Rational(1, 2)), 2));

    const PhaseSplit z = decompose_phase(PhasePoly(1));
    EXPECT_TRUE(z.s.is_zero() && z.n.is_zero());
}

TEST(ActLeftPhase, Examples) {
    EXPECT_TRUE(act_left_phase(P(q1(), 3), PhasePoly::from_q(q1())).is_zero());
    EXPECT_EQ(act_left_phase(P(q1(), 2), PhasePoly::from_q(q1())), P(Rational(2) * q1(), 1));
    EXPECT_TRUE(act_left_phase(P(q1(), 2), PhasePoly::from_q(k(5))).is_zero());
}

TEST(ActPhase, DegreeViolationsThrow) {
    EXPECT_THROW(act_left_phase(P(q1(), 1), PhasePoly::from_q(q1())), std::domain_error);
    EXPECT_THROW(act_right_phase(P(q1(), 2), P(q1(), 2)), std::domain_error);
}

TEST(ActRightPhase, ZeroSIsZero) { EXPECT_TRUE(act_right_phase(P(q1(), 3), PhasePoly(1)).is_zero()); }

TEST(HamiltonianField, Examples) {
    EXPECT_TRUE(hamiltonian_field(PhasePoly::from_q(k(3))).is_zero());

    const HamField kin = hamiltonian_field(P(k(Rational(1, 2)), 2));
    EXPECT_EQ(kin.qcomp[0], -PhasePoly::momentum(1, 1));
    EXPECT_TRUE(kin.pcomp[0].is_zero());

    const HamField pot = hamiltonian_field(PhasePoly::from_q(q1()));
    EXPECT_TRUE(pot.qcomp[0].is_zero());
    EXPECT_EQ(pot.pcomp[0], PhasePoly::from_q(k(1)));
}

TEST(Gccl, VectorFieldIsNegativeCotangentLift) {
    const Poly Y = q1() * q1() + k(1);
    const HamField g = gccl(tensor(1, Y));
    EXPECT_EQ(g.qcomp[0], PhasePoly::from_q(-Y));
    EXPECT_EQ(g.pcomp[0], P(partial(Y, 1), 1));
    EXPECT_TRUE(gccl(SymTensor(1, 3)).is_zero());
}

TEST(JacobiLie, SelfBracketVanishes) {
    const HamField a = gccl(tensor(2, q1() * q1()));
    EXPECT_TRUE(jacobi_lie_bracket(a, a).is_zero());
}

TEST(PhasePolyText, Format) {
    const PhasePoly h = P(q1(), 2) + PhasePoly::from_q(k(Rational(-1, 2)));
    EXPECT_EQ(h.to_string(), "(1 * q1) * p1^2 + (-1/2)");
}

// Random-corpus properties.

TEST(PhaseProperty, BracketMatchesQPExpansion) {
    Lcg64 rng(41);
    for (int i = 0; i < 200; ++i) {
        const PhasePoly h = kappa(random_graded(rng, 1, 0, 3, 3));
        const PhasePoly g = kappa(random_graded(rng, 1, 0, 3, 3));
        EXPECT_EQ(as_qp(canonical_bracket(h, g)), oracle_bracket(h, g));
    }
}

TEST(PhaseProperty, BracketIsAntisymmetricAndSatisfiesJacobi) {
    Lcg64 rng(42);
    for (int i = 0; i < 100; ++i) {
        const int dim = 1 + i % 2;
        const PhasePoly a = kappa(random_graded(rng, dim, 0, 3, 2));
        const PhasePoly b = kappa(random_graded(rng, dim, 0, 3, 2));
        const PhasePoly c = kappa(random_graded(rng, dim, 0, 3, 2));
        EXPECT_TRUE((canonical_bracket(a, b) + canonical_bracket(b, a)).is_zero());
        const PhasePoly J = canonical_bracket(a, canonical_bracket(b, c)) + canonical_bracket(b, canonical_bracket(c, a)) +
                            canonical_bracket(c, canonical_bracket(a, b));
        EXPECT_TRUE(J.is_zero());
    }
}

TEST(PhaseProperty, KappaIsALieMap) {
    Lcg64 rng(43);
    for (int i = 0; i < 100; ++i) {
        const int dim = 1 + i % 2;
        const GradedTensor X = random_graded(rng, dim, 0, 4, 3);
        const GradedTensor Y = random_graded(rng, dim, 0, 4, 3);
        EXPECT_EQ(kappa(schouten_graded(X, Y, 10)), -canonical_bracket(kappa(X), kappa(Y)));
    }
}

TEST(PhaseProperty, ActionsSumToLieBracketAndAreNatural) {
    Lcg64 rng(44);
    for (int i = 0; i < 100; ++i) {
        const int dim = 1 + i % 2;
        const SPair xi = random_spair(rng, dim, 3);
        const NPart eta = random_npart(rng, dim, 4, 3);
        const PhasePoly xh = kappa(eta.tensor());
        const PhasePoly sh = kappa(embed(xi));
        EXPECT_EQ(act_left_phase(xh, sh) + act_right_phase(xh, sh), -canonical_bracket(xh, sh));
        EXPECT_EQ(act_right_phase(xh, sh), kappa(act_right(eta, xi, 10).tensor()));
        EXPECT_EQ(act_left_phase(xh, sh), kappa(embed(act_left(eta, xi))));
    }
}

TEST(PhaseProperty, SplitIsProjectionAndPiecesClose) {
    Lcg64 rng(45);
    for (int i = 0; i < 100; ++i) {
        const int dim = 1 + i % 2;
        const PhasePoly h = kappa(random_graded(rng, dim, 0, 4, 3));
        const PhaseSplit sp = decompose_phase(h);
        EXPECT_EQ(sp.s + sp.n, h);
        EXPECT_LE(sp.s.p_degree(), 1);
        EXPECT_TRUE(sp.n.is_zero() || sp.n.p_low_degree() >= 2);

        const PhasePoly s2 = decompose_phase(kappa(random_graded(rng, dim, 0, 3, 3))).s;
        EXPECT_LE(canonical_bracket(sp.s, s2).p_degree(), 1);
        const PhasePoly n2 = decompose_phase(kappa(random_graded(rng, dim, 0, 3, 3))).n;
        const PhasePoly nn = canonical_bracket(sp.n, n2);
        EXPECT_TRUE(nn.is_zero() || nn.p_low_degree() >= 3);
    }
}

TEST(PhaseProperty, HamiltonianFieldIsLinearWithConstantKernel) {
    Lcg64 rng(46);
    for (int i = 0; i < 100; ++i) {
        const int dim = 1 + i % 2;
        const PhasePoly h = kappa(random_graded(rng, dim, 0, 3, 3));
        const PhasePoly g = kappa(random_graded(rng, dim, 0, 3, 3));
        const HamField sum = hamiltonian_field(h + g);
        const HamField a = hamiltonian_field(h);
        const HamField b = hamiltonian_field(g);
        for (int l = 0; l < dim; ++l) {
            EXPECT_EQ(sum.qcomp[l], a.qcomp[l] + b.qcomp[l]);
            EXPECT_EQ(sum.pcomp[l], a.pcomp[l] + b.pcomp[l]);
        }
        const bool constant = h.is_zero() || (h.p_degree() == 0 && h.coeff({}).degree() == 0);
        EXPECT_EQ(hamiltonian_field(h).is_zero(), constant);
    }
}

TEST(PhaseProperty, HamiltonianFieldIsAHomomorphism) {
    Lcg64 rng(47);
    for (int i = 0; i < 100; ++i) {
        const int dim = 1 + i % 2;
        const PhasePoly h = kappa(random_graded(rng, dim, 0, 3, 3));
        const PhasePoly g = kappa(random_graded(rng, dim, 0, 3, 3));
        EXPECT_EQ(-jacobi_lie_bracket(hamiltonian_field(h), hamiltonian_field(g)),
                  hamiltonian_field(-canonical_bracket(h, g)));
    }
}

TEST(PhaseProperty, GcclIsPhiOfKappa) {
    Lcg64 rng(48);
    for (int i = 0; i < 100; ++i) {
        const int dim = 1 + i % 2;
        const SymTensor X = random_tensor(rng, dim, rng.uniform_int(0, 4), 3);
        const SymTensor Y = random_tensor(rng, dim, rng.uniform_int(0, 4), 3);
        EXPECT_EQ(gccl(X), hamiltonian_field(kappa(X)));
        EXPECT_EQ(jacobi_lie_bracket(gccl(X), gccl(Y)), -gccl(schouten_bracket(X, Y)));
    }
}
