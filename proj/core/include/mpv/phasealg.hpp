#pragma once

// Phase-space functions that are polynomial along the fibres:
//   h(q, p) = sum_k  c_I(q) p_I,   I a sorted multiset of momentum indices.
// Coefficients c_I are the monomial coefficients, so for the image of a
// symmetric tensor they carry the multinomial multiplicity of I.

#include <map>
#include <span>
#include <string>
#include <vector>

#include "mpv/exactpoly.hpp"
#include "mpv/schouten.hpp"

namespace mpv {

class PhasePoly {
public:
    using TermMap = std::map<IndexSet, Poly>;

    explicit PhasePoly(int dim);
    static PhasePoly from_q(const Poly& c);
    /// c(q) * p_I for a (possibly unsorted) momentum multiset I.
    static PhasePoly monomial(const Poly& c, IndexSet I);
    /// The momentum coordinate p_axis, axis in 1..dim.
    static PhasePoly momentum(int dim, int axis);

    int dim() const { return dim_; }
    bool is_zero() const { return terms_.empty(); }
    /// Highest momentum degree; -1 for zero.
    int p_degree() const;
    /// Lowest momentum degree; -1 for zero.
    int p_low_degree() const;
    const TermMap& terms() const { return terms_; }
    Poly coeff(IndexSet I) const;
    void add_term(IndexSet I, const Poly& c);

    /// Terms with lo <= p-degree <= hi.
    PhasePoly degree_range(int lo, int hi) const;

    PhasePoly& operator+=(const PhasePoly& o);
    PhasePoly& operator-=(const PhasePoly& o);
    PhasePoly& operator*=(const Rational& s);
    friend PhasePoly operator+(PhasePoly a, const PhasePoly& b) { return a += b; }
    friend PhasePoly operator-(PhasePoly a, const PhasePoly& b) { return a -= b; }
    friend PhasePoly operator*(const Rational& s, PhasePoly a) { return a *= s; }
    friend PhasePoly operator*(const PhasePoly& a, const PhasePoly& b);
    PhasePoly operator-() const;

    friend bool operator==(const PhasePoly& a, const PhasePoly& b) { return a.dim_ == b.dim_ && a.terms_ == b.terms_; }
    friend bool operator!=(const PhasePoly& a, const PhasePoly& b) { return !(a == b); }

    /// "(poly(q)) * p1^a p2^b" terms joined by " + ", highest p-degree first.
    std::string to_string() const;

private:
    int dim_;
    TermMap terms_;
};

PhasePoly partial_q(const PhasePoly& h, int axis);
PhasePoly partial_p(const PhasePoly& h, int axis);

double evaluate(const PhasePoly& h, std::span<const double> q, std::span<const double> p);

PhasePoly kappa(const SymTensor& X);
PhasePoly kappa(const GradedTensor& X);
GradedTensor kappa_inv(const PhasePoly& h);

/// {h, g} = h_q g_p - g_q h_p (summed over axes).
PhasePoly canonical_bracket(const PhasePoly& h, const PhasePoly& g);

struct PhaseSplit {
    PhasePoly s;  // p-degree <= 1
    PhasePoly n;  // p-degree >= 2
};
PhaseSplit decompose_phase(const PhasePoly& h);

/// Both actions throw std::domain_error when Xhat has a term of p-degree < 2
/// or sHat has a term of p-degree > 1.
PhasePoly act_left_phase(const PhasePoly& Xhat, const PhasePoly& sHat);
PhasePoly act_right_phase(const PhasePoly& Xhat, const PhasePoly& sHat);

/// A vector field on T*Q: qcomp[l] multiplies d/dq^l, pcomp[l] multiplies d/dp_l.
struct HamField {
    std::vector<PhasePoly> qcomp;
    std::vector<PhasePoly> pcomp;

    explicit HamField(int dim);
    int dim() const { return static_cast<int>(qcomp.size()); }
    bool is_zero() const;
    /// Applies the field as a derivation.
    PhasePoly apply(const PhasePoly& f) const;

    friend bool operator==(const HamField& a, const HamField& b) {
        return a.qcomp == b.qcomp && a.pcomp == b.pcomp;
    }
    friend HamField operator-(const HamField& a);
};

/// -X_h: qcomp = -dh/dp, pcomp = dh/dq.
HamField hamiltonian_field(const PhasePoly& h);
/// Generalized complete cotangent lift of a homogeneous tensor.
HamField gccl(const SymTensor& X);
/// Plain Jacobi-Lie bracket a(b) - b(a), componentwise.
HamField jacobi_lie_bracket(const HamField& a, const HamField& b);

}  // namespace mpv
