#pragma once

// Exact multivariate polynomials over the rationals.
//
// Poly is the coefficient ring of every symbolic tensor in the library. All
// arithmetic is exact (GMP rationals), so algebraic identities can be checked
// for residual == 0 rather than "small".

#include <array>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace mpv {

using Rational = mpq_class;

/// Largest number of variables a Poly may carry. Tensors use at most 3 spatial
/// variables; the extra room lets tests build (q, p) polynomials for n <= 3.
inline constexpr int kMaxPolyDim = 6;

/// Exponent multi-index; slots at or beyond the polynomial dimension are zero.
using Exponent = std::array<std::uint8_t, kMaxPolyDim>;

int total_degree(const Exponent& e);

/// Graded lexicographic order: lower total degree first, ties broken
/// lexicographically with q1 most significant.
struct GradedLexLess {
    bool operator()(const Exponent& a, const Exponent& b) const;
};

class Poly {
public:
    using TermMap = std::map<Exponent, Rational, GradedLexLess>;

    /// The zero polynomial in `dim` variables.
    explicit Poly(int dim);

    static Poly constant(int dim, const Rational& c);
    /// The coordinate q^axis, with axis in 1..dim.
    static Poly variable(int dim, int axis);
    static Poly monomial(int dim, const Exponent& e, const Rational& c);

    int dim() const { return dim_; }
    bool is_zero() const { return terms_.empty(); }
    /// Total degree; -1 for the zero polynomial.
    int degree() const;
    std::size_t term_count() const { return terms_.size(); }
    const TermMap& terms() const { return terms_; }
    Rational coeff(const Exponent& e) const;

    /// Adds c * q^e in place, dropping the term if it cancels.
    void add_term(const Exponent& e, const Rational& c);

    Poly& operator+=(const Poly& other);
    Poly& operator-=(const Poly& other);
    Poly& operator*=(const Rational& s);

    friend Poly operator+(Poly a, const Poly& b) { return a += b; }
    friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
    friend Poly operator*(const Poly& a, const Poly& b);
    friend Poly operator*(Poly a, const Rational& s) { return a *= s; }
    friend Poly operator*(const Rational& s, Poly a) { return a *= s; }
    Poly operator-() const;

    friend bool operator==(const Poly& a, const Poly& b);
    friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }

    /// "coeff * q1^a q2^b" terms joined by " + ", highest degree first.
    std::string to_string() const;

private:
    int dim_;
    TermMap terms_;
};

/// Exact formal partial derivative d/dq^axis, axis in 1..dim.
Poly partial(const Poly& a, int axis);

/// Exact evaluation at a rational point.
Rational evaluate(const Poly& a, std::span<const Rational> point);
/// Floating-point evaluation at a real point.
double evaluate(const Poly& a, std::span<const double> point);

std::string to_string(const Rational& r);

}  // namespace mpv
