#pragma once

// Symmetric contravariant tensor fields with polynomial coefficients, the
// symmetric Schouten bracket, and the split into functions-plus-vector-fields
// (s) and orders two and up (n).

#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "mpv/exactpoly.hpp"

namespace mpv {

inline constexpr int kMaxTensorDim = 3;
inline constexpr int kDefaultOrderCap = 8;

/// Thrown when a graded bracket would produce a part above the order cap.
class OrderCapExceeded : public std::runtime_error {
public:
    OrderCapExceeded(int order, int cap);
    int order() const { return order_; }
    int cap() const { return cap_; }

private:
    int order_;
    int cap_;
};

/// Sorted, 1-based index multiset i1 <= i2 <= ... <= ik.
using IndexSet = std::vector<int>;

class SymTensor {
public:
    using ComponentMap = std::map<IndexSet, Poly>;

    /// Zero tensor of the given order.
    SymTensor(int dim, int order);

    static SymTensor scalar(const Poly& sigma);
    /// Vector field with components Y^1..Y^n.
    static SymTensor vector_field(const std::vector<Poly>& comps);

    int dim() const { return dim_; }
    int order() const { return order_; }
    bool is_zero() const { return comps_.empty(); }
    const ComponentMap& components() const { return comps_; }

    /// Component at an arbitrary (unsorted) index tuple.
    Poly component(IndexSet idx) const;
    void set(IndexSet idx, const Poly& value);
    void add(IndexSet idx, const Poly& value);

    SymTensor& operator+=(const SymTensor& o);
    SymTensor& operator-=(const SymTensor& o);
    SymTensor& operator*=(const Rational& s);
    friend SymTensor operator+(SymTensor a, const SymTensor& b) { return a += b; }
    friend SymTensor operator-(SymTensor a, const SymTensor& b) { return a -= b; }
    friend SymTensor operator*(const Rational& s, SymTensor a) { return a *= s; }
    SymTensor operator-() const;

    friend bool operator==(const SymTensor& a, const SymTensor& b);
    friend bool operator!=(const SymTensor& a, const SymTensor& b) { return !(a == b); }

    /// "order k: {i1..ik: poly}" with one brace group per stored component.
    std::string to_string() const;

private:
    void check_index(const IndexSet& idx) const;

    int dim_;
    int order_;
    ComponentMap comps_;
};

/// Every sorted index multiset of length k over {1..dim}, in lexicographic order.
std::vector<IndexSet> all_index_sets(int dim, int k);

class GradedTensor {
public:
    explicit GradedTensor(int dim);
    static GradedTensor from(const SymTensor& t);

    int dim() const { return dim_; }
    bool is_zero() const { return parts_.empty(); }
    const std::map<int, SymTensor>& parts() const { return parts_; }
    /// The order-k part (zero tensor when absent).
    SymTensor part(int k) const;
    int max_order() const { return parts_.empty() ? -1 : parts_.rbegin()->first; }

    void add(const SymTensor& t);

    GradedTensor& operator+=(const GradedTensor& o);
    GradedTensor& operator-=(const GradedTensor& o);
    friend GradedTensor operator+(GradedTensor a, const GradedTensor& b) { return a += b; }
    friend GradedTensor operator-(GradedTensor a, const GradedTensor& b) { return a -= b; }
    GradedTensor operator-() const;

    friend bool operator==(const GradedTensor& a, const GradedTensor& b);
    friend bool operator!=(const GradedTensor& a, const GradedTensor& b) { return !(a == b); }

    std::string to_string() const;

private:
    int dim_;
    std::map<int, SymTensor> parts_;
};

/// (sigma, Y): a function and a vector field.
struct SPair {
    SymTensor sigma;
    SymTensor Y;

    explicit SPair(int dim) : sigma(dim, 0), Y(dim, 1) {}
    SPair(SymTensor s, SymTensor y);

    int dim() const { return sigma.dim(); }
    bool is_zero() const { return sigma.is_zero() && Y.is_zero(); }
    friend bool operator==(const SPair& a, const SPair& b) { return a.sigma == b.sigma && a.Y == b.Y; }
    friend SPair operator+(const SPair& a, const SPair& b) { return {a.sigma + b.sigma, a.Y + b.Y}; }
    friend SPair operator-(const SPair& a, const SPair& b) { return {a.sigma - b.sigma, a.Y - b.Y}; }
};

/// A graded tensor with no parts of order 0 or 1.
class NPart {
public:
    explicit NPart(int dim) : x_(dim) {}
    explicit NPart(GradedTensor x);

    int dim() const { return x_.dim(); }
    bool is_zero() const { return x_.is_zero(); }
    const GradedTensor& tensor() const { return x_; }
    SymTensor part(int k) const { return x_.part(k); }

    friend bool operator==(const NPart& a, const NPart& b) { return a.x_ == b.x_; }
    friend NPart operator+(const NPart& a, const NPart& b) { return NPart(a.x_ + b.x_); }
    friend NPart operator-(const NPart& a, const NPart& b) { return NPart(a.x_ - b.x_); }

private:
    GradedTensor x_;
};

/// [X, Y] for homogeneous tensors; order k + m - 1, zero when k = m = 0.
SymTensor schouten_bracket(const SymTensor& X, const SymTensor& Y);

/// Bilinear extension to graded tensors; throws OrderCapExceeded if any
/// nonzero result part exceeds `order_cap`.
GradedTensor schouten_graded(const GradedTensor& X, const GradedTensor& Y, int order_cap = kDefaultOrderCap);

/// Lie derivative of X along the vector field Y, i.e. -[X, Y].
SymTensor lie_derivative(const SymTensor& Y, const SymTensor& X);

std::pair<SPair, NPart> split(const GradedTensor& X);
GradedTensor embed(const SPair& s, const NPart& n);
GradedTensor embed(const SPair& s);
GradedTensor embed(const NPart& n);

/// Left action of n on s: only the order-2 part acts.
SPair act_left(const NPart& Xn, const SPair& s);
/// Right action of s on n.
NPart act_right(const NPart& Xn, const SPair& s, int order_cap = kDefaultOrderCap);
SPair bracket_s(const SPair& a, const SPair& b);
NPart bracket_n(const NPart& a, const NPart& b, int order_cap = kDefaultOrderCap);

struct DoubleCross {
    SPair s;
    NPart n;
    friend bool operator==(const DoubleCross& a, const DoubleCross& b) { return a.s == b.s && a.n == b.n; }
};

DoubleCross double_cross_bracket(const DoubleCross& a, const DoubleCross& b, int order_cap = kDefaultOrderCap);

/// Left side minus right side of the two matched-pair compatibility conditions.
DoubleCross compat_residuals(const SPair& xi, const SPair& xi2, const NPart& eta, const NPart& eta2,
                             int order_cap = kDefaultOrderCap);

}  // namespace mpv
