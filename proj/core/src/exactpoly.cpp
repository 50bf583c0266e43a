#include "mpv/exactpoly.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>
#include <type_traits>

namespace mpv {

namespace {

void require_dim(int dim) {
    if (dim < 1 || dim > kMaxPolyDim) {
        throw std::invalid_argument("Poly: dimension must be in 1.." + std::to_string(kMaxPolyDim));
    }
}

void require_same_dim(const Poly& a, const Poly& b) {
    if (a.dim() != b.dim()) {
        throw std::invalid_argument("Poly: dimension mismatch (" + std::to_string(a.dim()) + " vs " +
                                    std::to_string(b.dim()) + ")");
    }
}

}  // namespace

int total_degree(const Exponent& e) {
    int d = 0;
    for (auto x : e) d += x;
    return d;
}

bool GradedLexLess::operator()(const Exponent& a, const Exponent& b) const {
    const int da = total_degree(a);
    const int db = total_degree(b);
    if (da != db) return da < db;
    // Same degree: the monomial with the larger leading exponent sorts later.
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] != b[i]) return a[i] < b[i];
    }
    return false;
}

Poly::Poly(int dim) : dim_(dim) { require_dim(dim); }

Poly Poly::constant(int dim, const Rational& c) {
    Poly p(dim);
    p.add_term(Exponent{}, c);
    return p;
}

Poly Poly::variable(int dim, int axis) {
    if (axis < 1 || axis > dim) throw std::out_of_range("Poly::variable: axis out of range");
    Exponent e{};
    e[axis - 1] = 1;
    return monomial(dim, e, Rational(1));
}

Poly Poly::monomial(int dim, const Exponent& e, const Rational& c) {
    Poly p(dim);
    for (int i = dim; i < kMaxPolyDim; ++i) {
        if (e[i] != 0) throw std::invalid_argument("Poly::monomial: exponent beyond dimension");
    }
    p.add_term(e, c);
    return p;
}

int Poly::degree() const {
    if (terms_.empty()) return -1;
    return total_degree(terms_.rbegin()->first);
}

Rational Poly::coeff(const Exponent& e) const {
    auto it = terms_.find(e);
    return it == terms_.end() ? Rational(0) : it->second;
}

void Poly::add_term(const Exponent& e, const Rational& c) {
    if (c == 0) return;
    // mpq_class(num, den) does not reduce; keep stored values canonical so
    // equality is structural.
    Rational v(c);
    v.canonicalize();
    auto [it, inserted] = terms_.try_emplace(e, std::move(v));
    if (!inserted) {
        it->second += v;  // try_emplace leaves v intact when the key exists
        if (it->second == 0) terms_.erase(it);
    }
}

Poly& Poly::operator+=(const Poly& other) {
    require_same_dim(*this, other);
    for (const auto& [e, c] : other.terms_) add_term(e, c);
    return *this;
}

Poly& Poly::operator-=(const Poly& other) {
    require_same_dim(*this, other);
    for (const auto& [e, c] : other.terms_) add_term(e, -c);
    return *this;
}

Poly& Poly::operator*=(const Rational& s) {
    if (s == 0) {
        terms_.clear();
        return *this;
    }
    Rational v(s);
    v.canonicalize();
    for (auto& [e, c] : terms_) c *= v;
    return *this;
}

Poly operator*(const Poly& a, const Poly& b) {
    require_same_dim(a, b);
    Poly out(a.dim());
    for (const auto& [ea, ca] : a.terms_) {
        for (const auto& [eb, cb] : b.terms_) {
            Exponent e{};
            for (int i = 0; i < kMaxPolyDim; ++i) e[i] = static_cast<std::uint8_t>(ea[i] + eb[i]);
            out.add_term(e, ca * cb);
        }
    }
    return out;
}

Poly Poly::operator-() const {
    Poly out = *this;
    for (auto& [e, c] : out.terms_) c = -c;
    return out;
}

bool operator==(const Poly& a, const Poly& b) { return a.dim_ == b.dim_ && a.terms_ == b.terms_; }

std::string to_string(const Rational& r) { return r.get_str(); }

std::string Poly::to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
        const auto& [e, c] = *it;
        if (!first) os << " + ";
        first = false;
        os << c.get_str();
        if (total_degree(e) == 0) continue;
        os << " *";
        for (int i = 0; i < dim_; ++i) {
            if (e[i] == 0) continue;
            os << " q" << (i + 1);
            if (e[i] > 1) os << '^' << int(e[i]);
        }
    }
    return os.str();
}

Poly partial(const Poly& a, int axis) {
    if (axis < 1 || axis > a.dim()) throw std::out_of_range("partial: axis out of range");
    const int k = axis - 1;
    Poly out(a.dim());
    for (const auto& [e, c] : a.terms()) {
        if (e[k] == 0) continue;
        Exponent d = e;
        d[k] = static_cast<std::uint8_t>(d[k] - 1);
        out.add_term(d, c * e[k]);
    }
    return out;
}

namespace {

// Horner in each variable is awkward for sparse multivariate data; instead the
// powers of each coordinate are tabulated once and every monomial is a product
// of table entries.
template <class T>
T evaluate_impl(const Poly& a, std::span<const T> point) {
    if (static_cast<int>(point.size()) != a.dim()) {
        throw std::invalid_argument("evaluate: point length does not match dimension");
    }
    if (a.is_zero()) return T(0);
    int maxdeg = 0;
    for (const auto& [e, c] : a.terms()) {
        for (int i = 0; i < a.dim(); ++i) maxdeg = std::max<int>(maxdeg, e[i]);
    }
    std::vector<std::vector<T>> powers(a.dim(), std::vector<T>(maxdeg + 1, T(1)));
    for (int i = 0; i < a.dim(); ++i) {
        for (int d = 1; d <= maxdeg; ++d) powers[i][d] = powers[i][d - 1] * point[i];
    }
    T sum(0);
    for (const auto& [e, c] : a.terms()) {
        T term;
        if constexpr (std::is_same_v<T, double>) {
            term = c.get_d();
        } else {
            term = c;
        }
        for (int i = 0; i < a.dim(); ++i) {
            if (e[i] != 0) term *= powers[i][e[i]];
        }
        sum += term;
    }
    return sum;
}

}  // namespace

Rational evaluate(const Poly& a, std::span<const Rational> point) {
    // gmpxx arithmetic assumes canonical operands; Rational(n, d) is not reduced on construction.
    std::vector<Rational> canon(point.begin(), point.end());
    for (Rational& r : canon) r.canonicalize();
    return evaluate_impl<Rational>(a, std::span<const Rational>(canon));
}

double evaluate(const Poly& a, std::span<const double> point) { return evaluate_impl<double>(a, point); }

}  // namespace mpv
