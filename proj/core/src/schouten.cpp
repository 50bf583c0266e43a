#include "mpv/schouten.hpp"

#include <algorithm>
#include <sstream>

namespace mpv {

OrderCapExceeded::OrderCapExceeded(int order, int cap)
    : std::runtime_error("graded bracket produced order " + std::to_string(order) + " above the cap " +
                         std::to_string(cap)),
      order_(order),
      cap_(cap) {}

namespace {

void require_same_dim(int a, int b, const char* where) {
    if (a != b) throw std::invalid_argument(std::string(where) + ": dimension mismatch");
}

long binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    long r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

using Counts = std::array<int, kMaxTensorDim>;

Counts counts_of(const IndexSet& idx) {
    Counts c{};
    for (int i : idx) ++c[i - 1];
    return c;
}

IndexSet from_counts(const Counts& c, int dim) {
    IndexSet out;
    for (int j = 0; j < dim; ++j) out.insert(out.end(), c[j], j + 1);
    return out;
}

// Calls fn(sub_counts, weight) for every sub-multiset of `full` of size `size`.
// The weight counts how many position subsets of the flattened multiset
// realize the same sub-multiset.
template <class Fn>
void for_each_submultiset(const Counts& full, int dim, int size, Fn&& fn) {
    Counts cur{};
    auto rec = [&](auto&& self, int j, int remaining, long weight) -> void {
        if (j == dim) {
            if (remaining == 0) fn(cur, weight);
            return;
        }
        for (int s = 0; s <= std::min(full[j], remaining); ++s) {
            cur[j] = s;
            self(self, j + 1, remaining - s, weight * binomial(full[j], s));
        }
        cur[j] = 0;
    };
    rec(rec, 0, size, 1);
}

// One half of the symmetrized bracket:
//   (k / C(r, m)) * sum_{S subset I, |S| = m} w(S) X^{(I\S) + l} d_l Y^S
// where k = order(X), m = order(Y), r = k + m - 1.
void accumulate_half(const SymTensor& X, const SymTensor& Y, const Rational& sign, SymTensor& out) {
    const int dim = X.dim();
    const int k = X.order();
    const int m = Y.order();
    const int r = k + m - 1;
    if (k == 0 || X.is_zero() || Y.is_zero()) return;

    // d_l Y^S for every stored component.
    std::map<IndexSet, std::vector<Poly>> dY;
    for (const auto& [idx, poly] : Y.components()) {
        std::vector<Poly> d;
        d.reserve(dim);
        for (int l = 1; l <= dim; ++l) d.push_back(partial(poly, l));
        dY.emplace(idx, std::move(d));
    }

    const Rational scale = sign * Rational(k) / Rational(binomial(r, m));
    for (const auto& I : all_index_sets(dim, r)) {
        const Counts full = counts_of(I);
        Poly acc(dim);
        for_each_submultiset(full, dim, m, [&](const Counts& sub, long w) {
            auto it = dY.find(from_counts(sub, dim));
            if (it == dY.end()) return;
            Counts rest{};
            for (int j = 0; j < dim; ++j) rest[j] = full[j] - sub[j];
            for (int l = 1; l <= dim; ++l) {
                const Poly& d = it->second[l - 1];
                if (d.is_zero()) continue;
                Counts xi = rest;
                ++xi[l - 1];
                const Poly x = X.component(from_counts(xi, dim));
                if (x.is_zero()) continue;
                acc += (x * d) * Rational(w);
            }
        });
        if (!acc.is_zero()) out.add(I, acc * scale);
    }
}

}  // namespace

SymTensor::SymTensor(int dim, int order) : dim_(dim), order_(order) {
    if (dim < 1 || dim > kMaxTensorDim) {
        throw std::invalid_argument("SymTensor: dimension must be in 1.." + std::to_string(kMaxTensorDim));
    }
    if (order < 0) throw std::invalid_argument("SymTensor: negative order");
}

SymTensor SymTensor::scalar(const Poly& sigma) {
    SymTensor t(sigma.dim(), 0);
    t.set({}, sigma);
    return t;
}

SymTensor SymTensor::vector_field(const std::vector<Poly>& comps) {
    if (comps.empty()) throw std::invalid_argument("SymTensor::vector_field: no components");
    SymTensor t(static_cast<int>(comps.size()), 1);
    for (std::size_t i = 0; i < comps.size(); ++i) {
        require_same_dim(comps[i].dim(), t.dim(), "SymTensor::vector_field");
        t.set({static_cast<int>(i) + 1}, comps[i]);
    }
    return t;
}

void SymTensor::check_index(const IndexSet& idx) const {
    if (static_cast<int>(idx.size()) != order_) {
        throw std::invalid_argument("SymTensor: index length does not match order");
    }
    for (int i : idx) {
        if (i < 1 || i > dim_) throw std::out_of_range("SymTensor: index out of range");
    }
}

Poly SymTensor::component(IndexSet idx) const {
    check_index(idx);
    std::sort(idx.begin(), idx.end());
    auto it = comps_.find(idx);
    return it == comps_.end() ? Poly(dim_) : it->second;
}

void SymTensor::set(IndexSet idx, const Poly& value) {
    check_index(idx);
    require_same_dim(value.dim(), dim_, "SymTensor::set");
    std::sort(idx.begin(), idx.end());
    if (value.is_zero()) {
        comps_.erase(idx);
    } else {
        comps_.insert_or_assign(std::move(idx), value);
    }
}

void SymTensor::add(IndexSet idx, const Poly& value) {
    check_index(idx);
    require_same_dim(value.dim(), dim_, "SymTensor::add");
    if (value.is_zero()) return;
    std::sort(idx.begin(), idx.end());
    auto [it, inserted] = comps_.try_emplace(idx, value);
    if (!inserted) {
        it->second += value;
        if (it->second.is_zero()) comps_.erase(it);
    }
}

SymTensor& SymTensor::operator+=(const SymTensor& o) {
    require_same_dim(dim_, o.dim_, "SymTensor +");
    if (order_ != o.order_) throw std::invalid_argument("SymTensor +: order mismatch");
    for (const auto& [idx, p] : o.comps_) add(idx, p);
    return *this;
}

SymTensor& SymTensor::operator-=(const SymTensor& o) {
    require_same_dim(dim_, o.dim_, "SymTensor -");
    if (order_ != o.order_) throw std::invalid_argument("SymTensor -: order mismatch");
    for (const auto& [idx, p] : o.comps_) add(idx, -p);
    return *this;
}

SymTensor& SymTensor::operator*=(const Rational& s) {
    if (s == 0) {
        comps_.clear();
        return *this;
    }
    for (auto& [idx, p] : comps_) p *= s;
    return *this;
}

SymTensor SymTensor::operator-() const {
    SymTensor out = *this;
    for (auto& [idx, p] : out.comps_) p = -p;
    return out;
}

bool operator==(const SymTensor& a, const SymTensor& b) {
    return a.dim_ == b.dim_ && a.order_ == b.order_ && a.comps_ == b.comps_;
}

std::string SymTensor::to_string() const {
    std::ostringstream os;
    os << "order " << order_ << ':';
    if (comps_.empty()) {
        os << " 0";
        return os.str();
    }
    for (const auto& [idx, p] : comps_) {
        os << " {";
        for (std::size_t i = 0; i < idx.size(); ++i) os << (i ? "," : "") << idx[i];
        os << ": " << p.to_string() << '}';
    }
    return os.str();
}

std::vector<IndexSet> all_index_sets(int dim, int k) {
    std::vector<IndexSet> out;
    IndexSet cur(k, 1);
    if (k == 0) return {IndexSet{}};
    while (true) {
        out.push_back(cur);
        int pos = k - 1;
        while (pos >= 0 && cur[pos] == dim) --pos;
        if (pos < 0) break;
        ++cur[pos];
        for (int j = pos + 1; j < k; ++j) cur[j] = cur[pos];
    }
    return out;
}

GradedTensor::GradedTensor(int dim) : dim_(dim) {
    if (dim < 1 || dim > kMaxTensorDim) {
        throw std::invalid_argument("GradedTensor: dimension must be in 1.." + std::to_string(kMaxTensorDim));
    }
}

GradedTensor GradedTensor::from(const SymTensor& t) {
    GradedTensor g(t.dim());
    g.add(t);
    return g;
}

SymTensor GradedTensor::part(int k) const {
    auto it = parts_.find(k);
    return it == parts_.end() ? SymTensor(dim_, k) : it->second;
}

void GradedTensor::add(const SymTensor& t) {
    require_same_dim(dim_, t.dim(), "GradedTensor::add");
    if (t.is_zero()) return;
    auto [it, inserted] = parts_.try_emplace(t.order(), t);
    if (!inserted) {
        it->second += t;
        if (it->second.is_zero()) parts_.erase(it);
    }
}

GradedTensor& GradedTensor::operator+=(const GradedTensor& o) {
    for (const auto& [k, t] : o.parts_) add(t);
    return *this;
}

GradedTensor& GradedTensor::operator-=(const GradedTensor& o) {
    for (const auto& [k, t] : o.parts_) add(-t);
    return *this;
}

GradedTensor GradedTensor::operator-() const {
    GradedTensor out(dim_);
    for (const auto& [k, t] : parts_) out.parts_.emplace(k, -t);
    return out;
}

bool operator==(const GradedTensor& a, const GradedTensor& b) { return a.dim_ == b.dim_ && a.parts_ == b.parts_; }

std::string GradedTensor::to_string() const {
    if (parts_.empty()) return "0";
    std::string out;
    for (const auto& [k, t] : parts_) {
        if (!out.empty()) out += '\n';
        out += t.to_string();
    }
    return out;
}

SPair::SPair(SymTensor s, SymTensor y) : sigma(std::move(s)), Y(std::move(y)) {
    if (sigma.order() != 0 || Y.order() != 1) throw std::invalid_argument("SPair: expects orders 0 and 1");
    require_same_dim(sigma.dim(), Y.dim(), "SPair");
}

NPart::NPart(GradedTensor x) : x_(std::move(x)) {
    if (!x_.is_zero() && x_.parts().begin()->first < 2) {
        throw std::invalid_argument("NPart: parts of order 0 or 1 are not allowed");
    }
}

SymTensor schouten_bracket(const SymTensor& X, const SymTensor& Y) {
    require_same_dim(X.dim(), Y.dim(), "schouten_bracket");
    const int r = X.order() + Y.order() - 1;
    if (r < 0) return SymTensor(X.dim(), 0);
    SymTensor out(X.dim(), r);
    accumulate_half(X, Y, Rational(1), out);
    accumulate_half(Y, X, Rational(-1), out);
    return out;
}

GradedTensor schouten_graded(const GradedTensor& X, const GradedTensor& Y, int order_cap) {
    require_same_dim(X.dim(), Y.dim(), "schouten_graded");
    GradedTensor out(X.dim());
    for (const auto& [k, xk] : X.parts()) {
        for (const auto& [m, ym] : Y.parts()) {
            SymTensor b = schouten_bracket(xk, ym);
            if (b.is_zero()) continue;
            if (b.order() > order_cap) throw OrderCapExceeded(b.order(), order_cap);
            out.add(b);
        }
    }
    return out;
}

SymTensor lie_derivative(const SymTensor& Y, const SymTensor& X) { return -schouten_bracket(X, Y); }

std::pair<SPair, NPart> split(const GradedTensor& X) {
    SPair s(X.part(0), X.part(1));
    GradedTensor rest(X.dim());
    for (const auto& [k, t] : X.parts()) {
        if (k >= 2) rest.add(t);
    }
    return {std::move(s), NPart(std::move(rest))};
}

GradedTensor embed(const SPair& s, const NPart& n) {
    GradedTensor out = n.tensor();
    out.add(s.sigma);
    out.add(s.Y);
    return out;
}

GradedTensor embed(const SPair& s) { return embed(s, NPart(s.dim())); }

GradedTensor embed(const NPart& n) { return n.tensor(); }

SPair act_left(const NPart& Xn, const SPair& s) {
    require_same_dim(Xn.dim(), s.dim(), "act_left");
    return SPair(SymTensor(s.dim(), 0), schouten_bracket(Xn.part(2), s.sigma));
}

NPart act_right(const NPart& Xn, const SPair& s, int order_cap) {
    require_same_dim(Xn.dim(), s.dim(), "act_right");
    GradedTensor out(s.dim());
    for (const auto& [k, xk] : Xn.tensor().parts()) {
        // [X^k, sigma] lands in order k - 1; the k = 2 piece is the left action.
        if (k >= 3) out.add(schouten_bracket(xk, s.sigma));
        SymTensor b = schouten_bracket(xk, s.Y);
        if (!b.is_zero() && b.order() > order_cap) throw OrderCapExceeded(b.order(), order_cap);
        out.add(b);
    }
    return NPart(std::move(out));
}

SPair bracket_s(const SPair& a, const SPair& b) {
    require_same_dim(a.dim(), b.dim(), "bracket_s");
    return SPair(schouten_bracket(a.Y, b.sigma) - schouten_bracket(b.Y, a.sigma), schouten_bracket(a.Y, b.Y));
}

NPart bracket_n(const NPart& a, const NPart& b, int order_cap) {
    return NPart(schouten_graded(a.tensor(), b.tensor(), order_cap));
}

DoubleCross double_cross_bracket(const DoubleCross& a, const DoubleCross& b, int order_cap) {
    SPair s = bracket_s(a.s, b.s) + act_left(a.n, b.s) - act_left(b.n, a.s);
    NPart n = bracket_n(a.n, b.n, order_cap) + act_right(a.n, b.s, order_cap) - act_right(b.n, a.s, order_cap);
    return {std::move(s), std::move(n)};
}

DoubleCross compat_residuals(const SPair& xi, const SPair& xi2, const NPart& eta, const NPart& eta2,
                             int order_cap) {
    const SPair lhs1 = act_left(eta, bracket_s(xi, xi2));
    const SPair rhs1 = bracket_s(act_left(eta, xi), xi2) + bracket_s(xi, act_left(eta, xi2)) +
                       act_left(act_right(eta, xi, order_cap), xi2) - act_left(act_right(eta, xi2, order_cap), xi);

    const NPart lhs2 = act_right(bracket_n(eta, eta2, order_cap), xi, order_cap);
    const NPart rhs2 = bracket_n(eta, act_right(eta2, xi, order_cap), order_cap) +
                       bracket_n(act_right(eta, xi, order_cap), eta2, order_cap) +
                       act_right(eta, act_left(eta2, xi), order_cap) - act_right(eta2, act_left(eta, xi), order_cap);
    return {lhs1 - rhs1, lhs2 - rhs2};
}

}  // namespace mpv
