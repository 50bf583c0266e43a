#include "mpv/phasealg.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace mpv {

namespace {

void require_same_dim(int a, int b, const char* where) {
    if (a != b) throw std::invalid_argument(std::string(where) + ": dimension mismatch");
}

void check_momentum_index(const IndexSet& I, int dim) {
    for (int i : I) {
        if (i < 1 || i > dim) throw std::out_of_range("PhasePoly: momentum index out of range");
    }
}

// k! / prod(alpha_j!) for the multiset I.
Rational multinomial(const IndexSet& I) {
    mpz_class num = 1;
    for (std::size_t i = 2; i <= I.size(); ++i) num *= static_cast<unsigned long>(i);
    mpz_class den = 1;
    std::size_t run = 0;
    for (std::size_t i = 0; i < I.size(); ++i) {
        run = (i > 0 && I[i] == I[i - 1]) ? run + 1 : 1;
        den *= static_cast<unsigned long>(run);
    }
    Rational r(num, den);
    r.canonicalize();
    return r;
}

IndexSet merge(const IndexSet& a, const IndexSet& b) {
    IndexSet out;
    out.reserve(a.size() + b.size());
    std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

// Calls fn(tuple) for every ordered tuple of length k over {1..dim}.
template <class Fn>
void for_each_tuple(int dim, int k, Fn&& fn) {
    std::vector<int> t(k, 1);
    while (true) {
        fn(t);
        int pos = k - 1;
        while (pos >= 0 && t[pos] == dim) t[pos--] = 1;
        if (pos < 0) return;
        ++t[pos];
    }
}

void require_degrees(const PhasePoly& Xhat, const PhasePoly& sHat, const char* where) {
    require_same_dim(Xhat.dim(), sHat.dim(), where);
    if (!Xhat.is_zero() && Xhat.p_low_degree() < 2) {
        throw std::domain_error(std::string(where) + ": first argument has p-degree below 2");
    }
    if (sHat.p_degree() > 1) throw std::domain_error(std::string(where) + ": second argument has p-degree above 1");
}

}  // namespace

PhasePoly::PhasePoly(int dim) : dim_(dim) {
    if (dim < 1 || dim > kMaxTensorDim) {
        throw std::invalid_argument("PhasePoly: dimension must be in 1.." + std::to_string(kMaxTensorDim));
    }
}

PhasePoly PhasePoly::from_q(const Poly& c) {
    PhasePoly h(c.dim());
    h.add_term({}, c);
    return h;
}

PhasePoly PhasePoly::monomial(const Poly& c, IndexSet I) {
    PhasePoly h(c.dim());
    h.add_term(std::move(I), c);
    return h;
}

PhasePoly PhasePoly::momentum(int dim, int axis) { return monomial(Poly::constant(dim, 1), {axis}); }

int PhasePoly::p_degree() const {
    int d = -1;
    for (const auto& [I, c] : terms_) d = std::max(d, static_cast<int>(I.size()));
    return d;
}

int PhasePoly::p_low_degree() const {
    if (terms_.empty()) return -1;
    int d = static_cast<int>(terms_.begin()->first.size());
    for (const auto& [I, c] : terms_) d = std::min(d, static_cast<int>(I.size()));
    return d;
}

Poly PhasePoly::coeff(IndexSet I) const {
    std::sort(I.begin(), I.end());
    auto it = terms_.find(I);
    return it == terms_.end() ? Poly(dim_) : it->second;
}

void PhasePoly::add_term(IndexSet I, const Poly& c) {
    require_same_dim(c.dim(), dim_, "PhasePoly::add_term");
    check_momentum_index(I, dim_);
    if (c.is_zero()) return;
    std::sort(I.begin(), I.end());
    auto [it, inserted] = terms_.try_emplace(std::move(I), c);
    if (!inserted) {
        it->second += c;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

PhasePoly PhasePoly::degree_range(int lo, int hi) const {
    PhasePoly out(dim_);
    for (const auto& [I, c] : terms_) {
        const int d = static_cast<int>(I.size());
        if (d >= lo && d <= hi) out.terms_.emplace(I, c);
    }
    return out;
}

PhasePoly& PhasePoly::operator+=(const PhasePoly& o) {
    require_same_dim(dim_, o.dim_, "PhasePoly +");
    for (const auto& [I, c] : o.terms_) add_term(I, c);
    return *this;
}

PhasePoly& PhasePoly::operator-=(const PhasePoly& o) {
    require_same_dim(dim_, o.dim_, "PhasePoly -");
    for (const auto& [I, c] : o.terms_) add_term(I, -c);
    return *this;
}

PhasePoly& PhasePoly::operator*=(const Rational& s) {
    if (s == 0) {
        terms_.clear();
        return *this;
    }
    for (auto& [I, c] : terms_) c *= s;
    return *this;
}

PhasePoly operator*(const PhasePoly& a, const PhasePoly& b) {
    require_same_dim(a.dim_, b.dim_, "PhasePoly *");
    PhasePoly out(a.dim_);
    for (const auto& [Ia, ca] : a.terms_) {
        for (const auto& [Ib, cb] : b.terms_) out.add_term(merge(Ia, Ib), ca * cb);
    }
    return out;
}

PhasePoly PhasePoly::operator-() const {
    PhasePoly out = *this;
    for (auto& [I, c] : out.terms_) c = -c;
    return out;
}

std::string PhasePoly::to_string() const {
    if (terms_.empty()) return "0";
    std::vector<const TermMap::value_type*> order;
    for (const auto& t : terms_) order.push_back(&t);
    std::stable_sort(order.begin(), order.end(),
                     [](auto* a, auto* b) { return a->first.size() > b->first.size(); });
    std::ostringstream os;
    bool first = true;
    for (const auto* t : order) {
        if (!first) os << " + ";
        first = false;
        os << '(' << t->second.to_string() << ')';
        const IndexSet& I = t->first;
        if (I.empty()) continue;
        os << " *";
        for (std::size_t i = 0; i < I.size();) {
            std::size_t j = i;
            while (j < I.size() && I[j] == I[i]) ++j;
            os << " p" << I[i];
            if (j - i > 1) os << '^' << (j - i);
            i = j;
        }
    }
    return os.str();
}

PhasePoly partial_q(const PhasePoly& h, int axis) {
    if (axis < 1 || axis > h.dim()) throw std::out_of_range("partial_q: axis out of range");
    PhasePoly out(h.dim());
    for (const auto& [I, c] : h.terms()) out.add_term(I, partial(c, axis));
    return out;
}

PhasePoly partial_p(const PhasePoly& h, int axis) {
    if (axis < 1 || axis > h.dim()) throw std::out_of_range("partial_p: axis out of range");
    PhasePoly out(h.dim());
    for (const auto& [I, c] : h.terms()) {
        auto it = std::find(I.begin(), I.end(), axis);
        if (it == I.end()) continue;
        const long mult = std::count(I.begin(), I.end(), axis);
        IndexSet rest = I;
        rest.erase(rest.begin() + (it - I.begin()));
        out.add_term(std::move(rest), c * Rational(mult));
    }
    return out;
}

double evaluate(const PhasePoly& h, std::span<const double> q, std::span<const double> p) {
    if (static_cast<int>(q.size()) != h.dim() || static_cast<int>(p.size()) != h.dim()) {
        throw std::invalid_argument("evaluate: point length does not match dimension");
    }
    double sum = 0.0;
    for (const auto& [I, c] : h.terms()) {
        double mono = 1.0;
        for (int i : I) mono *= p[i - 1];
        sum += evaluate(c, q) * mono;
    }
    return sum;
}

PhasePoly kappa(const SymTensor& X) {
    PhasePoly out(X.dim());
    for (const auto& [I, c] : X.components()) out.add_term(I, c * multinomial(I));
    return out;
}

PhasePoly kappa(const GradedTensor& X) {
    PhasePoly out(X.dim());
    for (const auto& [k, t] : X.parts()) out += kappa(t);
    return out;
}

GradedTensor kappa_inv(const PhasePoly& h) {
    GradedTensor out(h.dim());
    for (const auto& [I, c] : h.terms()) {
        SymTensor t(h.dim(), static_cast<int>(I.size()));
        t.set(I, c * (Rational(1) / multinomial(I)));
        out.add(t);
    }
    return out;
}

PhasePoly canonical_bracket(const PhasePoly& h, const PhasePoly& g) {
    require_same_dim(h.dim(), g.dim(), "canonical_bracket");
    PhasePoly out(h.dim());
    for (int l = 1; l <= h.dim(); ++l) {
        out += partial_q(h, l) * partial_p(g, l);
        out -= partial_q(g, l) * partial_p(h, l);
    }
    return out;
}

PhaseSplit decompose_phase(const PhasePoly& h) {
    return {h.degree_range(0, 1), h.degree_range(2, h.p_degree())};
}

PhasePoly act_left_phase(const PhasePoly& Xhat, const PhasePoly& sHat) {
    require_degrees(Xhat, sHat, "act_left_phase");
    const int n = Xhat.dim();
    const GradedTensor X = kappa_inv(Xhat);
    const SymTensor X2 = X.part(2);
    const Poly sigma = sHat.coeff({});
    PhasePoly out(n);
    for (int i = 1; i <= n; ++i) {
        Poly c(n);
        for (int l = 1; l <= n; ++l) c += partial(sigma, l) * X2.component({i, l});
        out.add_term({i}, c * Rational(2));
    }
    return out;
}

PhasePoly act_right_phase(const PhasePoly& Xhat, const PhasePoly& sHat) {
    require_degrees(Xhat, sHat, "act_right_phase");
    const int n = Xhat.dim();
    const GradedTensor X = kappa_inv(Xhat);
    const Poly sigma = sHat.coeff({});
    std::vector<Poly> Y;
    for (int l = 1; l <= n; ++l) Y.push_back(sHat.coeff({l}));

    PhasePoly out(n);
    const int top = X.max_order();
    for (int k = 2; k <= top; ++k) {
        const SymTensor Xk = X.part(k);
        const SymTensor Xk1 = X.part(k + 1);
        for_each_tuple(n, k, [&](const std::vector<int>& I) {
            Poly c(n);
            for (int l = 1; l <= n; ++l) {
                c -= partial(Xk.component(I), l) * Y[l - 1];
                IndexSet head(I.begin(), I.end() - 1);
                head.push_back(l);
                c += Rational(k) * Xk.component(head) * partial(Y[I.back() - 1], l);
                IndexSet ext = I;
                ext.push_back(l);
                c += Rational(k + 1) * partial(sigma, l) * Xk1.component(ext);
            }
            out.add_term(I, c);
        });
    }
    return out;
}

HamField::HamField(int dim) : qcomp(dim, PhasePoly(dim)), pcomp(dim, PhasePoly(dim)) {}

bool HamField::is_zero() const {
    return std::all_of(qcomp.begin(), qcomp.end(), [](const PhasePoly& c) { return c.is_zero(); }) &&
           std::all_of(pcomp.begin(), pcomp.end(), [](const PhasePoly& c) { return c.is_zero(); });
}

PhasePoly HamField::apply(const PhasePoly& f) const {
    require_same_dim(dim(), f.dim(), "HamField::apply");
    PhasePoly out(f.dim());
    for (int l = 1; l <= dim(); ++l) {
        out += qcomp[l - 1] * partial_q(f, l);
        out += pcomp[l - 1] * partial_p(f, l);
    }
    return out;
}

HamField operator-(const HamField& a) {
    HamField out(a.dim());
    for (int l = 0; l < a.dim(); ++l) {
        out.qcomp[l] = -a.qcomp[l];
        out.pcomp[l] = -a.pcomp[l];
    }
    return out;
}

HamField hamiltonian_field(const PhasePoly& h) {
    HamField out(h.dim());
    for (int l = 1; l <= h.dim(); ++l) {
        out.qcomp[l - 1] = -partial_p(h, l);
        out.pcomp[l - 1] = partial_q(h, l);
    }
    return out;
}

HamField gccl(const SymTensor& X) {
    const int n = X.dim();
    const int k = X.order();
    HamField out(n);
    for (int l = 1; l <= n; ++l) {
        if (k >= 1) {
            for_each_tuple(n, k - 1, [&](const std::vector<int>& J) {
                IndexSet full(J.begin(), J.end());
                full.push_back(l);
                out.qcomp[l - 1].add_term(J, X.component(full) * Rational(-k));
            });
        }
        for_each_tuple(n, k, [&](const std::vector<int>& I) {
            out.pcomp[l - 1].add_term(I, partial(X.component(I), l));
        });
    }
    return out;
}

HamField jacobi_lie_bracket(const HamField& a, const HamField& b) {
    require_same_dim(a.dim(), b.dim(), "jacobi_lie_bracket");
    HamField out(a.dim());
    for (int l = 0; l < a.dim(); ++l) {
        out.qcomp[l] = a.apply(b.qcomp[l]) - b.apply(a.qcomp[l]);
        out.pcomp[l] = a.apply(b.pcomp[l]) - b.apply(a.pcomp[l]);
    }
    return out;
}

}  // namespace mpv
