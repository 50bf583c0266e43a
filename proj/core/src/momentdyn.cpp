#include "mpv/momentdyn.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace mpv {

namespace {

const GridFn* find(const std::map<int, GridFn>& m, int k) {
    auto it = m.find(k);
    return it == m.end() ? nullptr : &it->second;
}

void accumulate(std::map<int, GridFn>& m, int k, const GridFn& v) {
    auto [it, inserted] = m.try_emplace(k, v);
    if (!inserted) it->second += v;
}

}  // namespace

MomentState::MomentState(const SpatialGrid& g, int K) : a_(K + 1, GridFn(g)) {
    if (K < 1) throw std::invalid_argument("MomentState: K must be at least 1");
}

MomentState::MomentState(std::vector<GridFn> orders) : a_(std::move(orders)) {
    if (a_.size() < 2) throw std::invalid_argument("MomentState: needs at least rho and M");
    for (const auto& f : a_) {
        if (!(f.grid() == a_.front().grid())) throw std::invalid_argument("MomentState: grid mismatch");
    }
}

bool MomentState::all_finite() const {
    return std::all_of(a_.begin(), a_.end(), [](const GridFn& f) { return f.all_finite(); });
}

double MomentState::max_abs() const {
    double m = 0.0;
    for (const auto& f : a_) m = std::max(m, f.max_abs());
    return m;
}

MomentState& MomentState::operator+=(const MomentState& o) {
    if (o.K() != K()) throw std::invalid_argument("MomentState +: order mismatch");
    for (std::size_t m = 0; m < a_.size(); ++m) a_[m] += o.a_[m];
    return *this;
}

MomentState& MomentState::operator*=(double s) {
    for (auto& f : a_) f *= s;
    return *this;
}

ContraField embed(const SField& s, const NField& n) {
    ContraField out;
    const int top = n.empty() ? 1 : std::max(1, n.rbegin()->first);
    out.X.assign(top + 1, GridFn(s.sigma.grid()));
    out.X[0] = s.sigma;
    out.X[1] = s.Y;
    for (const auto& [k, x] : n) {
        if (k < 2) throw std::invalid_argument("embed: NField orders must be at least 2");
        out.X[k] = x;
    }
    return out;
}

SDual s_part(const MomentState& S) { return {S.rho(), S.M()}; }

NDual n_part(const MomentState& S) {
    NDual out;
    for (int m = 2; m <= S.K(); ++m) out.emplace(m, S[m]);
    return out;
}

MomentState assemble(const SDual& s, const NDual& n, int K) {
    MomentState out(s.rho.grid(), K);
    out.rho() = s.rho;
    out.M() = s.M;
    for (const auto& [m, a] : n) {
        if (m < 2 || m > K) throw std::invalid_argument("assemble: order outside 2..K");
        out[m] = a;
    }
    return out;
}

std::string TruncationReport::to_text() const {
    std::ostringstream os;
    os << "dropped terms: " << dropped.size() << '\n';
    for (const auto& d : dropped) {
        os << "result order " << d.result_order << ", field order " << d.field_order << ", needs A_"
           << d.needed_order << '\n';
    }
    return os.str();
}

GridFn star(const GridFn& A, const GridFn& X, int m, DiffScheme scheme) {
    if (m < 0) throw std::invalid_argument("star: negative order");
    return static_cast<double>(m) * (A * ddq(X, scheme));
}

GridFn ast(const GridFn& X, const GridFn& A, int k, DiffScheme scheme) {
    if (k < 0) throw std::invalid_argument("ast: negative order");
    return static_cast<double>(k) * (X * ddq(A, scheme));
}

GridFn gen_lie(const GridFn& X, const GridFn& A, int k, int m, DiffScheme scheme) {
    return star(A, X, m, scheme) + ast(X, A, k, scheme);
}

GridFn div_tensor(const GridFn& X, int k, DiffScheme scheme) {
    if (k < 0) throw std::invalid_argument("div_tensor: negative order");
    return static_cast<double>(k) * ddq(X, scheme);
}

GridFn coad_term(const GridFn& X, int k, const GridFn& A, int j, DiffScheme scheme) {
    const int m = j - k + 1;
    if (m < 0 || k < 0) throw std::invalid_argument("coad_term: negative order");
    return gen_lie(X, A, k, m, scheme) + div_tensor(X, k, scheme) * A;
}

MomentState coad_full(const ContraField& X, const MomentState& S, TruncationReport* report, DiffScheme scheme) {
    const int K = S.K();
    MomentState out(S.grid(), K);
    for (int m = 0; m <= K; ++m) {
        for (int k = 0; k <= X.max_order(); ++k) {
            const int j = m + k - 1;
            if (j < 0) continue;
            if (j > K) {
                if (report && X.X[k].max_abs() > 0.0) report->dropped.push_back({m, k, j});
                continue;
            }
            out[m] += coad_term(X.X[k], k, S[j], j, scheme);
        }
    }
    return out;
}

SDual coad_s_on_sdual(const SField& s, const SDual& S, DiffScheme scheme) {
    return {coad_term(s.Y, 1, S.rho, 0, scheme), coad_term(s.sigma, 0, S.rho, 0, scheme) + coad_term(s.Y, 1, S.M, 1, scheme)};
}

NDual coad_n_on_ndual(const NField& X, const NDual& A, int K, TruncationReport* report, DiffScheme scheme) {
    NDual out;
    for (int m = 2; m <= K; ++m) {
        for (const auto& [k, x] : X) {
            const int j = m + k - 1;
            if (j > K) {
                if (report && x.max_abs() > 0.0) report->dropped.push_back({m, k, j});
                continue;
            }
            if (const GridFn* a = find(A, j)) accumulate(out, m, coad_term(x, k, *a, j, scheme));
        }
    }
    return out;
}

SDual dual_right(const SDual& S, const NField& Xn, DiffScheme scheme) {
    SDual out{GridFn(S.rho.grid()), GridFn(S.rho.grid())};
    if (const GridFn* x2 = find(Xn, 2)) out.rho -= coad_term(*x2, 2, S.M, 1, scheme);
    return out;
}

NDual dual_left(const SField& s, const NDual& A, int K, DiffScheme scheme) {
    NDual out;
    for (int m = 2; m <= K; ++m) {
        if (const GridFn* a = find(A, m)) accumulate(out, m, coad_term(s.Y, 1, *a, m, scheme));
        if (m >= 3) {
            if (const GridFn* a = find(A, m - 1)) accumulate(out, m, coad_term(s.sigma, 0, *a, m - 1, scheme));
        }
    }
    return out;
}

NDual b_star(const SField& s, const SDual& S, DiffScheme scheme) {
    NDual out;
    out.emplace(2, coad_term(s.sigma, 0, S.M, 1, scheme));
    return out;
}

SDual a_star(const NField& Xn, const NDual& A, DiffScheme scheme) {
    if (Xn.empty() && A.empty()) throw std::invalid_argument("a_star: no field to take the grid from");
    const SpatialGrid& g = Xn.empty() ? A.begin()->second.grid() : Xn.begin()->second.grid();
    SDual out{GridFn(g), GridFn(g)};
    for (const auto& [k, a] : A) {
        if (const GridFn* x = find(Xn, k + 1)) out.rho -= coad_term(*x, k + 1, a, k, scheme);
        if (const GridFn* x = find(Xn, k)) out.M -= coad_term(*x, k, a, k, scheme);
    }
    return out;
}

MomentState matched_coadjoint(const SField& s, const NField& Xn, const MomentState& S, TruncationReport* report,
                              DiffScheme scheme) {
    const int K = S.K();
    const SDual sd = s_part(S);
    const NDual nd = n_part(S);

    SDual s_out = coad_s_on_sdual(s, sd, scheme);
    if (!Xn.empty()) {
        const SDual r = dual_right(sd, Xn, scheme);
        const SDual a = a_star(Xn, nd, scheme);
        s_out.rho -= r.rho;
        s_out.M -= r.M;
        s_out.rho -= a.rho;
        s_out.M -= a.M;
    }

    NDual n_out = coad_n_on_ndual(Xn, nd, K, report, scheme);
    for (const auto& [m, v] : dual_left(s, nd, K, scheme)) accumulate(n_out, m, v);
    if (K >= 2) {
        for (const auto& [m, v] : b_star(s, sd, scheme)) accumulate(n_out, m, v);
    }
    return assemble(s_out, n_out, K);
}

MomentState lp_rhs(const Variational& H, const MomentState& S, TruncationReport* report, DiffScheme scheme) {
    const int K = S.K();
    const SDual sd = s_part(S);
    const NDual nd = n_part(S);

    // s* block: -ad*_s (rho, M) + (rho, M) <* dH/dA + a*_{dH/dA} A
    SDual s_out = coad_s_on_sdual(H.s, sd, scheme);
    s_out *= -1.0;
    if (!H.n.empty()) {
        s_out += dual_right(sd, H.n, scheme);
        s_out += a_star(H.n, nd, scheme);
    }

    // n* block: -ad*_{dH/dA} A - s |>* A - b*_s (rho, M)
    NDual n_out;
    for (const auto& [m, v] : coad_n_on_ndual(H.n, nd, K, report, scheme)) accumulate(n_out, m, -1.0 * v);
    for (const auto& [m, v] : dual_left(H.s, nd, K, scheme)) accumulate(n_out, m, -1.0 * v);
    if (K >= 2) {
        for (const auto& [m, v] : b_star(H.s, sd, scheme)) accumulate(n_out, m, -1.0 * v);
    }
    return assemble(s_out, n_out, K);
}

FluidHamiltonian FluidHamiltonian::polytropic(double kappa, double gamma, bool half_factor) {
    if (!(gamma > 1.0)) throw std::invalid_argument("polytropic: gamma must exceed 1");
    FluidHamiltonian H;
    H.w = [kappa, gamma](double rho) { return kappa * std::pow(rho, gamma - 1.0) / (gamma - 1.0); };
    H.dw = [kappa, gamma](double rho) { return kappa * std::pow(rho, gamma - 2.0); };
    H.bernoulli_half_factor = half_factor;
    return H;
}

SField euler_variational(const FluidHamiltonian& H, const SDual& S) {
    const SpatialGrid& g = S.rho.grid();
    const double c = H.bernoulli_half_factor ? 0.5 : 1.0;
    SField out(g);
    for (int j = 0; j < g.Nq; ++j) {
        const double rho = S.rho[j];
        if (!(rho > 0.0)) throw std::domain_error("euler_rhs: density must be positive");
        const double Y = S.M[j] / rho;
        out.Y[j] = Y;
        out.sigma[j] = -c * Y * Y + H.enthalpy(rho);
    }
    return out;
}

SDual euler_rhs(const FluidHamiltonian& H, const SDual& S, DiffScheme scheme) {
    SDual out = coad_s_on_sdual(euler_variational(H, S), S, scheme);
    out *= -1.0;
    return out;
}

NDual n_rhs(const NField& H, const NDual& A, int K, TruncationReport* report, DiffScheme scheme) {
    NDual out = coad_n_on_ndual(H, A, K, report, scheme);
    for (auto& [m, v] : out) v *= -1.0;
    return out;
}

}  // namespace mpv
