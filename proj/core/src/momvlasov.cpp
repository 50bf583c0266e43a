#include "mpv/momvlasov.hpp"

#include <cmath>
#include <stdexcept>

namespace mpv {

namespace {

void require_same(const PhaseGrid& a, const PhaseGrid& b, const char* what) {
    if (!(a == b)) throw std::invalid_argument(std::string(what) + ": phase grid mismatch");
}

double l2(const PhaseFn& f) { return std::sqrt(quad_qp(f * f)); }

}  // namespace

OneFormGrid::OneFormGrid(PhaseFn q, PhaseFn p) : Pi_q(std::move(q)), Pi_p(std::move(p)) {
    require_same(Pi_q.grid(), Pi_p.grid(), "OneFormGrid");
}

OneFormGrid& OneFormGrid::operator+=(const OneFormGrid& o) {
    Pi_q += o.Pi_q;
    Pi_p += o.Pi_p;
    return *this;
}

OneFormGrid& OneFormGrid::operator-=(const OneFormGrid& o) {
    Pi_q -= o.Pi_q;
    Pi_p -= o.Pi_p;
    return *this;
}

OneFormGrid& OneFormGrid::operator*=(double s) {
    Pi_q *= s;
    Pi_p *= s;
    return *this;
}

PhaseVector& PhaseVector::operator+=(const PhaseVector& o) {
    vq += o.vq;
    vp += o.vp;
    return *this;
}

PhaseVector sharp(const OneFormGrid& Pi) { return {Pi.Pi_p, -Pi.Pi_q}; }

HamField sharp(const OneForm& Pi) {
    if (Pi.Pi_q.dim() != 1 || Pi.Pi_p.dim() != 1) throw std::invalid_argument("sharp: one-forms are 1D only");
    HamField out(1);
    out.qcomp[0] = Pi.Pi_p;
    out.pcomp[0] = -Pi.Pi_q;
    return out;
}

PhaseFn div_sharp(const OneFormGrid& Pi, DiffScheme scheme) { return ddq(Pi.Pi_p, scheme) - ddp(Pi.Pi_q); }

PhasePoly div_sharp(const OneForm& Pi) {
    if (Pi.Pi_q.dim() != 1 || Pi.Pi_p.dim() != 1) throw std::invalid_argument("div_sharp: one-forms are 1D only");
    return partial_q(Pi.Pi_p, 1) - partial_p(Pi.Pi_q, 1);
}

PhaseVector hamiltonian_vector(const PhaseFn& h, DiffScheme scheme) { return {ddp(h), -ddq(h, scheme)}; }

double pair(const OneFormGrid& Pi, const PhaseVector& X) {
    require_same(Pi.grid(), X.vq.grid(), "pair");
    return quad_qp(Pi.Pi_q * X.vq) + quad_qp(Pi.Pi_p * X.vp);
}

double pairing_ham_div(const OneFormGrid& Pi, const PhaseFn& h, DiffScheme scheme) {
    require_same(Pi.grid(), h.grid(), "pairing_ham_div");
    return quad_qp(div_sharp(Pi, scheme) * h);
}

double pairing_ham(const OneFormGrid& Pi, const PhaseFn& h, DiffScheme scheme, double tol) {
    require_same(Pi.grid(), h.grid(), "pairing_ham");
    const PhaseVector X = hamiltonian_vector(h, scheme);
    const double direct = pair(Pi, X);
    const double via_div = pairing_ham_div(Pi, h, scheme);
    const double scale = l2(Pi.Pi_q) * l2(X.vq) + l2(Pi.Pi_p) * l2(X.vp) + l2(div_sharp(Pi, scheme)) * l2(h);
    if (std::abs(direct - via_div) > tol * std::max(scale, 1e-300)) {
        throw std::runtime_error("pairing_ham: direct and divergence forms disagree; check p-decay and band limits");
    }
    return direct;
}

OneFormGrid j_lp_apply(const OneFormGrid& Pi, const PhaseVector& X, DiffScheme scheme) {
    require_same(Pi.grid(), X.vq.grid(), "j_lp_apply");
    const PhaseFn divX = ddq(X.vq, scheme) + ddp(X.vp);
    auto transport = [&](const PhaseFn& a) { return X.vq * ddq(a, scheme) + X.vp * ddp(a) + divX * a; };
    PhaseFn rq = transport(Pi.Pi_q) + Pi.Pi_q * ddq(X.vq, scheme) + Pi.Pi_p * ddq(X.vp, scheme);
    PhaseFn rp = transport(Pi.Pi_p) + Pi.Pi_q * ddp(X.vq) + Pi.Pi_p * ddp(X.vp);
    return {-rq, -rp};
}

PhaseVector vlasov_flow(const GridFn& phi, const PhaseGrid& g, const VlasovParams& params) {
    return {PhaseFn::from_p(g, [m = params.m](double p) { return p / m; }),
            PhaseFn::from_q(g, -params.e * ddq(phi, params.scheme))};
}

GridFn field_for(const OneFormGrid& Pi, const VlasovParams& params) {
    return field_for(div_sharp(Pi, params.scheme), params);
}

OneFormGrid momvlasov_rhs(const OneFormGrid& Pi, const VlasovParams& params) {
    return momvlasov_rhs(Pi, field_for(Pi, params), params);
}

OneFormGrid momvlasov_rhs(const OneFormGrid& Pi, const GridFn& phi, const VlasovParams& params) {
    params.validate();
    const PhaseGrid& g = Pi.grid();
    const GridFn dphi = ddq(phi, params.scheme);
    const GridFn d2phi = ddq(dphi, params.scheme);
    const PhaseFn qq = ddq(Pi.Pi_q, params.scheme), qp = ddp(Pi.Pi_q);
    const PhaseFn pq = ddq(Pi.Pi_p, params.scheme), pp = ddp(Pi.Pi_p);
    OneFormGrid out(g);
    for (int j = 0; j < g.Nq(); ++j) {
        const double force = params.e * dphi[j];
        for (int i = 0; i < g.Np; ++i) {
            const double v = g.p(i) / params.m;
            out.Pi_q.at(j, i) = -(v * qq.at(j, i) - force * qp.at(j, i)) + params.e * d2phi[j] * Pi.Pi_p.at(j, i);
            out.Pi_p.at(j, i) = -(v * pq.at(j, i) - force * pp.at(j, i)) - Pi.Pi_q.at(j, i) / params.m;
        }
    }
    return out;
}

PiSplit split_pi(const OneFormGrid& Pi, int K, DiffScheme scheme) {
    const PhaseGrid& g = Pi.grid();
    const FDecomposition dec = decompose_f(div_sharp(Pi, scheme), K);

    auto lift = [&](const PhaseFn& c) {
        const double tol = 1e-10 * std::max(1.0, c.max_abs());
        OneFormGrid out(g);
        GridFn col(g.spatial);
        for (int i = 0; i < g.Np; ++i) {
            double mean = 0.0;
            for (int j = 0; j < g.Nq(); ++j) {
                col[j] = c.at(j, i);
                mean += col[j];
            }
            mean /= g.Nq();
            if (std::abs(mean) > tol) {
                throw std::domain_error("split_pi: divergence component has nonzero q-mean at p = " +
                                        std::to_string(g.p(i)));
            }
            const GridFn a = antiderivative_q(col, 1.0);
            for (int j = 0; j < g.Nq(); ++j) out.Pi_p.at(j, i) = a[j];
        }
        return out;
    };

    PiSplit out{{}, OneFormGrid(g), OneFormGrid(g), Pi};
    for (std::size_t m = 0; m < dec.components.size(); ++m) {
        OneFormGrid c = lift(dec.components[m]);
        (m <= 1 ? out.Pi_s : out.Pi_n) += c;
        out.components.push_back(std::move(c));
    }
    out.residual -= out.Pi_s;
    out.residual -= out.Pi_n;
    return out;
}

MatchedPiRates matched_momvlasov_rhs(const std::vector<OneFormGrid>& components,
                                     const std::map<int, PhaseVector>& slots, DiffScheme scheme) {
    if (components.empty()) throw std::invalid_argument("matched_momvlasov_rhs: no components");
    const PhaseGrid& g = components.front().grid();
    MatchedPiRates out{OneFormGrid(g), OneFormGrid(g)};
    for (const auto& [k, V] : slots) {
        for (std::size_t l = 0; l < components.size(); ++l) {
            (static_cast<int>(l) <= k ? out.s : out.n) += j_lp_apply(components[l], V, scheme);
        }
    }
    return out;
}

std::map<int, PhaseVector> plasma_field_slots(const GridFn& phi, const PhaseGrid& g, const VlasovParams& params) {
    std::map<int, PhaseVector> slots;
    slots.emplace(0, PhaseVector{PhaseFn(g), PhaseFn::from_q(g, -params.e * ddq(phi, params.scheme))});
    slots.emplace(2, PhaseVector{PhaseFn::from_p(g, [m = params.m](double p) { return p / m; }), PhaseFn(g)});
    return slots;
}

double intertwine_check(const OneFormGrid& Pi, const VlasovParams& params) {
    const GridFn phi = field_for(Pi, params);
    const PhaseFn lhs = div_sharp(momvlasov_rhs(Pi, phi, params), params.scheme);
    const KineticState state{div_sharp(Pi, params.scheme), phi, 0.0};
    const PhaseFn rhs = vlasov_rhs(state, params);
    const double den = l2(rhs);
    const double num = l2(lhs - rhs);
    return den > 0.0 ? num / den : num;
}

}  // namespace mpv
