#include "mpv/kinetic.hpp"

#include <cmath>
#include <stdexcept>

#include "parallel.hpp"
#include "spectral.hpp"

namespace mpv {

namespace {

// Interpolating spline through periodic samples with spacing h; returns the
// second derivatives at the nodes.  The cyclic (1, 4, 1) system is solved by
// Sherman-Morrison on top of a Thomas sweep.
std::vector<double> periodic_spline_moments(const std::vector<double>& y, double h) {
    const int n = static_cast<int>(y.size());
    std::vector<double> r(n);
    const double s = 6.0 / (h * h);
    for (int j = 0; j < n; ++j) r[j] = s * (y[(j + 1) % n] - 2.0 * y[j] + y[(j - 1 + n) % n]);

    // A = T + u v^T with gamma = -4, u = (gamma, 0.., 1), v = (1, 0.., 1/gamma).
    const double gamma = -4.0;
    std::vector<double> diag(n, 4.0);
    diag[0] = 4.0 - gamma;
    diag[n - 1] = 4.0 - 1.0 / gamma;
    auto thomas = [&](std::vector<double> rhs) {
        std::vector<double> c(n), x(n);
        c[0] = 1.0 / diag[0];
        x[0] = rhs[0] / diag[0];
        for (int i = 1; i < n; ++i) {
            const double den = diag[i] - c[i - 1];
            c[i] = 1.0 / den;
            x[i] = (rhs[i] - x[i - 1]) / den;
        }
        for (int i = n - 2; i >= 0; --i) x[i] -= c[i] * x[i + 1];
        return x;
    };
    std::vector<double> u(n, 0.0);
    u[0] = gamma;
    u[n - 1] = 1.0;
    const std::vector<double> x = thomas(r);
    const std::vector<double> z = thomas(u);
    const double fact = (x[0] + x[n - 1] / gamma) / (1.0 + z[0] + z[n - 1] / gamma);
    std::vector<double> out(n);
    for (int i = 0; i < n; ++i) out[i] = x[i] - fact * z[i];
    return out;
}

// Spline with zero end slopes.
std::vector<double> clamped_spline_moments(const std::vector<double>& y, double h) {
    const int n = static_cast<int>(y.size());
    std::vector<double> a(n, 1.0), b(n, 4.0), c(n, 1.0), r(n);
    const double s = 6.0 / (h * h);
    b[0] = 2.0;
    b[n - 1] = 2.0;
    r[0] = s * (y[1] - y[0]);
    r[n - 1] = -s * (y[n - 1] - y[n - 2]);
    for (int i = 1; i < n - 1; ++i) r[i] = s * (y[i + 1] - 2.0 * y[i] + y[i - 1]);
    std::vector<double> cp(n), x(n);
    cp[0] = c[0] / b[0];
    x[0] = r[0] / b[0];
    for (int i = 1; i < n; ++i) {
        const double den = b[i] - a[i] * cp[i - 1];
        cp[i] = c[i] / den;
        x[i] = (r[i] - a[i] * x[i - 1]) / den;
    }
    for (int i = n - 2; i >= 0; --i) x[i] -= cp[i] * x[i + 1];
    return x;
}

double spline_eval(double y0, double y1, double m0, double m1, double t, double h) {
    const double u = 1.0 - t;
    return u * y0 + t * y1 + h * h / 6.0 * ((u * u * u - u) * m0 + (t * t * t - t) * m1);
}

// out_j = y(x_j - shift) on the periodic grid.
void shift_periodic(std::vector<double>& y, double shift, double h) {
    const int n = static_cast<int>(y.size());
    const std::vector<double> M = periodic_spline_moments(y, h);
    const double pos = -shift / h;
    const double fl = std::floor(pos);
    const double t = pos - fl;
    const long base = static_cast<long>(fl);
    std::vector<double> out(n);
    for (int j = 0; j < n; ++j) {
        const int i0 = static_cast<int>(((j + base) % n + n) % n);
        const int i1 = (i0 + 1) % n;
        out[j] = spline_eval(y[i0], y[i1], M[i0], M[i1], t, h);
    }
    y = std::move(out);
}

// out_i = y(x_i + shift) with zero outside the samples.
void shift_bounded(std::span<double> row, double shift, double h) {
    const int n = static_cast<int>(row.size());
    std::vector<double> y(row.begin(), row.end());
    const std::vector<double> M = clamped_spline_moments(y, h);
    const double pos = shift / h;
    const double fl = std::floor(pos);
    const double t = pos - fl;
    const long base = static_cast<long>(fl);
    for (int i = 0; i < n; ++i) {
        const long i0 = i + base;
        if (i0 < 0 || i0 >= n - 1) {
            // The last node itself is reachable only with t == 0.
            row[i] = (i0 == n - 1 && t == 0.0) ? y[n - 1] : 0.0;
            continue;
        }
        row[i] = spline_eval(y[i0], y[i0 + 1], M[i0], M[i0 + 1], t, h);
    }
}

void advect_q(PhaseFn& f, const VlasovParams& params, double dt) {
    const PhaseGrid& g = f.grid();
    detail::parallel_for(g.Np, params.threads, [&](int i) {
        std::vector<double> col(g.Nq());
        for (int j = 0; j < g.Nq(); ++j) col[j] = f.at(j, i);
        shift_periodic(col, g.p(i) * dt / params.m, g.spatial.dq());
        for (int j = 0; j < g.Nq(); ++j) f.at(j, i) = col[j];
    });
}

void advect_p(PhaseFn& f, const GridFn& dphi, const VlasovParams& params, double dt) {
    const PhaseGrid& g = f.grid();
    detail::parallel_for(g.Nq(), params.threads, [&](int j) {
        shift_bounded(f.row(j), params.e * dphi[j] * dt, g.dp());
    });
}

PhaseFn bracket(const PhaseFn& a, const PhaseFn& b, DiffScheme scheme) {
    return ddq(a, scheme) * ddp(b) - ddq(b, scheme) * ddp(a);
}

PhaseFn p_times(const PhaseFn& f) {
    const PhaseGrid& g = f.grid();
    PhaseFn out = f;
    for (int j = 0; j < g.Nq(); ++j) {
        auto row = out.row(j);
        for (int i = 0; i < g.Np; ++i) row[i] *= g.p(i);
    }
    return out;
}

void require_decay(const PhaseFn& f) {
    const PhaseGrid& g = f.grid();
    const double scale = f.max_abs();
    double edge = 0.0;
    for (int j = 0; j < g.Nq(); ++j) edge = std::max({edge, std::abs(f.at(j, 0)), std::abs(f.at(j, g.Np - 1))});
    if (edge > 1e-8 * scale) throw std::domain_error("f does not decay at the momentum boundary");
}

double binomial(int n, int k) {
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

}  // namespace

void VlasovParams::validate() const {
    if (!(m > 0.0) || !std::isfinite(m)) throw std::invalid_argument("VlasovParams: mass must be positive");
    if (!std::isfinite(e)) throw std::invalid_argument("VlasovParams: charge must be finite");
    if (threads < 1) throw std::invalid_argument("VlasovParams: threads must be at least 1");
}

GridFn poisson_solve(const GridFn& rho, const VlasovParams& params) {
    const int n = rho.size();
    double mean = 0.0;
    for (int j = 0; j < n; ++j) mean += rho[j];
    mean /= n;
    const double background = params.background_set ? params.background : mean;
    GridFn src = rho;
    for (int j = 0; j < n; ++j) src[j] -= background;
    if (std::abs(mean - background) > 1e-10 * std::max(1.0, rho.max_abs())) {
        throw std::domain_error("poisson_solve: source has nonzero mean; check the background density");
    }
    GridFn phi(rho.grid());
    const double e = params.e;
    detail::fourier_apply(src.values(), phi.values(), rho.grid().L, [e](int k, double w) -> std::complex<double> {
        if (k == 0) return 0.0;
        return e / (w * w);
    });
    return phi;
}

GridFn field_for(const PhaseFn& f, const VlasovParams& params) {
    if (params.field_mode == FieldMode::Prescribed) {
        if (!(params.prescribed_phi.grid() == f.grid().spatial)) {
            throw std::invalid_argument("field_for: prescribed potential is on a different grid");
        }
        return params.prescribed_phi;
    }
    return poisson_solve(moment_quad(f, 0), params);
}

KineticState make_state(PhaseFn f, const VlasovParams& params) {
    params.validate();
    GridFn phi = field_for(f, params);
    return {std::move(f), std::move(phi), 0.0};
}

PhaseFn vlasov_rhs(const KineticState& state, const VlasovParams& params) {
    const PhaseGrid& g = state.f.grid();
    const PhaseFn fq = ddq(state.f, params.scheme);
    const PhaseFn fp = ddp(state.f);
    const GridFn dphi = ddq(state.phi, params.scheme);
    PhaseFn out(g);
    for (int j = 0; j < g.Nq(); ++j) {
        for (int i = 0; i < g.Np; ++i) {
            out.at(j, i) = params.e * dphi[j] * fp.at(j, i) - g.p(i) / params.m * fq.at(j, i);
        }
    }
    return out;
}

PhaseFn coadjoint_vlasov(const PhaseFn& h, const PhaseFn& f, DiffScheme scheme) { return bracket(f, h, scheme); }

PhaseFn particle_energy(const GridFn& phi, const PhaseGrid& g, const VlasovParams& params) {
    PhaseFn h(g);
    for (int j = 0; j < g.Nq(); ++j) {
        for (int i = 0; i < g.Np; ++i) h.at(j, i) = g.p(i) * g.p(i) / (2.0 * params.m) + params.e * phi[j];
    }
    return h;
}

KineticState step(const KineticState& state, const VlasovParams& params, double dt) {
    params.validate();
    const PhaseGrid& g = state.f.grid();
    if (!(dt > 0.0)) throw std::invalid_argument("step: dt must be positive");
    if (dt * g.Pmax / (params.m * g.spatial.dq()) >= 5.0) {
        throw std::invalid_argument("step: dt * Pmax / (m dq) must stay below 5");
    }
    KineticState out = state;
    advect_q(out.f, params, 0.5 * dt);
    const GridFn dphi = ddq(field_for(out.f, params), params.scheme);
    advect_p(out.f, dphi, params, dt);
    advect_q(out.f, params, 0.5 * dt);
    if (!out.f.all_finite()) throw NonFiniteState("step: distribution is no longer finite");
    out.phi = field_for(out.f, params);
    out.t = state.t + dt;
    return out;
}

Diagnostics diagnostics(const KineticState& state, const VlasovParams& params) {
    const PhaseGrid& g = state.f.grid();
    PhaseFn kinetic = state.f;
    PhaseFn sq = state.f * state.f;
    for (int j = 0; j < g.Nq(); ++j) {
        auto row = kinetic.row(j);
        for (int i = 0; i < g.Np; ++i) row[i] *= g.p(i) * g.p(i) / (2.0 * params.m);
    }
    double field = 0.0;
    if (params.field_mode == FieldMode::Prescribed) {
        field = quad_qp(PhaseFn::from_q(g, params.e * state.phi) * state.f);
    } else {
        const GridFn dphi = ddq(state.phi, params.scheme);
        field = 0.5 * quad_q(dphi * dphi);
    }
    return {quad_qp(state.f), std::sqrt(quad_qp(sq)), quad_qp(kinetic) + field};
}

PhaseFn f_component(const PhaseFn& f, int m) {
    if (m < 0) throw std::invalid_argument("f_component: negative order");
    require_decay(f);
    PhaseFn fk = f;
    double fact = 1.0;
    for (int k = 0; k < m; ++k) {
        PhaseFn next = -1.0 * ddp_conservative(p_times(fk));
        next -= static_cast<double>(k) * fk;
        fk = std::move(next);
        fact *= k + 1;
    }
    return (1.0 / fact) * fk;
}

FDecomposition decompose_f(const PhaseFn& f, int K) {
    if (K < 1) throw std::invalid_argument("decompose_f: K must be at least 1");
    require_decay(f);
    const PhaseGrid& g = f.grid();
    std::vector<PhaseFn> raw;
    raw.reserve(K + 1);
    PhaseFn fk = f;
    double fact = 1.0;
    for (int k = 0; k <= K; ++k) {
        if (k > 0) fact *= k;
        raw.push_back((1.0 / fact) * fk);
        PhaseFn next = -1.0 * ddp_conservative(p_times(fk));
        next -= static_cast<double>(k) * fk;
        fk = std::move(next);
    }
    FDecomposition out{{}, PhaseFn(g), PhaseFn(g), f};
    for (int m = 0; m <= K; ++m) {
        PhaseFn c(g);
        for (int i = m; i <= K; ++i) {
            const double sign = ((i - m) % 2 == 0) ? 1.0 : -1.0;
            c += (sign * binomial(i, m)) * raw[i];
        }
        (m <= 1 ? out.f_s : out.f_n) += c;
        out.components.push_back(std::move(c));
    }
    out.residual -= out.f_s;
    out.residual -= out.f_n;
    return out;
}

MatchedRates matched_vlasov_rhs(const std::vector<PhaseFn>& components, const std::map<int, PhaseFn>& slots,
                                DiffScheme scheme) {
    if (components.empty()) throw std::invalid_argument("matched_vlasov_rhs: no components");
    const PhaseGrid& g = components.front().grid();
    MatchedRates out{PhaseFn(g), PhaseFn(g)};
    for (const auto& [k, h] : slots) {
        for (std::size_t l = 0; l < components.size(); ++l) {
            PhaseFn term = bracket(h, components[l], scheme);
            (static_cast<int>(l) <= k ? out.s : out.n) += term;
        }
    }
    return out;
}

std::map<int, PhaseFn> plasma_slots(const GridFn& phi, const PhaseGrid& g, const VlasovParams& params) {
    std::map<int, PhaseFn> slots;
    slots.emplace(0, PhaseFn::from_q(g, params.e * phi));
    slots.emplace(2, PhaseFn::from_p(g, [m = params.m](double p) { return p * p / (2.0 * m); }));
    return slots;
}

MomentState moments_of(const PhaseFn& f, int K) {
    std::vector<GridFn> a;
    for (int m = 0; m <= K; ++m) a.push_back(moment_quad(f, m));
    return MomentState(std::move(a));
}

std::vector<double> poisson_map_check(const PhaseFn& f, const VlasovParams& params, int K) {
    if (params.field_mode != FieldMode::Prescribed) {
        throw std::invalid_argument("poisson_map_check: needs the prescribed field mode");
    }
    const KineticState state = make_state(f, params);
    const PhaseFn rate = vlasov_rhs(state, params);

    // Order K of the hierarchy couples to A_{K+1}, so the moment side carries one extra order.
    const MomentState S = moments_of(f, K + 1);
    const SpatialGrid& sg = f.grid().spatial;
    Variational H{SField(params.e * state.phi, GridFn(sg)), {}};
    H.n.emplace(2, GridFn(sg, 1.0 / (2.0 * params.m)));
    const MomentState lp = lp_rhs(H, S, nullptr, params.scheme);

    std::vector<GridFn> kin;
    double scale = 0.0;
    for (int m = 0; m <= K; ++m) {
        kin.push_back(moment_quad(rate, m));
        scale = std::max(scale, std::sqrt(quad_q(kin.back() * kin.back())));
    }
    std::vector<double> err;
    for (int m = 0; m <= K; ++m) {
        const GridFn d = kin[m] - lp[m];
        const double num = std::sqrt(quad_q(d * d));
        const double den = std::max(std::sqrt(quad_q(kin[m] * kin[m])), 1e-8 * scale);
        err.push_back(den > 0.0 ? num / den : num);
    }
    return err;
}

}  // namespace mpv
