#include "mpv/scenario.hpp"

#include <fftw3.h>
#include <gmp.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <sstream>

#include "mpv/corpus.hpp"
#include "mpv/kinetic.hpp"
#include "mpv/lcg.hpp"
#include "mpv/momentdyn.hpp"
#include "mpv/momvlasov.hpp"
#include "mpv/phasealg.hpp"
#include "mpv/schouten.hpp"

#ifndef MPV_VERSION
#define MPV_VERSION "unknown"
#endif

namespace mpv {

namespace fs = std::filesystem;

namespace {

std::string num(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

// ---------------------------------------------------------------------------
// Closed-form test functions  h(q, p) = sum_j c_j(q) p^j.

struct PolyTrig {
    std::vector<TrigSeries> c;

    double coeff(int j, double q, int dq) const {
        const TrigSeries& t = c[j];
        const double w = 2.0 * std::numbers::pi / t.L;
        if (dq == 0) return t.value(q);
        if (dq == 1) return t.derivative(q);
        double s = 0.0;
        for (std::size_t k = 1; k < t.a.size(); ++k) {
            s -= w * w * k * k * (t.a[k] * std::cos(w * k * q) + t.b[k] * std::sin(w * k * q));
        }
        return s;
    }

    // d^dq/dq^dq d^dp/dp^dp h at (q, p).
    double eval(double q, double p, int dq, int dp) const {
        double s = 0.0;
        for (int j = dp; j < static_cast<int>(c.size()); ++j) {
            double f = 1.0;
            for (int r = 0; r < dp; ++r) f *= j - r;
            s += f * coeff(j, q, dq) * std::pow(p, j - dp);
        }
        return s;
    }
};

PolyTrig random_polytrig(Lcg64& rng, double L, int p_degree, int modes) {
    PolyTrig h;
    for (int j = 0; j <= p_degree; ++j) h.c.push_back(random_trig_series(rng, L, modes));
    return h;
}

// Particle flow (h_p, -h_q) sampled exactly.
PhaseVector exact_flow(const PolyTrig& h, const PhaseGrid& g) {
    return {PhaseFn::from(g, [&](double q, double p) { return h.eval(q, p, 0, 1); }),
            PhaseFn::from(g, [&](double q, double p) { return -h.eval(q, p, 1, 0); })};
}

// Flow of {g, h} = g_q h_p - g_p h_q, sampled exactly.
PhaseVector exact_bracket_flow(const PolyTrig& g_, const PolyTrig& h, const PhaseGrid& g) {
    auto d = [&](const PolyTrig& f, double q, double p, int a, int b) { return f.eval(q, p, a, b); };
    auto dp = [&](double q, double p) {
        return d(g_, q, p, 1, 1) * d(h, q, p, 0, 1) + d(g_, q, p, 1, 0) * d(h, q, p, 0, 2) -
               d(g_, q, p, 0, 2) * d(h, q, p, 1, 0) - d(g_, q, p, 0, 1) * d(h, q, p, 1, 1);
    };
    auto dq = [&](double q, double p) {
        return d(g_, q, p, 2, 0) * d(h, q, p, 0, 1) + d(g_, q, p, 1, 0) * d(h, q, p, 1, 1) -
               d(g_, q, p, 1, 1) * d(h, q, p, 1, 0) - d(g_, q, p, 0, 1) * d(h, q, p, 2, 0);
    };
    return {PhaseFn::from(g, dp), PhaseFn::from(g, [&](double q, double p) { return -dq(q, p); })};
}

double l2(const PhaseFn& f) { return std::sqrt(quad_qp(f * f)); }

double rel(double a, double b, double floor) { return std::abs(a - b) / std::max({std::abs(a), std::abs(b), floor}); }

// ---------------------------------------------------------------------------
// Shared run plumbing.

struct Run {
    Config cfg;
    fs::path dir;
    std::ostream& out;
    bool quiet;
    std::vector<std::string> written;
    std::vector<std::pair<std::string, std::string>> manifest;
    bool violated = false;

    std::ofstream open(const std::string& name) {
        written.push_back(name);
        std::ofstream f(dir / name, std::ios::binary);
        if (!f) throw std::runtime_error("cannot write " + (dir / name).string());
        return f;
    }
    void note(const std::string& key, const std::string& value) { manifest.emplace_back(key, value); }
    void note(const std::string& key, double value) { note(key, num(value)); }
    void say(const std::string& line) {
        if (!quiet) out << line << '\n';
    }
    // Records a checked quantity; a failed check marks the run as a violation.
    void check(const std::string& name, double value, double tolerance, bool ok) {
        note("result." + name, value);
        note("tolerance." + name, tolerance);
        if (!ok) violated = true;
        say(std::string(ok ? "ok    " : "FAIL  ") + name + " = " + num(value) + " (tolerance " + num(tolerance) + ")");
    }
    void check_le(const std::string& name, double value, double tolerance) {
        check(name, value, tolerance, value <= tolerance);
    }
};

PhaseGrid phase_grid(const Config& c) { return PhaseGrid(SpatialGrid(c.L, c.Nq), c.Pmax, c.Np); }

GridFn prescribed_phi(const Config& c, const SpatialGrid& g) {
    const double w = 2.0 * std::numbers::pi * c.mode / c.L;
    return GridFn::from(g, [&](double q) { return c.phi_amplitude * std::sin(w * q); });
}

VlasovParams vlasov_params(const Config& c, const SpatialGrid& g) {
    VlasovParams p;
    p.m = c.m;
    p.e = c.e;
    p.field_mode = c.field_mode;
    p.prescribed_phi = prescribed_phi(c, g);
    p.scheme = c.scheme;
    p.threads = c.threads;
    return p;
}

double maxwellian(double p, double mu, double s) {
    const double x = (p - mu) / s;
    return std::exp(-0.5 * x * x) / (std::sqrt(2.0 * std::numbers::pi) * s);
}

std::function<double(double, double)> initial_profile(const Config& c) {
    const double w = 2.0 * std::numbers::pi * c.mode / c.L;
    const double a = c.amplitude;
    const double s = c.thermal_width;
    const double u = c.drift;
    if (c.initial == "bump") {
        return [=](double q, double p) {
            return (1.0 + a * std::cos(w * q)) * (0.9 * maxwellian(p, u, s) + 0.1 * maxwellian(p, u + 3.0 * s, 0.5 * s));
        };
    }
    return [=](double q, double p) { return (1.0 + a * std::cos(w * q)) * maxwellian(p, u, s); };
}

void warn_boundary(const PhaseFn& f, std::ostream& err) {
    const PhaseGrid& g = f.grid();
    double edge = 0.0;
    for (int j = 0; j < g.Nq(); ++j) edge = std::max({edge, std::abs(f.at(j, 0)), std::abs(f.at(j, g.Np - 1))});
    if (edge > 1e-12 * f.max_abs()) {
        err << "warning: |f| at the momentum boundary is " << num(edge) << ", above 1e-12 * max|f|\n";
    }
}

int steps_for(const Config& c) { return std::max(1, static_cast<int>(std::ceil(c.t_end / c.dt - 1e-9))); }

bool snapshot_due(const Config& c, int step, int steps) {
    return step == 0 || step == steps || (c.snapshot_every > 0 && step % c.snapshot_every == 0);
}

// ---------------------------------------------------------------------------
// Subcommands.

void run_verify_algebra(Run& r) {
    const AlgebraReport rep = verify_algebra(r.cfg.seed, r.cfg.instances, r.cfg.order_cap);
    auto f = r.open("algebra_report.csv");
    f << "check,run,failed\n";
    for (const auto& c : rep.checks) f << c.name << ',' << c.run << ',' << c.failed << '\n';
    r.note("result.algebra_instances", std::to_string(rep.instances));
    r.note("result.algebra_checks", std::to_string(rep.total()));
    if (!rep.ok()) r.violated = true;
    r.say(rep.to_text());
}

void run_verify_dual(Run& r) {
    const PhaseGrid g = phase_grid(r.cfg);
    const DualReport rep = verify_dual(r.cfg.seed, r.cfg.instances, g, r.cfg.scheme);
    r.note("normalization.adjointness", "|lhs - rhs| / max(|lhs|, |rhs|, 1e-3 * integrand L1 size)");
    r.note("normalization.matched_vs_full_coadjoint", "max pointwise difference / max(1, max |full|)");
    r.note("normalization.pairing_kernel", "|<X_1, Pi>| / (L2 div(Pi#) * L2 1)");
    auto f = r.open("dual_report.csv");
    f << "check,worst,tolerance,status\n";
    for (const auto& c : rep.checks) {
        f << c.name << ',' << num(c.worst) << ',' << num(c.tolerance) << ',' << (c.ok() ? "ok" : "fail") << '\n';
        r.check(c.name, c.worst, c.tolerance, c.ok());
    }
}

void run_vlasov(Run& r, std::ostream& err) {
    const Config& c = r.cfg;
    const PhaseGrid g = phase_grid(c);
    const VlasovParams params = vlasov_params(c, g.spatial);
    const auto profile = initial_profile(c);
    const PhaseFn f0 = PhaseFn::from(g, profile);
    warn_boundary(f0, err);

    const int steps = steps_for(c);
    const double dt = c.t_end / steps;
    r.note("run.steps", std::to_string(steps));
    r.note("run.dt_effective", dt);
    r.note("normalization.energy", c.field_mode == FieldMode::Prescribed
                                       ? "sum (p^2/(2m) + e phi) f dq dp"
                                       : "sum p^2/(2m) f dq dp + 0.5 sum phi'^2 dq");

    auto snaps = r.open("f_snapshots.csv");
    auto moms = r.open("moments.csv");
    auto cons = r.open("conservation.csv");
    snaps << "t,q,p,f\n";
    moms << "t,m,q,value\n";
    cons << "t,mass,l2,energy\n";

    KineticState s = make_state(f0, params);
    auto record = [&](int step) {
        const Diagnostics d = diagnostics(s, params);
        cons << num(s.t) << ',' << num(d.mass) << ',' << num(d.l2) << ',' << num(d.energy) << '\n';
        if (!snapshot_due(c, step, steps)) return;
        for (int j = 0; j < g.Nq(); ++j) {
            for (int i = 0; i < g.Np; ++i) {
                snaps << num(s.t) << ',' << num(g.q(j)) << ',' << num(g.p(i)) << ',' << num(s.f.at(j, i)) << '\n';
            }
        }
        for (int m = 0; m <= c.K; ++m) {
            const GridFn a = moment_quad(s.f, m);
            for (int j = 0; j < g.Nq(); ++j) moms << num(s.t) << ',' << m << ',' << num(g.q(j)) << ',' << num(a[j]) << '\n';
        }
    };

    const Diagnostics d0 = diagnostics(s, params);
    record(0);
    for (int k = 1; k <= steps; ++k) {
        s = step(s, params, dt);
        record(k);
    }
    const Diagnostics d1 = diagnostics(s, params);

    r.note("normalization.drifts", "|value(t_end) - value(0)| / |value(0)|; l2_change is signed");
    r.note("normalization.free_streaming_linf", "max |f - f0(q - p t / m, p)|, absolute");
    r.check_le("mass_drift", std::abs(d1.mass - d0.mass) / std::abs(d0.mass), 1e-6);
    r.check_le("energy_drift", std::abs(d1.energy - d0.energy) / std::max(std::abs(d0.energy), 1e-300), 1e-4);
    r.check("l2_change", (d1.l2 - d0.l2) / d0.l2, 1e-4,
            d1.l2 <= d0.l2 * (1.0 + 1e-12) && std::abs(d1.l2 - d0.l2) <= 1e-4 * d0.l2);

    const bool free_streaming =
        c.field_mode == FieldMode::Prescribed && (c.phi_amplitude == 0.0 || c.e == 0.0);
    if (free_streaming) {
        const double t = s.t;
        const PhaseFn exact =
            PhaseFn::from(g, [&](double q, double p) { return profile(q - p * t / c.m, p); });
        r.check_le("free_streaming_linf", (s.f - exact).max_abs(), 1e-3);
    }
}

void run_moments(Run& r) {
    const Config& c = r.cfg;
    const SpatialGrid sg(c.L, c.Nq);
    const int steps = steps_for(c);
    const double dt = c.t_end / steps;
    const double w = 2.0 * std::numbers::pi * c.mode / c.L;
    r.note("run.steps", std::to_string(steps));
    r.note("run.dt_effective", dt);
    r.note("run.moment_model", c.moment_model);

    auto moms = r.open("moments.csv");
    auto cons = r.open("conservation.csv");
    moms << "t,order,q,value\n";
    cons << "t,mass,energy\n";
    auto write_orders = [&](double t, const std::vector<GridFn>& orders, int step) {
        if (!snapshot_due(c, step, steps)) return;
        for (std::size_t m = 0; m < orders.size(); ++m) {
            for (int j = 0; j < sg.Nq; ++j) {
                moms << num(t) << ',' << m << ',' << num(sg.node(j)) << ',' << num(orders[m][j]) << '\n';
            }
        }
    };

    if (c.moment_model == "euler") {
        const FluidHamiltonian H = FluidHamiltonian::polytropic(c.fluid_kappa, c.fluid_gamma, c.bernoulli_half_factor);
        r.note("normalization.energy", "sum M^2/(2 rho) + rho w(rho) dq, w = kappa rho^(gamma-1)/(gamma-1)");
        SDual S{GridFn::from(sg, [&](double q) { return 1.0 + c.amplitude * std::cos(w * q); }),
                GridFn::from(sg, [&](double q) { return c.amplitude * std::sin(w * q); })};
        auto energy = [&](const SDual& s) {
            double e = 0.0;
            for (int j = 0; j < sg.Nq; ++j) e += s.M[j] * s.M[j] / (2.0 * s.rho[j]) + s.rho[j] * H.w(s.rho[j]);
            return e * sg.dq();
        };
        const double m0 = quad_q(S.rho);
        const double e0 = energy(S);
        auto rhs = [&](const SDual& s) { return euler_rhs(H, s, c.scheme); };
        for (int k = 0; k <= steps; ++k) {
            if (k > 0) S = rk4_step(rhs, S, dt);
            cons << num(k * dt) << ',' << num(quad_q(S.rho)) << ',' << num(energy(S)) << '\n';
            write_orders(k * dt, {S.rho, S.M}, k);
        }
        r.note("normalization.mass_drift", "|mass(t_end) - mass(0)| / |mass(0)|");
        r.check_le("mass_drift", std::abs(quad_q(S.rho) - m0) / std::abs(m0), 1e-10);
        r.note("result.energy_drift", std::abs(energy(S) - e0) / std::abs(e0));
        return;
    }

    // Moment hierarchy of the Vlasov equation, closed by truncation at K.
    const PhaseGrid g = phase_grid(c);
    const VlasovParams params = vlasov_params(c, sg);
    MomentState S = moments_of(PhaseFn::from(g, initial_profile(c)), c.K);
    TruncationReport report;
    auto variational = [&](const MomentState& s) {
        const GridFn phi = c.field_mode == FieldMode::Prescribed ? params.prescribed_phi : poisson_solve(s.rho(), params);
        Variational H{SField(c.e * phi, GridFn(sg)), {}};
        H.n.emplace(2, GridFn(sg, 1.0 / (2.0 * c.m)));
        return H;
    };
    auto rhs = [&](const MomentState& s) { return lp_rhs(variational(s), s, nullptr, c.scheme); };
    lp_rhs(variational(S), S, &report, c.scheme);
    const double m0 = quad_q(S.rho());
    r.note("normalization.energy", "sum A_2/(2m) dq (kinetic part only)");
    r.note("normalization.mass_drift", "|mass(t_end) - mass(0)| / |mass(0)|");
    for (int k = 0; k <= steps; ++k) {
        if (k > 0) S = rk4_step(rhs, S, dt);
        cons << num(k * dt) << ',' << num(quad_q(S.rho())) << ',' << num(quad_q(S[2]) / (2.0 * c.m)) << '\n';
        write_orders(k * dt, S.orders(), k);
    }
    auto trunc = r.open("truncation.txt");
    trunc << report.to_text();
    r.note("result.dropped_terms", std::to_string(report.dropped.size()));
    r.check_le("mass_drift", std::abs(quad_q(S.rho()) - m0) / std::abs(m0), 1e-10);
}

// Band-limited in q, Maxwellian of the configured width in p; Pi_q has zero
// q-mean so each moment component of div(Pi#) does too.
OneFormGrid band_limited_pi(const Config& c, const PhaseGrid& g) {
    Lcg64 rng(c.seed);
    TrigSeries tq = random_trig_series(rng, c.L, 3);
    const TrigSeries tp = random_trig_series(rng, c.L, 3);
    tq.a[0] = 0.0;
    const double c1 = rng.uniform(-0.5, 0.5);
    const double u = c.drift + rng.uniform(-0.3, 0.3);
    const double s = c.thermal_width;
    return {PhaseFn::from(g, [&](double q, double p) { return tq.value(q) * maxwellian(p, u, s); }),
            PhaseFn::from(g, [&](double q, double p) { return tp.value(q) * (1.0 + c1 * p) * maxwellian(p, u, s); })};
}

// Stable explicit substep count for RK4 on the momentum-Vlasov system.
int momvlasov_substeps(const Config& c, const GridFn& phi, const PhaseGrid& g, double dt) {
    const double dphi = ddq(phi, c.scheme).max_abs();
    const double rate = (c.Pmax / c.m) * std::numbers::pi / g.spatial.dq() + std::abs(c.e) * dphi * 1.5 / g.dp();
    return std::max(1, static_cast<int>(std::ceil(dt * rate / 2.0)));
}

void run_momvlasov(Run& r) {
    const Config& c = r.cfg;
    const PhaseGrid g = phase_grid(c);
    const VlasovParams params = vlasov_params(c, g.spatial);
    const PhaseFn f0 = PhaseFn::from(g, initial_profile(c));

    // Gauge: Pi_q carries the q-mean of f through -dPi_q/dp, Pi_p the rest.
    OneFormGrid Pi(g);
    std::vector<double> mean_f(g.Np, 0.0);
    for (int i = 0; i < g.Np; ++i) {
        for (int j = 0; j < g.Nq(); ++j) mean_f[i] += f0.at(j, i);
        mean_f[i] /= g.Nq();
    }
    // Cumulative trapezoid integral of the mean profile.
    std::vector<double> cum(g.Np, 0.0);
    for (int i = 1; i < g.Np; ++i) cum[i] = cum[i - 1] + 0.5 * g.dp() * (mean_f[i - 1] + mean_f[i]);
    GridFn col(g.spatial);
    for (int i = 0; i < g.Np; ++i) {
        for (int j = 0; j < g.Nq(); ++j) {
            Pi.Pi_q.at(j, i) = -cum[i];
            col[j] = f0.at(j, i) - mean_f[i];
        }
        const GridFn a = antiderivative_q(col, 1.0);
        for (int j = 0; j < g.Nq(); ++j) Pi.Pi_p.at(j, i) = a[j];
    }

    const int steps = steps_for(c);
    const double dt = c.t_end / steps;
    r.note("run.steps", std::to_string(steps));
    r.note("run.dt_effective", dt);
    r.note("normalization.energy", "diagnostics of f = div(Pi#), as in run-vlasov");

    auto snaps = r.open("pi_snapshots.csv");
    auto cons = r.open("conservation.csv");
    auto inter = r.open("intertwine.csv");
    snaps << "t,q,p,Pi_q,Pi_p\n";
    cons << "t,mass,l2,energy\n";
    inter << "t,error\n";

    double t = 0.0;
    double worst = 0.0;
    int max_sub = 1;
    auto record = [&](int step) {
        const KineticState ks{div_sharp(Pi, c.scheme), field_for(Pi, params), t};
        const Diagnostics d = diagnostics(ks, params);
        cons << num(t) << ',' << num(d.mass) << ',' << num(d.l2) << ',' << num(d.energy) << '\n';
        const double e = intertwine_check(Pi, params);
        worst = std::max(worst, e);
        inter << num(t) << ',' << num(e) << '\n';
        if (!snapshot_due(c, step, steps)) return;
        for (int j = 0; j < g.Nq(); ++j) {
            for (int i = 0; i < g.Np; ++i) {
                snaps << num(t) << ',' << num(g.q(j)) << ',' << num(g.p(i)) << ',' << num(Pi.Pi_q.at(j, i)) << ','
                      << num(Pi.Pi_p.at(j, i)) << '\n';
            }
        }
    };
    record(0);
    const double mass0 = quad_qp(div_sharp(Pi, c.scheme));
    for (int k = 1; k <= steps; ++k) {
        const int sub = momvlasov_substeps(c, field_for(Pi, params), g, dt);
        max_sub = std::max(max_sub, sub);
        const double h = dt / sub;
        auto rhs = [&](const OneFormGrid& p) { return momvlasov_rhs(p, params); };
        for (int s = 0; s < sub; ++s) Pi = rk4_step(rhs, Pi, h);
        t = k * dt;
        record(k);
    }
    r.note("run.max_substeps", std::to_string(max_sub));
    const double mass1 = quad_qp(div_sharp(Pi, c.scheme));
    r.check_le("mass_drift", std::abs(mass1 - mass0) / std::abs(mass0), 1e-6);
    r.note("normalization.intertwine", "L2 over the box / L2 of the Vlasov rate of div(Pi#)");
    r.note("result.intertwine_worst", worst);
}

bool refinement_ok(double coarse, double fine, double min_slope, double floor) {
    if (coarse <= floor) return fine <= floor;
    return std::log2(coarse / std::max(fine, 1e-300)) >= min_slope || fine <= floor;
}

void run_check_poisson_map(Run& r) {
    Config c = r.cfg;
    c.field_mode = FieldMode::Prescribed;
    r.note("run.field_mode", "prescribed (required by the check)");
    constexpr double kTol = 1e-4;
    // p^K-weighted sums at Pmax = 8 carry roundoff near 1e-10.
    constexpr double kFloor = 1e-9;
    constexpr double kSlope = 3.7;

    auto errors_at = [&](int scale) {
        const PhaseGrid g(SpatialGrid(c.L, c.Nq * scale), c.Pmax, c.Np * scale);
        const VlasovParams params = vlasov_params(c, g.spatial);
        return poisson_map_check(PhaseFn::from(g, initial_profile(c)), params, c.K);
    };
    const std::vector<double> base = errors_at(1);
    const std::vector<double> fine = errors_at(2);

    auto f = r.open("poisson_map.csv");
    f << "order,rel_error\n";
    for (std::size_t m = 0; m < base.size(); ++m) f << m << ',' << num(base[m]) << '\n';
    auto fr = r.open("poisson_map_refinement.csv");
    fr << "resolution,order,rel_error\n";
    const std::string r1 = std::to_string(c.Nq) + "x" + std::to_string(c.Np);
    const std::string r2 = std::to_string(2 * c.Nq) + "x" + std::to_string(2 * c.Np);
    for (std::size_t m = 0; m < base.size(); ++m) fr << r1 << ',' << m << ',' << num(base[m]) << '\n';
    for (std::size_t m = 0; m < fine.size(); ++m) fr << r2 << ',' << m << ',' << num(fine[m]) << '\n';

    r.note("normalization.poisson_map", "L2 over q of the order-m mismatch / L2 of the order-m kinetic rate, denominator floored at 1e-8 * max over orders");
    r.note("normalization.matched_vlasov_split", "L2 over the box / L2 of the unsplit rate");
    r.note("tolerance.refinement_floor", kFloor);
    r.note("tolerance.refinement_slope", kSlope);
    for (std::size_t m = 0; m < base.size(); ++m) {
        r.check_le("poisson_map_order_" + std::to_string(m), base[m], kTol);
        if (!refinement_ok(base[m], fine[m], kSlope, kFloor)) {
            r.violated = true;
            r.say("FAIL  refinement of order " + std::to_string(m));
        }
    }

    // Matched split of the Vlasov right-hand side against the unsplit one.
    const PhaseGrid g = phase_grid(c);
    const VlasovParams params = vlasov_params(c, g.spatial);
    const FDecomposition dec = decompose_f(PhaseFn::from(g, initial_profile(c)), c.K);
    const MatchedRates mr = matched_vlasov_rhs(dec.components, plasma_slots(params.prescribed_phi, g, params), c.scheme);
    const KineticState ks{dec.f_s + dec.f_n, params.prescribed_phi, 0.0};
    const PhaseFn full = vlasov_rhs(ks, params);
    const double den = std::max(l2(full), 1e-300);
    r.check_le("matched_vlasov_split", l2(mr.s + mr.n - full) / den, 1e-6);
}

void run_check_intertwine(Run& r) {
    const Config& c = r.cfg;
    constexpr double kTol = 1e-5;
    constexpr double kFloor = 1e-11;
    constexpr double kSlope = 3.0;
    auto f = r.open("intertwine.csv");
    f << "resolution,error\n";
    std::vector<double> errs;
    for (int scale : {1, 2}) {
        const PhaseGrid g(SpatialGrid(c.L, c.Nq * scale), c.Pmax, c.Np * scale);
        const VlasovParams params = vlasov_params(c, g.spatial);
        const double e = intertwine_check(band_limited_pi(c, g), params);
        errs.push_back(e);
        f << g.Nq() << 'x' << g.Np << ',' << num(e) << '\n';
    }
    r.note("normalization.intertwine", "L2 over the box / L2 of the Vlasov rate of div(Pi#)");
    r.note("normalization.matched_momvlasov_split", "L2 of the divergence mismatch / L2 of the unsplit divergence");
    r.check_le("intertwine", errs[0], kTol);
    const double slope = std::log2(errs[0] / std::max(errs[1], 1e-300));
    r.note("result.intertwine_slope", slope);
    r.note("tolerance.intertwine_slope", kSlope);
    if (!refinement_ok(errs[0], errs[1], kSlope, kFloor)) {
        r.violated = true;
        r.say("FAIL  intertwine refinement slope " + num(slope));
    }

    // Matched momentum split, compared through the divergence.
    const PhaseGrid g = phase_grid(c);
    const VlasovParams params = vlasov_params(c, g.spatial);
    const OneFormGrid Pi = band_limited_pi(c, g);
    const PiSplit sp = split_pi(Pi, c.K, c.scheme);
    const GridFn phi = field_for(Pi, params);
    const MatchedPiRates mr = matched_momvlasov_rhs(sp.components, plasma_field_slots(phi, g, params), c.scheme);
    const PhaseFn full = div_sharp(momvlasov_rhs(sp.Pi_s + sp.Pi_n, phi, params), c.scheme);
    const PhaseFn split = div_sharp(mr.s + mr.n, c.scheme);
    r.check_le("matched_momvlasov_split", l2(split - full) / std::max(l2(full), 1e-300), 1e-6);
}

void run_dump(Run& r) {
    Lcg64 rng(r.cfg.seed);
    const SPair xi = random_spair(rng, 1, 2);
    const NPart eta = random_npart(rng, 1, 3, 2);
    const SPair xi2 = random_spair(rng, 1, 2);
    const NPart eta2 = random_npart(rng, 1, 3, 2);
    const DoubleCross b = double_cross_bracket({xi, eta}, {xi2, eta2}, r.cfg.order_cap);
    std::ostringstream os;
    os << "sigma: " << xi.sigma.to_string() << '\n';
    os << "Y: " << xi.Y.to_string() << '\n';
    os << "X: " << eta.tensor().to_string() << '\n';
    os << "sigma': " << xi2.sigma.to_string() << '\n';
    os << "Y': " << xi2.Y.to_string() << '\n';
    os << "X': " << eta2.tensor().to_string() << '\n';
    os << "bracket s: " << embed(b.s).to_string() << '\n';
    os << "bracket n: " << b.n.tensor().to_string() << '\n';
    os << "kappa(X): " << kappa(eta.tensor()).to_string() << '\n';
    os << "kappa(sigma, Y): " << kappa(embed(xi)).to_string() << '\n';
    const HamField lift = gccl(eta.part(2));
    os << "gccl(X^2) dq: " << lift.qcomp[0].to_string() << '\n';
    os << "gccl(X^2) dp: " << lift.pcomp[0].to_string() << '\n';
    auto f = r.open("dump.txt");
    f << os.str();
    r.say(os.str());
}

void write_manifest(const Run& r, const std::string& subcommand, int code, double seconds) {
    std::ofstream f(r.dir / "manifest.txt", std::ios::binary);
    f << "# run manifest\n";
    f << "subcommand = " << subcommand << '\n';
    f << "exit_code = " << code << '\n';
    f << "mpv_version = " << MPV_VERSION << '\n';
    f << "gmp_version = " << gmp_version << '\n';
    f << "fftw_version = " << fftw_version << '\n';
    f << "lcg = x <- a x + c mod 2^64\n";
    f << "lcg_multiplier = " << Lcg64::kMultiplier << '\n';
    f << "lcg_increment = " << Lcg64::kIncrement << '\n';
    std::istringstream cfg(r.cfg.to_text());
    for (std::string line; std::getline(cfg, line);) f << "config." << line << '\n';
    for (const auto& [k, v] : r.manifest) f << k << " = " << v << '\n';
    std::string outputs;
    for (const auto& w : r.written) outputs += (outputs.empty() ? "" : ", ") + w;
    f << "outputs = " << outputs << '\n';
    f << "timing.seconds = " << num(seconds) << '\n';
}

}  // namespace

// ---------------------------------------------------------------------------

bool AlgebraReport::ok() const {
    return std::all_of(checks.begin(), checks.end(), [](const ExactTally& t) { return t.failed == 0; });
}

int AlgebraReport::total() const {
    int n = 0;
    for (const auto& t : checks) n += t.run;
    return n;
}

std::string AlgebraReport::to_text() const {
    std::ostringstream os;
    if (ok()) {
        os << "all exact identities hold (" << instances << " instances, " << total() << " checks)\n";
    } else {
        os << "exact identity failures (" << instances << " instances)\n";
    }
    for (const auto& t : checks) os << "  " << t.name << ": " << t.run << " run, " << t.failed << " failed\n";
    return os.str();
}

AlgebraReport verify_algebra(std::uint64_t seed, int instances, int order_cap) {
    static const char* names[] = {"antisymmetry",      "grading",          "jacobi",       "compat_residuals",
                                  "reconstruction",    "double_cross",     "kappa_bracket", "kappa_inverse",
                                  "phase_actions",     "kappa_naturality", "gccl",          "hamiltonian_bracket"};
    AlgebraReport rep;
    rep.instances = instances;
    for (const char* n : names) rep.checks.push_back({n, 0, 0});
    auto tally = [&](int idx, bool ok) {
        ++rep.checks[idx].run;
        if (!ok) ++rep.checks[idx].failed;
    };

    Lcg64 rng(seed);
    constexpr int deg = 3;
    for (int i = 0; i < instances; ++i) {
        const int dim = 1 + i % 2;
        const int k = rng.uniform_int(0, 4);
        const int m = rng.uniform_int(0, 4);
        const SymTensor X = random_tensor(rng, dim, k, deg);
        const SymTensor Y = random_tensor(rng, dim, m, deg);
        const SymTensor XY = schouten_bracket(X, Y);
        tally(0, (XY + schouten_bracket(Y, X)).is_zero());
        tally(1, XY.order() == std::max(k + m - 1, 0) && !(k == 0 && m == 0 && !XY.is_zero()));

        const GradedTensor A = GradedTensor::from(random_tensor(rng, dim, rng.uniform_int(0, 4), deg));
        const GradedTensor B = GradedTensor::from(random_tensor(rng, dim, rng.uniform_int(0, 4), deg));
        const GradedTensor C = GradedTensor::from(random_tensor(rng, dim, rng.uniform_int(0, 4), deg));
        const GradedTensor J = schouten_graded(A, schouten_graded(B, C, order_cap), order_cap) +
                               schouten_graded(B, schouten_graded(C, A, order_cap), order_cap) +
                               schouten_graded(C, schouten_graded(A, B, order_cap), order_cap);
        tally(2, J.is_zero());

        const SPair xi = random_spair(rng, dim, deg);
        const SPair xi2 = random_spair(rng, dim, deg);
        const NPart eta = random_npart(rng, dim, 4, deg);
        const NPart eta2 = random_npart(rng, dim, 4, deg);
        const DoubleCross res = compat_residuals(xi, xi2, eta, eta2, order_cap);
        tally(3, res.s.is_zero() && res.n.is_zero());

        const auto mixed = split(schouten_graded(embed(eta), embed(xi), order_cap));
        tally(4, mixed.first == act_left(eta, xi) && mixed.second == act_right(eta, xi, order_cap));

        const auto total = split(schouten_graded(embed(xi, eta), embed(xi2, eta2), order_cap));
        const DoubleCross dc = double_cross_bracket({xi, eta}, {xi2, eta2}, order_cap);
        tally(5, total.first == dc.s && total.second == dc.n);

        tally(6, kappa(XY) == -canonical_bracket(kappa(X), kappa(Y)));
        const GradedTensor G = embed(xi, eta);
        tally(7, kappa_inv(kappa(G)) == G);

        const PhasePoly xh = kappa(eta.tensor());
        const PhasePoly sh = kappa(embed(xi));
        tally(8, act_left_phase(xh, sh) + act_right_phase(xh, sh) == -canonical_bracket(xh, sh));
        tally(9, act_right_phase(xh, sh) == kappa(act_right(eta, xi, order_cap).tensor()) &&
                     act_left_phase(xh, sh) == kappa(embed(act_left(eta, xi))));

        tally(10, gccl(X) == hamiltonian_field(kappa(X)) &&
                      jacobi_lie_bracket(gccl(X), gccl(Y)) == -gccl(XY));
        const PhasePoly h = kappa(X);
        const PhasePoly g = kappa(Y);
        tally(11, -jacobi_lie_bracket(hamiltonian_field(h), hamiltonian_field(g)) ==
                      hamiltonian_field(-canonical_bracket(h, g)));
    }
    return rep;
}

bool DualReport::ok() const {
    return std::all_of(checks.begin(), checks.end(), [](const NumericCheck& c) { return c.ok(); });
}

std::string DualReport::to_text() const {
    std::ostringstream os;
    for (const auto& c : checks) {
        os << (c.ok() ? "ok    " : "FAIL  ") << c.name << " worst " << num(c.worst) << " tolerance " << num(c.tolerance)
           << '\n';
    }
    return os.str();
}

DualErrors dual_errors(std::uint64_t seed, const PhaseGrid& g, DiffScheme scheme) {
    constexpr int K = 4;
    constexpr int modes = 3;
    const SpatialGrid& sg = g.spatial;
    Lcg64 rng(seed);
    DualErrors out;

    // <coad_full(X, S), Y> against <S, [Y, X]> with the bracket in closed form.
    std::vector<TrigSeries> A, X, Y;
    for (int j = 0; j <= K; ++j) A.push_back(random_trig_series(rng, sg.L, modes));
    for (int k = 0; k <= 3; ++k) X.push_back(random_trig_series(rng, sg.L, modes));
    for (int k = 0; k <= K; ++k) Y.push_back(random_trig_series(rng, sg.L, modes));
    auto sampled = [&](const TrigSeries& t) { return GridFn::from(sg, [&](double q) { return t.value(q); }); };
    std::vector<GridFn> Ag;
    for (const auto& t : A) Ag.push_back(sampled(t));
    const MomentState S(Ag);
    ContraField Xf;
    for (const auto& t : X) Xf.X.push_back(sampled(t));
    const MomentState co = coad_full(Xf, S, nullptr, scheme);
    double lhs = 0.0;
    for (int m = 0; m <= K; ++m) lhs += quad_q(co[m] * sampled(Y[m]));
    double rhs = 0.0;
    double scale = 0.0;
    for (int j = 0; j <= K; ++j) {
        const GridFn br = GridFn::from(sg, [&](double q) {
            double s = 0.0;
            for (int m = 0; m <= K; ++m) {
                for (int k = 0; k <= 3; ++k) {
                    if (m + k - 1 != j) continue;
                    s += m * Y[m].value(q) * X[k].derivative(q) - k * X[k].value(q) * Y[m].derivative(q);
                }
            }
            return s;
        });
        rhs += quad_q(Ag[j] * br);
        GridFn absval = Ag[j] * br;
        for (int i = 0; i < absval.size(); ++i) absval[i] = std::abs(absval[i]);
        scale += quad_q(absval);
    }
    out.coad_adjoint = rel(lhs, rhs, 1e-3 * scale);

    // Matched assembly against the full coadjoint action.
    const SField s(Xf.X[0], Xf.X[1]);
    NField n;
    n.emplace(2, Xf.X[2]);
    n.emplace(3, Xf.X[3]);
    const MomentState matched = matched_coadjoint(s, n, S, nullptr, scheme);
    const MomentState full = coad_full(embed(s, n), S, nullptr, scheme);
    out.decomposition = (matched - full).max_abs() / std::max(1.0, full.max_abs());

    // J_LP adjointness with p-quadratic Hamiltonians.
    const PolyTrig h = random_polytrig(rng, sg.L, 2, modes);
    const PolyTrig gg = random_polytrig(rng, sg.L, 2, modes);
    const OneFormGrid Pi(random_phase(rng, g, modes), random_phase(rng, g, modes));
    const double jl = pair(j_lp_apply(Pi, exact_flow(h, g), scheme), exact_flow(gg, g));
    const double jr = pair(Pi, exact_bracket_flow(gg, h, g));
    const PhaseVector fg = exact_bracket_flow(gg, h, g);
    const double jscale = l2(Pi.Pi_q) * l2(fg.vq) + l2(Pi.Pi_p) * l2(fg.vp);
    out.jlp_adjoint = rel(jl, jr, 1e-3 * jscale);

    // Constants pair to zero with every one-form.
    const PhaseFn one(g, 1.0);
    const double direct = pairing_ham(Pi, one, scheme, 1e-6);
    const double via_div = pairing_ham_div(Pi, one, scheme);
    out.pairing_kernel = std::max(std::abs(direct), std::abs(via_div)) /
                         std::max(l2(div_sharp(Pi, scheme)) * l2(one), 1e-300);
    return out;
}

DualReport verify_dual(std::uint64_t seed, int instances, const PhaseGrid& g, DiffScheme scheme) {
    const double adj_tol = scheme == DiffScheme::Fourier ? 1e-8 : 1e-2;
    DualReport rep;
    rep.checks = {{"coad_adjointness", 0.0, adj_tol},
                  {"jlp_adjointness", 0.0, adj_tol},
                  {"matched_vs_full_coadjoint", 0.0, 1e-12},
                  {"pairing_kernel", 0.0, 1e-12}};
    Lcg64 rng(seed);
    for (int i = 0; i < instances; ++i) {
        const DualErrors e = dual_errors(rng.next(), g, scheme);
        rep.checks[0].worst = std::max(rep.checks[0].worst, e.coad_adjoint);
        rep.checks[1].worst = std::max(rep.checks[1].worst, e.jlp_adjoint);
        rep.checks[2].worst = std::max(rep.checks[2].worst, e.decomposition);
        rep.checks[3].worst = std::max(rep.checks[3].worst, e.pairing_kernel);
    }
    return rep;
}

const std::vector<std::string>& subcommands() {
    static const std::vector<std::string> names = {"verify-algebra",    "verify-dual",      "run-moments",
                                                   "run-vlasov",        "run-momvlasov",    "check-poisson-map",
                                                   "check-intertwine",  "dump"};
    return names;
}

int run(const RunRequest& request, std::ostream& out, std::ostream& err) {
    const auto& names = subcommands();
    if (std::find(names.begin(), names.end(), request.subcommand) == names.end()) {
        err << "error: unknown subcommand '" << request.subcommand << "'\n";
        return kExitConfig;
    }
    Config cfg;
    try {
        if (request.config_path) cfg = load_config(*request.config_path);
        if (request.seed) cfg.seed = *request.seed;
        cfg.validate();
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return kExitConfig;
    }
    std::error_code ec;
    fs::create_directories(request.out_dir, ec);
    if (ec) {
        err << "error: cannot create output directory '" << request.out_dir << "': " << ec.message() << '\n';
        return kExitConfig;
    }

    Run r{cfg, fs::path(request.out_dir), out, request.quiet, {}, {}, false};
    const auto t0 = std::chrono::steady_clock::now();
    int code = kExitOk;
    try {
        const std::string& sc = request.subcommand;
        if (sc == "verify-algebra") {
            run_verify_algebra(r);
        } else if (sc == "verify-dual") {
            run_verify_dual(r);
        } else if (sc == "run-moments") {
            run_moments(r);
        } else if (sc == "run-vlasov") {
            run_vlasov(r, err);
        } else if (sc == "run-momvlasov") {
            run_momvlasov(r);
        } else if (sc == "check-poisson-map") {
            run_check_poisson_map(r);
        } else if (sc == "check-intertwine") {
            run_check_intertwine(r);
        } else {
            run_dump(r);
        }
        if (r.violated) code = kExitViolation;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        r.note("error", e.what());
        code = kExitViolation;
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    write_manifest(r, request.subcommand, code, seconds);
    return code;
}

}  // namespace mpv
