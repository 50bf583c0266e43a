#include "mpv/gridcore.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <stdexcept>

#include "spectral.hpp"

namespace mpv {

namespace {

void require_same_grid(bool same, const char* where) {
    if (!same) throw std::invalid_argument(std::string(where) + ": grid mismatch");
}

// Periodic fourth-order centred first derivative.
void fd4_periodic(std::span<const double> f, std::span<double> out, double h) {
    const int n = static_cast<int>(f.size());
    const double c = 1.0 / (12.0 * h);
    for (int j = 0; j < n; ++j) {
        const double fm2 = f[(j - 2 + n) % n];
        const double fm1 = f[(j - 1 + n) % n];
        const double fp1 = f[(j + 1) % n];
        const double fp2 = f[(j + 2) % n];
        out[j] = c * (fm2 - 8.0 * fm1 + 8.0 * fp1 - fp2);
    }
}

// Fourth-order first derivative on a bounded line, one-sided near the ends.
void fd4_bounded(std::span<const double> f, std::span<double> out, double h) {
    const int n = static_cast<int>(f.size());
    const double c = 1.0 / (12.0 * h);
    out[0] = c * (-25.0 * f[0] + 48.0 * f[1] - 36.0 * f[2] + 16.0 * f[3] - 3.0 * f[4]);
    out[1] = c * (-3.0 * f[0] - 10.0 * f[1] + 18.0 * f[2] - 6.0 * f[3] + f[4]);
    for (int i = 2; i < n - 2; ++i) out[i] = c * (f[i - 2] - 8.0 * f[i - 1] + 8.0 * f[i + 1] - f[i + 2]);
    out[n - 2] = c * (3.0 * f[n - 1] + 10.0 * f[n - 2] - 18.0 * f[n - 3] + 6.0 * f[n - 4] - f[n - 5]);
    out[n - 1] = c * (25.0 * f[n - 1] - 48.0 * f[n - 2] + 36.0 * f[n - 3] - 16.0 * f[n - 4] + 3.0 * f[n - 5]);
}

// First-derivative weights at x0 on the integer nodes x (Fornberg's recursion).
std::vector<double> fd_weights(double x0, const std::vector<double>& x) {
    const int n = static_cast<int>(x.size());
    std::vector<std::vector<double>> c(n, std::vector<double>(2, 0.0));
    double c1 = 1.0;
    double c4 = x[0] - x0;
    c[0][0] = 1.0;
    for (int i = 1; i < n; ++i) {
        const int mn = std::min(i, 1);
        double c2 = 1.0;
        const double c5 = c4;
        c4 = x[i] - x0;
        for (int j = 0; j < i; ++j) {
            const double c3 = x[i] - x[j];
            c2 *= c3;
            if (j == i - 1) {
                for (int k = mn; k >= 1; --k) c[i][k] = c1 * (k * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for (int k = mn; k >= 1; --k) c[j][k] = (c4 * c[j][k] - k * c[j][k - 1]) / c3;
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    std::vector<double> w(n);
    for (int i = 0; i < n; ++i) w[i] = c[i][1];
    return w;
}

// Applies the transpose of an eighth-order first derivative on a bounded line:
// nine-point centred rows, nine-point one-sided rows within four nodes of an end.
void fd8_bounded_transpose(std::span<const double> g, std::span<double> out, double h) {
    constexpr int width = 9;
    const int n = static_cast<int>(g.size());
    std::vector<double> nodes(width);
    for (int k = 0; k < width; ++k) nodes[k] = k;
    std::fill(out.begin(), out.end(), 0.0);
    const std::vector<double> centre = fd_weights(4.0, nodes);
    for (int i = 0; i < n; ++i) {
        int col0 = i - 4;
        std::vector<double> w;
        if (i < 4) {
            col0 = 0;
            w = fd_weights(static_cast<double>(i), nodes);
        } else if (i > n - 5) {
            col0 = n - width;
            w = fd_weights(static_cast<double>(i - col0), nodes);
        }
        const std::vector<double>& row = w.empty() ? centre : w;
        for (int k = 0; k < width; ++k) out[col0 + k] += row[k] / h * g[i];
    }
}

void derivative_1d(std::span<const double> f, std::span<double> out, double L, DiffScheme scheme) {
    if (scheme == DiffScheme::Fourier) {
        detail::fourier_derivative(f, out, L);
    } else {
        fd4_periodic(f, out, L / static_cast<double>(f.size()));
    }
}

}  // namespace

const char* to_string(DiffScheme s) { return s == DiffScheme::FD4 ? "FD4" : "Fourier"; }

SpatialGrid::SpatialGrid(double L_, int Nq_) : L(L_), Nq(Nq_) {
    if (!(L > 0.0) || !std::isfinite(L)) throw std::invalid_argument("SpatialGrid: L must be positive");
    if (Nq < 8) throw std::invalid_argument("SpatialGrid: Nq must be at least 8");
}

PhaseGrid::PhaseGrid(SpatialGrid s, double Pmax_, int Np_) : spatial(s), Pmax(Pmax_), Np(Np_) {
    if (!(Pmax > 0.0) || !std::isfinite(Pmax)) throw std::invalid_argument("PhaseGrid: Pmax must be positive");
    if (Np < 16) throw std::invalid_argument("PhaseGrid: Np must be at least 16");
}

GridFn::GridFn(const SpatialGrid& g, double fill) : grid_(g), v_(g.Nq, fill) {}

GridFn::GridFn(const SpatialGrid& g, std::vector<double> values) : grid_(g), v_(std::move(values)) {
    if (static_cast<int>(v_.size()) != g.Nq) throw std::invalid_argument("GridFn: value count does not match grid");
}

GridFn GridFn::from(const SpatialGrid& g, const std::function<double(double)>& f) {
    GridFn out(g);
    for (int j = 0; j < g.Nq; ++j) out[j] = f(g.node(j));
    return out;
}

double GridFn::max_abs() const {
    double m = 0.0;
    for (double x : v_) m = std::max(m, std::abs(x));
    return m;
}

bool GridFn::all_finite() const {
    return std::all_of(v_.begin(), v_.end(), [](double x) { return std::isfinite(x); });
}

GridFn& GridFn::operator+=(const GridFn& o) {
    require_same_grid(grid_ == o.grid_, "GridFn +");
    for (std::size_t j = 0; j < v_.size(); ++j) v_[j] += o.v_[j];
    return *this;
}

GridFn& GridFn::operator-=(const GridFn& o) {
    require_same_grid(grid_ == o.grid_, "GridFn -");
    for (std::size_t j = 0; j < v_.size(); ++j) v_[j] -= o.v_[j];
    return *this;
}

GridFn& GridFn::operator*=(const GridFn& o) {
    require_same_grid(grid_ == o.grid_, "GridFn *");
    for (std::size_t j = 0; j < v_.size(); ++j) v_[j] *= o.v_[j];
    return *this;
}

GridFn& GridFn::operator*=(double s) {
    for (double& x : v_) x *= s;
    return *this;
}

PhaseFn::PhaseFn(const PhaseGrid& g, double fill) : grid_(g), v_(g.size(), fill) {}

PhaseFn PhaseFn::from(const PhaseGrid& g, const std::function<double(double, double)>& f) {
    PhaseFn out(g);
    for (int j = 0; j < g.Nq(); ++j) {
        for (int i = 0; i < g.Np; ++i) out.at(j, i) = f(g.q(j), g.p(i));
    }
    return out;
}

PhaseFn PhaseFn::from_p(const PhaseGrid& g, const std::function<double(double)>& f) {
    PhaseFn out(g);
    for (int i = 0; i < g.Np; ++i) {
        const double v = f(g.p(i));
        for (int j = 0; j < g.Nq(); ++j) out.at(j, i) = v;
    }
    return out;
}

PhaseFn PhaseFn::from_q(const PhaseGrid& g, const GridFn& a) {
    require_same_grid(a.grid() == g.spatial, "PhaseFn::from_q");
    PhaseFn out(g);
    for (int j = 0; j < g.Nq(); ++j) {
        for (int i = 0; i < g.Np; ++i) out.at(j, i) = a[j];
    }
    return out;
}

double PhaseFn::max_abs() const {
    double m = 0.0;
    for (double x : v_) m = std::max(m, std::abs(x));
    return m;
}

bool PhaseFn::all_finite() const {
    return std::all_of(v_.begin(), v_.end(), [](double x) { return std::isfinite(x); });
}

PhaseFn& PhaseFn::operator+=(const PhaseFn& o) {
    require_same_grid(grid_ == o.grid_, "PhaseFn +");
    for (std::size_t j = 0; j < v_.size(); ++j) v_[j] += o.v_[j];
    return *this;
}

PhaseFn& PhaseFn::operator-=(const PhaseFn& o) {
    require_same_grid(grid_ == o.grid_, "PhaseFn -");
    for (std::size_t j = 0; j < v_.size(); ++j) v_[j] -= o.v_[j];
    return *this;
}

PhaseFn& PhaseFn::operator*=(const PhaseFn& o) {
    require_same_grid(grid_ == o.grid_, "PhaseFn *");
    for (std::size_t j = 0; j < v_.size(); ++j) v_[j] *= o.v_[j];
    return *this;
}

PhaseFn& PhaseFn::operator*=(double s) {
    for (double& x : v_) x *= s;
    return *this;
}

GridFn ddq(const GridFn& f, DiffScheme scheme) {
    GridFn out(f.grid());
    derivative_1d(f.values(), out.values(), f.grid().L, scheme);
    return out;
}

PhaseFn ddq(const PhaseFn& f, DiffScheme scheme) {
    const PhaseGrid& g = f.grid();
    PhaseFn out(g);
    std::vector<double> col(g.Nq()), dcol(g.Nq());
    for (int i = 0; i < g.Np; ++i) {
        for (int j = 0; j < g.Nq(); ++j) col[j] = f.at(j, i);
        derivative_1d(col, dcol, g.spatial.L, scheme);
        for (int j = 0; j < g.Nq(); ++j) out.at(j, i) = dcol[j];
    }
    return out;
}

PhaseFn ddp(const PhaseFn& f, DiffScheme scheme) {
    if (scheme == DiffScheme::Fourier) {
        throw std::invalid_argument("ddp: the Fourier scheme is not available in p");
    }
    const PhaseGrid& g = f.grid();
    PhaseFn out(g);
    for (int j = 0; j < g.Nq(); ++j) fd4_bounded(f.row(j), out.row(j), g.dp());
    return out;
}

PhaseFn ddp_conservative(const PhaseFn& f) {
    const PhaseGrid& g = f.grid();
    const std::vector<double> w = trapezoid_weights(g);
    PhaseFn out(g);
    std::vector<double> wf(g.Np);
    for (int j = 0; j < g.Nq(); ++j) {
        auto row = f.row(j);
        for (int i = 0; i < g.Np; ++i) wf[i] = w[i] * row[i];
        auto o = out.row(j);
        fd8_bounded_transpose(wf, o, g.dp());
        for (int i = 0; i < g.Np; ++i) o[i] = -o[i] / w[i];
    }
    return out;
}

GridFn antiderivative_q(const GridFn& f, double tol) {
    const int n = f.size();
    double mean = 0.0;
    for (int j = 0; j < n; ++j) mean += f[j];
    mean /= n;
    if (std::abs(mean) > tol * std::max(1.0, f.max_abs())) {
        throw std::domain_error("antiderivative_q: function has nonzero mean");
    }
    GridFn out(f.grid());
    detail::fourier_apply(f.values(), out.values(), f.grid().L, [n](int k, double w) -> std::complex<double> {
        if (k == 0 || 2 * k == n) return 0.0;
        return {0.0, -1.0 / w};
    });
    return out;
}

double quad_q(const GridFn& f) {
    double s = 0.0;
    for (int j = 0; j < f.size(); ++j) s += f[j];
    return s * f.grid().dq();
}

std::vector<double> trapezoid_weights(const PhaseGrid& g) {
    std::vector<double> w(g.Np, g.dp());
    w.front() *= 0.5;
    w.back() *= 0.5;
    return w;
}

double quad_p(const PhaseFn& f, int j) {
    const PhaseGrid& g = f.grid();
    if (j < 0 || j >= g.Nq()) throw std::out_of_range("quad_p: q index out of range");
    const auto row = f.row(j);
    double s = 0.5 * (row.front() + row.back());
    for (int i = 1; i < g.Np - 1; ++i) s += row[i];
    return s * g.dp();
}

double quad_qp(const PhaseFn& f) {
    const PhaseGrid& g = f.grid();
    double s = 0.0;
    for (int j = 0; j < g.Nq(); ++j) s += quad_p(f, j);
    return s * g.spatial.dq();
}

GridFn moment_quad(const PhaseFn& f, int m) {
    if (m < 0) throw std::invalid_argument("moment_quad: negative order");
    const PhaseGrid& g = f.grid();
    const std::vector<double> w = trapezoid_weights(g);
    std::vector<double> pm(g.Np);
    for (int i = 0; i < g.Np; ++i) pm[i] = w[i] * std::pow(g.p(i), m);
    GridFn out(g.spatial);
    for (int j = 0; j < g.Nq(); ++j) {
        const auto row = f.row(j);
        double s = 0.0;
        for (int i = 0; i < g.Np; ++i) s += pm[i] * row[i];
        out[j] = s;
    }
    return out;
}

double pairing(const std::vector<GridFn>& A, const std::vector<GridFn>& X) {
    if (A.size() != X.size()) throw std::invalid_argument("pairing: order mismatch");
    double s = 0.0;
    for (std::size_t k = 0; k < A.size(); ++k) s += quad_q(A[k] * X[k]);
    return s;
}

double pairing(const std::vector<GridFn>& A, const GradedTensor& X) {
    if (A.empty()) throw std::invalid_argument("pairing: no moment fields");
    if (X.max_order() >= static_cast<int>(A.size())) throw std::invalid_argument("pairing: order mismatch");
    std::vector<GridFn> xs;
    for (std::size_t k = 0; k < A.size(); ++k) xs.push_back(sample(X.part(static_cast<int>(k)), A[k].grid()));
    return pairing(A, xs);
}

GridFn sample(const Poly& a, const SpatialGrid& g) {
    if (a.dim() != 1) throw std::invalid_argument("sample: only dimension 1 is supported on grids");
    GridFn out(g);
    for (int j = 0; j < g.Nq; ++j) {
        const double q = g.node(j);
        out[j] = evaluate(a, std::span<const double>(&q, 1));
    }
    return out;
}

GridFn sample(const SymTensor& X, const SpatialGrid& g) {
    if (X.dim() != 1) throw std::invalid_argument("sample: only dimension 1 is supported on grids");
    return sample(X.component(IndexSet(X.order(), 1)), g);
}

PhaseFn sample(const PhasePoly& h, const PhaseGrid& g) {
    if (h.dim() != 1) throw std::invalid_argument("sample: only dimension 1 is supported on grids");
    PhaseFn out(g);
    for (int j = 0; j < g.Nq(); ++j) {
        for (int i = 0; i < g.Np; ++i) {
            const double q = g.q(j);
            const double p = g.p(i);
            out.at(j, i) = evaluate(h, std::span<const double>(&q, 1), std::span<const double>(&p, 1));
        }
    }
    return out;
}

void write_csv(std::ostream& os, const GridFn& f) {
    const auto old = os.precision(std::numeric_limits<double>::max_digits10);
    os << "q,value\n";
    for (int j = 0; j < f.size(); ++j) os << f.grid().node(j) << ',' << f[j] << '\n';
    os.precision(old);
}

void write_csv(std::ostream& os, const PhaseFn& f) {
    const auto old = os.precision(std::numeric_limits<double>::max_digits10);
    const PhaseGrid& g = f.grid();
    os << "q,p,value\n";
    for (int j = 0; j < g.Nq(); ++j) {
        for (int i = 0; i < g.Np; ++i) os << g.q(j) << ',' << g.p(i) << ',' << f.at(j, i) << '\n';
    }
    os.precision(old);
}

}  // namespace mpv
