#include "fvporous/analysis.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "fvporous/scheme.hpp"

namespace fvporous {

namespace {

constexpr double kPi = std::numbers::pi;

// 3-point Gauss-Legendre on [0,1]: exact through degree 5.
constexpr std::array<double, 3> kGauss3Nodes = {0.1127016653792583114820735, 0.5, 0.8872983346207416885179265};
constexpr std::array<double, 3> kGauss3Weights = {5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0};

constexpr std::array<double, 5> kGauss5Nodes = {
    0.0469100770306680036011866, 0.2307653449471584544818428, 0.5, 0.7692346550528415455181572,
    0.9530899229693319963988134};
constexpr std::array<double, 5> kGauss5Weights = {
    0.1184634425280945437571320, 0.2393143352496832340206457, 0.2844444444444444444444444,
    0.2393143352496832340206457, 0.1184634425280945437571320};

double sum_sq_over_n(const CellField& f, std::size_t first) {
    long double acc = 0.0L;
    for (std::size_t i = first; i < f.size(); ++i) acc += static_cast<long double>(f[i]) * f[i];
    return static_cast<double>(acc / static_cast<long double>(f.size()));
}

CellField difference(const CellField& a, const CellField& b) {
    CellField out(a.grid());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
    return out;
}

double trapezoid(std::span<const double> t, std::span<const double> f) {
    double acc = 0.0;
    for (std::size_t k = 1; k < t.size(); ++k) acc += 0.5 * (t[k] - t[k - 1]) * (f[k] + f[k - 1]);
    return acc;
}

void require_sizes(std::size_t got, std::size_t want, const char* what) {
    if (got != want) {
        throw std::invalid_argument(std::string(what) + ": expected " + std::to_string(want) +
                                    " values, got " + std::to_string(got));
    }
}

double ratio_of(double lhs, double rhs) {
    if (lhs == 0.0 && rhs == 0.0) return 0.0;
    return lhs / rhs;
}

}  // namespace

double norm_H(const CellField& f) { return std::sqrt(sum_sq_over_n(f, 0)); }

double norm_HDelta(const CellField& f) { return std::sqrt(sum_sq_over_n(f, 1)); }

ErrorRow error_pair(const Trajectory& coarse, const Trajectory& reference) {
    const Grid& cg = coarse.grid;
    const Grid& fg = reference.grid;
    if (fg.size() % cg.size() != 0) {
        throw std::invalid_argument("reference grid of " + std::to_string(fg.size()) +
                                    " cells is not a refinement of " + std::to_string(cg.size()));
    }
    if (coarse.times.size() != reference.times.size()) {
        throw std::invalid_argument("trajectories have different checkpoint counts");
    }
    for (std::size_t k = 0; k < coarse.times.size(); ++k) {
        const double scale = std::max(1.0, std::abs(reference.times.back()));
        if (std::abs(coarse.times[k] - reference.times[k]) > 1e-12 * scale) {
            throw std::invalid_argument("checkpoint " + std::to_string(k) + " differs between trajectories");
        }
    }

    double sup_sq = 0.0;
    std::vector<double> flux(coarse.times.size());
    for (std::size_t k = 0; k < coarse.times.size(); ++k) {
        const CellField ref_v = restrict_to(reference.states[k], cg);
        const double e = norm_H(difference(ref_v, coarse.states[k]));
        sup_sq = std::max(sup_sq, e * e);

        const CellField ref_tilde = restrict_to(tilde(reference.states[k]).field, cg);
        const double f = norm_HDelta(difference(ref_tilde, tilde(coarse.states[k]).field));
        flux[k] = f * f;
    }
    const double e_flux = trapezoid(coarse.times, flux);
    return {cg.size(), cg.dx(), sup_sq, e_flux, sup_sq + e_flux};
}

std::optional<double> log_log_slope(std::span<const double> x, std::span<const double> y) {
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    std::size_t m = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(y[i] > 0.0) || !(x[i] > 0.0)) continue;
        const double lx = std::log(x[i]);
        const double ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        ++m;
    }
    if (m < 2) return std::nullopt;
    const double md = static_cast<double>(m);
    const double denom = md * sxx - sx * sx;
    if (denom == 0.0) return std::nullopt;
    return (md * sxy - sx * sy) / denom;
}

OrderFit fit_order(std::span<const ErrorRow> rows) {
    OrderFit fit;
    std::vector<double> dx, s;
    for (std::size_t j = 0; j < rows.size(); ++j) {
        dx.push_back(rows[j].dx);
        s.push_back(rows[j].S);
        if (j == 0 || !(rows[j].S > 0.0) || !(rows[j - 1].S > 0.0)) {
            fit.orders.emplace_back();
            continue;
        }
        fit.orders.emplace_back(std::log(rows[j - 1].S / rows[j].S) / std::log(rows[j - 1].dx / rows[j].dx));
    }
    fit.slope = log_log_slope(dx, s);
    return fit;
}

MonitorReport monitors(const Trajectory& traj) {
    const std::size_t K = traj.states.size();
    MonitorReport r{traj.grid.size(), 0.0, 0.0, 0.0, 0.0, 0.0, 0.0};
    std::vector<double> tilde_sq(K), hat_sq(K);
    for (std::size_t k = 0; k < K; ++k) {
        const CellField& v = traj.states[k];
        r.M1 = std::max(r.M1, norm_H(v));
        const double t = norm_H(tilde(v).field);
        r.M4 = std::max(r.M4, t);
        tilde_sq[k] = t * t;
        const double h = norm_H(hat(v).field);
        hat_sq[k] = h * h;
        for (double x : v.values()) r.M6 = std::max(r.M6, std::abs(x));
    }
    r.M2 = trapezoid(traj.times, tilde_sq);
    r.M5 = trapezoid(traj.times, hat_sq);
    for (std::size_t k = 0; k + 1 < K; ++k) {
        const double dt = traj.times[k + 1] - traj.times[k];
        CellField rate = difference(traj.states[k + 1], traj.states[k]);
        for (double& x : rate.values()) x /= dt;
        const double q = norm_H(rate);
        r.M3 += q * q * dt;
    }
    return r;
}

InequalitySample check_gn_discrete(std::span<const double> w_nodes, std::span<const double> s_cells,
                                   const Grid& grid) {
    const std::size_t n = grid.size();
    require_sizes(w_nodes.size(), n + 1, "check_gn_discrete nodal w");
    require_sizes(s_cells.size(), n, "check_gn_discrete cell s");
    const double dx = grid.dx();

    auto slope = [&](std::size_t i) { return (w_nodes[i + 1] - w_nodes[i]) / dx; };

    double quartic = 0.0;  // int_dx^1 |s-w|^4
    double square = 0.0;   // |s-w|^2_{HD}
    double worst = 0.0;
    std::size_t worst_cell = 1;
    for (std::size_t i = 1; i < n; ++i) {
        const double a = s_cells[i] - w_nodes[i];
        const double b = s_cells[i] - w_nodes[i + 1];
        for (std::size_t q = 0; q < kGauss3Nodes.size(); ++q) {
            const double d = a + (b - a) * kGauss3Nodes[q];
            const double d2 = d * d;
            square += kGauss3Weights[q] * dx * d2;
            quartic += kGauss3Weights[q] * dx * d2 * d2;
        }
        const double peak = std::max(std::abs(a), std::abs(b));
        if (peak > worst) {
            worst = peak;
            worst_cell = i;
        }
    }

    double diff_term = 0.0;   // |delta_x s - w'|^2_{HD}
    double shift_term = 0.0;  // |w' - w'(. - dx)|^2_{HD}
    double grad_term = 0.0;   // |w'|^2_H
    for (std::size_t i = 0; i < n; ++i) {
        const double wp = slope(i);
        grad_term += dx * wp * wp;
        if (i == 0) continue;
        const double ds = (s_cells[i] - s_cells[i - 1]) / dx;
        diff_term += dx * (ds - wp) * (ds - wp);
        const double jump = wp - slope(i - 1);
        shift_term += dx * jump * jump;
    }

    const double C5 = kGagliardoNirenbergC5;
    const double rhs = C5 * square * square + C5 * (diff_term + shift_term + dx * grad_term) * square;
    std::ostringstream witness;
    witness.precision(6);
    witness << "max |s-w| = " << worst << " in cell " << worst_cell + 1;
    return {n, 0, quartic, rhs, ratio_of(quartic, rhs), witness.str()};
}

InequalitySample check_gn_continuous(std::span<const double> u_nodes, const Grid& grid) {
    const std::size_t n = grid.size();
    require_sizes(u_nodes.size(), n + 1, "check_gn_continuous nodal u");

    double sup_sq = 0.0;
    std::size_t argmax = 0;
    for (std::size_t i = 0; i <= n; ++i) {
        const double sq = u_nodes[i] * u_nodes[i];
        if (sq > sup_sq) {
            sup_sq = sq;
            argmax = i;
        }
    }
    // Per-cell |u|^2 = dx*(mean^2 + jump^2/12); accumulate cell terms in extended
    // precision and divide by n so constants reproduce |u|_inf^2 exactly.
    long double l2 = 0.0L, h1 = 0.0L;
    for (std::size_t i = 0; i < n; ++i) {
        const double a = u_nodes[i];
        const double b = u_nodes[i + 1];
        const double mean = (a + b) / 2.0;
        const double jump = b - a;
        l2 += static_cast<long double>(mean * mean) + static_cast<long double>(jump) * jump / 12.0L;
        h1 += static_cast<long double>(jump) * jump;
    }
    const double u_sq = static_cast<double>(l2 / static_cast<long double>(n));
    const double du_sq = static_cast<double>(h1 * static_cast<long double>(n));
    const double rhs = u_sq + 2.0 * std::sqrt(u_sq) * std::sqrt(du_sq);

    std::ostringstream witness;
    witness.precision(6);
    witness << "sup attained at node " << argmax;
    return {n, 0, sup_sq, rhs, ratio_of(sup_sq, rhs), witness.str()};
}

const char* to_string(InequalityKind kind) noexcept {
    return kind == InequalityKind::gn_discrete ? "gn_discrete" : "gn_continuous";
}

std::vector<InequalitySample> inequality_sweep(InequalityKind kind, std::size_t n, std::size_t samples,
                                               std::uint64_t seed, double amplitude, unsigned threads) {
    const Grid grid(n);
    std::vector<InequalitySample> out(samples);

    auto run = [&](std::size_t begin, std::size_t end) {
        std::vector<double> nodes(n + 1), cells(n);
        for (std::size_t j = begin; j < end; ++j) {
            const std::uint64_t sample_seed = seed ^ static_cast<std::uint64_t>(j);
            std::mt19937_64 gen(sample_seed);
            std::uniform_real_distribution<double> dist(-amplitude, amplitude);
            for (double& x : nodes) x = dist(gen);
            if (kind == InequalityKind::gn_discrete) {
                for (double& x : cells) x = dist(gen);
                out[j] = check_gn_discrete(nodes, cells, grid);
            } else {
                out[j] = check_gn_continuous(nodes, grid);
            }
            out[j].seed = sample_seed;
        }
    };

    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(1, samples / 256)));
    if (threads <= 1) {
        run(0, samples);
        return out;
    }
    std::vector<std::thread> pool;
    const std::size_t chunk = (samples + threads - 1) / threads;
    for (unsigned w = 0; w < threads; ++w) {
        const std::size_t begin = std::min(samples, w * chunk);
        const std::size_t end = std::min(samples, begin + chunk);
        pool.emplace_back(run, begin, end);
    }
    for (std::thread& th : pool) th.join();
    return out;
}

double weak_residual(const Trajectory& traj, int m) {
    if (m < 0) throw std::invalid_argument("test mode m must be non-negative");
    const Grid& g = traj.grid;
    const ProblemSpec& spec = *traj.problem;
    const std::size_t n = g.size();
    const double T = spec.T;
    const double mpi = static_cast<double>(m) * kPi;

    // Exact cell integrals of cos(m pi x) and of m pi sin(m pi x).
    std::vector<double> cos_int(n), dsin_int(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double xl = g.node(i);
        const double xr = g.node(i + 1);
        cos_int[i] = m == 0 ? g.dx() : (std::sin(mpi * xr) - std::sin(mpi * xl)) / mpi;
        dsin_int[i] = m == 0 ? 0.0 : std::cos(mpi * xl) - std::cos(mpi * xr);
    }

    const SemiDiscreteSystem system(traj.problem, g);
    std::vector<double> integrand(traj.times.size());
    for (std::size_t k = 0; k < traj.times.size(); ++k) {
        const double t = traj.times[k];
        const CellField& v = traj.states[k];
        // -h(v) d_t eta with d_t eta = -cos(m pi x)/T.
        double storage = 0.0;
        for (std::size_t i = 0; i < n; ++i) storage += spec.h.value(v[i]) * cos_int[i];
        storage /= T;
        // Flux on (dx, 1) against d_x eta = -(1 - t/T) m pi sin(m pi x).
        double flux = 0.0;
        if (m != 0) {
            const CellField p = system.pressure(std::min(t, T));
            for (std::size_t i = 1; i < n; ++i) {
                const double slope = (v[i] - v[i - 1]) / g.dx();
                const double mid = (v[i] + v[i - 1]) / 2.0;
                flux += (slope + spec.b.value(mid) * p[i - 1]) * dsin_int[i];
            }
            flux *= -(1.0 - t / T);
        }
        integrand[k] = storage + flux;
    }
    double r = trapezoid(traj.times, integrand);

    // int_0^1 h(v0(x)) cos(m pi x) dx on a fixed partition, independent of n.
    constexpr std::size_t kPanels = 2048;
    double initial = 0.0;
    for (std::size_t j = 0; j < kPanels; ++j) {
        const double x0 = static_cast<double>(j) / kPanels;
        for (std::size_t q = 0; q < kGauss5Nodes.size(); ++q) {
            const double x = x0 + kGauss5Nodes[q] / kPanels;
            initial += kGauss5Weights[q] * spec.h.value(spec.v0.value(x)) * std::cos(mpi * x);
        }
    }
    initial /= kPanels;
    r -= initial;
    return std::abs(r);
}

}  // namespace fvporous
