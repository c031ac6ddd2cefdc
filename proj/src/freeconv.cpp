#include "singring/freeconv.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "singring/parallel.hpp"
#include "singring/quadrature.hpp"

namespace singring {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kOmegaMin = 1e-6;

using Cplx = std::complex<double>;

struct MapEval {
    Cplx w;    // 1 + 4 rho^2 G^2
    Cplx psi;  // z1 - 2 rho^2 G / (1 + sqrt(w))
    Cplx f;    // G_theta(psi)
    bool valid = false;
};

// Evaluates the subordination map at g.  Invalid when psi leaves the upper
// half plane (G_theta would be evaluated on the wrong sheet).
MapEval eval_map(const SymmetricMeasure& theta, double rho, Cplx z1, Cplx g) {
    MapEval out;
    out.w = 1.0 + 4.0 * rho * rho * g * g;
    const Cplx sq = std::sqrt(out.w);
    out.psi = z1 - 2.0 * rho * rho * g / (1.0 + sq);
    if (!(out.psi.imag() > 0.0)) return out;
    out.f = stieltjes(theta, out.psi);
    out.valid = true;
    return out;
}

// d/dG [G - G_theta(psi(G))], used for Newton polish near the fixed point.
Cplx residual_derivative(const SymmetricMeasure& theta, double rho, Cplx g, const MapEval& ev) {
    const Cplx sq = std::sqrt(ev.w);
    const Cplx denom = sq * (1.0 + sq) * (1.0 + sq);
    const Cplx dpsi = -2.0 * rho * rho * ((1.0 + sq) * sq - 4.0 * rho * rho * g * g) / denom;
    Cplx dgtheta = 0.0;
    const auto& mu = theta.measure();
    for (std::size_t i = 0; i < mu.size(); ++i) {
        const Cplx d = ev.psi - mu.locations()[i];
        dgtheta -= mu.weights()[i] / (d * d);
    }
    return 1.0 - dgtheta * dpsi;
}

enum class Stuck { None, Branch, Residual, MaxIter };

struct LevelResult {
    bool ok = false;
    Cplx g;
    double resid = std::numeric_limits<double>::infinity();
    int iters = 0;
    Stuck why = Stuck::None;
};

bool acceptable(const MapEval& ev, Cplx g) {
    return ev.valid && ev.w.real() > 0.0 && g.imag() < 0.0;
}

// Damped fixed point G <- (1-omega) G + omega G_theta(psi(G)) at fixed z1,
// omega halved whenever the residual would grow or the step would cross the
// square-root cut, with a Newton polish once inside the basin.
LevelResult iterate_level(const SymmetricMeasure& theta, double rho, Cplx z1, Cplx g0,
                          double tol, const SolverOptions& opt, double* branch_min) {
    LevelResult out;
    Cplx g = g0;
    MapEval cur = eval_map(theta, rho, z1, g);
    if (!acceptable(cur, g)) {
        out.g = g;
        out.why = Stuck::Branch;
        return out;
    }
    double rn = std::abs(cur.f - g);
    *branch_min = std::min(*branch_min, cur.w.real());

    double omega = opt.omega;
    for (int it = 0; it < opt.max_iterations; ++it) {
        if (rn <= tol) {
            out.ok = true;
            out.g = g;
            out.resid = rn;
            out.iters = it;
            return out;
        }

        if (rn < 1e-4) {  // Newton step on G - G_theta(psi(G))
            const Cplx dh = residual_derivative(theta, rho, g, cur);
            if (std::abs(dh) > 1e-12) {
                const Cplx gn = g - (g - cur.f) / dh;
                const MapEval evn = eval_map(theta, rho, z1, gn);
                if (acceptable(evn, gn)) {
                    const double rnn = std::abs(evn.f - gn);
                    if (rnn < 0.5 * rn) {
                        g = gn;
                        cur = evn;
                        rn = rnn;
                        *branch_min = std::min(*branch_min, cur.w.real());
                        continue;
                    }
                }
            }
        }

        const Cplx gt = g + omega * (cur.f - g);
        const MapEval trial = eval_map(theta, rho, z1, gt);
        const bool ok = acceptable(trial, gt);
        const double rt = ok ? std::abs(trial.f - gt) : std::numeric_limits<double>::infinity();
        if (rt <= rn || rt <= tol) {
            g = gt;
            cur = trial;
            rn = rt;
            *branch_min = std::min(*branch_min, cur.w.real());
            omega = std::min(opt.omega, omega * 1.25);
        } else {
            omega *= 0.5;
            if (omega < kOmegaMin) {
                out.g = g;
                out.resid = rn;
                out.iters = it;
                out.why = ok ? Stuck::Residual : Stuck::Branch;
                return out;
            }
        }
    }
    out.g = g;
    out.resid = rn;
    out.iters = opt.max_iterations;
    out.why = Stuck::MaxIter;
    return out;
}

SDState make_state(const SymmetricMeasure& theta, double rho, Cplx z1, Cplx g,
                   double branch_min, int iterations) {
    SDState st;
    st.z1 = z1;
    st.rho = rho;
    st.g = g;
    const Cplx w = 1.0 + 4.0 * rho * rho * g * g;
    const Cplx sq = std::sqrt(w);
    st.g_u = rho * g * g / (1.0 + sq);
    st.psi = z1 - 2.0 * rho * rho * g / (1.0 + sq);
    st.branch_margin = std::min(branch_min, w.real());
    st.branch_ok = st.branch_margin > 0.0;
    st.residual = (st.psi.imag() > 0.0) ? std::abs(stieltjes(theta, st.psi) - g) : 0.0;
    st.iterations = iterations;
    return st;
}

struct SweepContext {
    Cplx g;            // current warm start
    double branch_min = std::numeric_limits<double>::infinity();
    long iterations = 0;
    bool have_state = false;
    SDState last_good;  // most recent converged level
};

// Descends Im(z1) through the given levels (last entry is the target),
// splitting a descent step geometrically when a level cannot be solved.
void descend(const SymmetricMeasure& theta, double rho, double re_z1,
             std::vector<double> pending_desc, double tol, const SolverOptions& opt,
             SweepContext* ctx) {
    int splits_left = opt.max_level_splits;
    double y_prev = -1.0;
    // pending_desc is sorted descending; consume from the back after reversing
    std::vector<double> stack(pending_desc.rbegin(), pending_desc.rend());
    while (!stack.empty()) {
        const double y = stack.back();
        const Cplx z(re_z1, y);
        LevelResult lr = iterate_level(theta, rho, z, ctx->g, tol, opt, &ctx->branch_min);
        ctx->iterations += lr.iters;
        if (lr.ok) {
            stack.pop_back();
            ctx->g = lr.g;
            ctx->last_good = make_state(theta, rho, z, lr.g, ctx->branch_min, 0);
            ctx->have_state = true;
            y_prev = y;
            continue;
        }
        if (splits_left-- <= 0) {
            if (lr.why == Stuck::Branch) {
                SDState last = ctx->have_state ? ctx->last_good
                                               : make_state(theta, rho, z, ctx->g, ctx->branch_min, 0);
                throw BranchError("solve_sd: square-root branch violated on the continuation path",
                                  last);
            }
            throw ConvergenceError("solve_sd: fixed point did not converge (residual " +
                                       std::to_string(lr.resid) + ")",
                                   lr.resid);
        }
        if (y_prev > 0.0) {
            stack.push_back(std::sqrt(y_prev * y));  // geometric midpoint
        } else {
            // trouble at the very first level: restart higher up the asymptote
            const double y_top = std::max(4.0 * y, 4.0 * opt.im_start);
            ctx->g = 1.0 / Cplx(re_z1, y_top);
            stack.push_back(std::sqrt(y_top * y));
            stack.push_back(y_top);
        }
    }
}

std::vector<double> ladder_levels(double target, const SolverOptions& opt) {
    std::vector<double> ys;
    if (target >= opt.im_start) {
        ys.push_back(target);
        return ys;
    }
    double y = opt.im_start;
    while (y > target) {
        ys.push_back(y);
        y *= opt.ladder_ratio;
    }
    ys.push_back(target);
    return ys;
}

}  // namespace

SDState solve_sd(const SymmetricMeasure& theta_sym, double rho, Cplx z1, double tol,
                 const SolverOptions& opt) {
    if (!(z1.imag() > 0.0)) throw std::invalid_argument("solve_sd: Im z1 must be > 0");
    if (!(rho >= 0.0)) throw std::invalid_argument("solve_sd: rho must be >= 0");
    if (!(tol > 0.0)) throw std::invalid_argument("solve_sd: tol must be > 0");

    if (rho == 0.0) {  // exact reduction: nu = theta_sym
        SDState st;
        st.z1 = z1;
        st.rho = 0.0;
        st.g = stieltjes(theta_sym, z1);
        st.g_u = 0.0;
        st.psi = z1;
        st.branch_ok = true;
        st.branch_margin = 1.0;
        st.residual = 0.0;
        st.iterations = 0;
        return st;
    }

    SweepContext ctx;
    const std::vector<double> levels = ladder_levels(z1.imag(), opt);
    ctx.g = 1.0 / Cplx(z1.real(), levels.front());
    descend(theta_sym, rho, z1.real(), levels, tol, opt, &ctx);
    SDState st = make_state(theta_sym, rho, z1, ctx.g, ctx.branch_min,
                            static_cast<int>(std::min<long>(ctx.iterations, INT32_MAX)));
    return st;
}

LimitLaw density(const SymmetricMeasure& theta_sym, double rho, const std::vector<double>& grid,
                 double eps, const DensityOptions& opt) {
    if (!(eps > 0.0)) throw std::invalid_argument("density: eps must be > 0");
    if (grid.size() < 2) throw std::invalid_argument("density: grid needs at least two points");
    const double scale = std::max(1.0, std::abs(grid.back()));
    for (std::size_t i = 0; i + 1 < grid.size(); ++i)
        if (!(grid[i] < grid[i + 1]))
            throw std::invalid_argument("density: grid must be strictly ascending");
    for (std::size_t i = 0, j = grid.size() - 1; i <= j; ++i, --j)
        if (std::abs(grid[i] + grid[j]) > 1e-9 * scale)
            throw std::invalid_argument("density: grid must be symmetric about 0");

    const std::size_t npts = grid.size();
    LimitLaw law;
    law.rho = rho;
    law.grid = grid;
    law.density.assign(npts, 0.0);
    std::vector<char> failed(npts, 0);
    std::vector<std::exception_ptr> errors(npts);

    parallel_for(npts, opt.threads, [&](std::size_t j) {
        try {
            const SDState st = solve_sd(theta_sym, rho, {grid[j], eps}, opt.tol, opt.solver);
            law.density[j] = std::max(0.0, -st.g.imag() / kPi);
        } catch (...) {
            failed[j] = 1;
            errors[j] = std::current_exception();
        }
    });

    for (std::size_t j = 0; j < npts; ++j) {
        if (!failed[j]) continue;
        const bool left_ok = (j == 0) || !failed[j - 1];
        const bool right_ok = (j + 1 == npts) || !failed[j + 1];
        if (!left_ok || !right_ok) std::rethrow_exception(errors[j]);
        if (j == 0)
            law.density[j] = law.density[j + 1];
        else if (j + 1 == npts)
            law.density[j] = law.density[j - 1];
        else
            law.density[j] = 0.5 * (law.density[j - 1] + law.density[j + 1]);
        law.patched.push_back(j);
    }

    // maximal runs above the gap threshold
    std::size_t run_start = npts;
    for (std::size_t j = 0; j <= npts; ++j) {
        const bool above = j < npts && law.density[j] > opt.gap_threshold;
        if (above && run_start == npts) run_start = j;
        if (!above && run_start != npts) {
            law.components.emplace_back(grid[run_start], grid[j - 1]);
            run_start = npts;
        }
    }
    return law;
}

bool gap_probe(const SymmetricMeasure& theta_sym, double rho, double halfwidth,
               const GapProbeOptions& opt) {
    if (!(halfwidth > 0.0)) throw std::invalid_argument("gap_probe: halfwidth must be > 0");
    const int m = std::max(5, opt.samples) | 1;  // odd, so 0 is sampled
    std::vector<double> grid(m);
    for (int i = 0; i < m; ++i) grid[i] = -halfwidth + 2.0 * halfwidth * i / (m - 1);
    grid[(m - 1) / 2] = 0.0;
    DensityOptions dopt;
    dopt.gap_threshold = opt.gap_threshold;
    dopt.tol = opt.tol;
    const LimitLaw law = density(theta_sym, rho, grid, opt.eps_probe, dopt);
    const double peak = *std::max_element(law.density.begin(), law.density.end());
    return peak < opt.gap_threshold;
}

namespace {

std::vector<double> cosine_panels(double lo, double hi, int m) {
    std::vector<double> edges(m + 1);
    for (int j = 0; j <= m; ++j)
        edges[j] = lo + (hi - lo) * 0.5 * (1.0 - std::cos(kPi * j / m));
    return edges;
}

double closed_form_log_moment(const SymmetricMeasure& theta) {
    const auto& mu = theta.measure();
    if (mu.has_atom_at_zero())
        throw std::domain_error("log_potential: log|x| is not integrable against an atom at 0");
    double acc = 0.0;
    for (std::size_t i = 0; i < mu.size(); ++i)
        acc += mu.weights()[i] * std::log(std::abs(mu.locations()[i]));
    return acc;
}

}  // namespace

LogPotential log_potential(const SymmetricMeasure& theta_sym, double rho,
                           const DensityOptions& opt) {
    if (!(rho >= 0.0)) throw std::invalid_argument("log_potential: rho must be >= 0");
    LogPotential out;
    out.rho = rho;
    if (rho == 0.0) {
        out.u = closed_form_log_moment(theta_sym);
        return out;
    }
    if (theta_sym.is_point_mass_at_zero()) {  // nu = lambda_rho exactly
        out.u = std::log(rho);
        return out;
    }

    const double eps = 1e-5;
    const double xmax = rho + theta_sym.max_abs_location() + 1.0;
    const auto f = [&](double x) {
        const SDState st = solve_sd(theta_sym, rho, {x, eps}, opt.tol, opt.solver);
        return std::max(0.0, -st.g.imag() / kPi);
    };

    // coarse support scan on the positive half line
    const int nscan = 481;
    const double step = xmax / (nscan - 1);
    std::vector<double> scan(nscan);
    for (int i = 0; i < nscan; ++i) scan[i] = f(step * i);

    const double tau = 1e-4;
    std::vector<std::pair<double, double>> comps;
    int run = -1;
    for (int i = 0; i <= nscan; ++i) {
        const bool above = i < nscan && scan[i] > tau;
        if (above && run < 0) run = i;
        if (!above && run >= 0) {
            const double lo = std::max(0.0, step * (run - 1));
            const double hi = std::min(xmax, step * i);
            comps.emplace_back(lo, hi);
            run = -1;
        }
    }

    double value = 0.0, err = 0.0;
    bool touches_zero = false;
    double tail_err = 0.0;
    for (const auto& [lo, hi] : comps) {
        const auto integrand = [&](double x) { return 2.0 * f(x) * std::log(x); };
        if (lo <= step * 0.5) {
            touches_zero = true;
            // geometric refinement into the log singularity, graded top half
            const double mid = 0.5 * hi;
            const auto upper = cosine_panels(mid, hi, 8);
            for (std::size_t j = 0; j + 1 < upper.size(); ++j) {
                const PanelResult pr = gk15(integrand, upper[j], upper[j + 1]);
                value += pr.value;
                err += pr.err;
            }
            double t_hi = mid;
            const int halvings = 40;
            for (int k = 0; k < halvings; ++k) {
                const double t_lo = t_hi * 0.5;
                const PanelResult pr = gk15(integrand, t_lo, t_hi);
                value += pr.value;
                err += pr.err;
                t_hi = t_lo;
            }
            // truncated tail below the deepest panel
            const double fd = f(t_hi);
            tail_err = 2.0 * fd * t_hi * (std::abs(std::log(t_hi)) + 1.0);
            err += tail_err;
        } else {
            const auto edges = cosine_panels(lo, hi, 10);
            for (std::size_t j = 0; j + 1 < edges.size(); ++j) {
                const PanelResult pr = gk15(integrand, edges[j], edges[j + 1]);
                value += pr.value;
                err += pr.err;
            }
        }
    }

    // excluded-region bound: density below tau outside the components
    double excluded = 0.0;
    for (int i = 0; i + 1 < nscan; ++i) {
        const double xm = step * (i + 0.5);
        bool inside = false;
        for (const auto& [lo, hi] : comps) inside |= (xm >= lo && xm <= hi);
        if (!inside) excluded += tau * step * 2.0 * (std::abs(std::log(std::max(xm, eps))) + 1.0);
    }
    err += excluded;

    out.u = value;
    out.err_estimate = err;
    out.flagged = touches_zero && tail_err > 0.5e-3 * std::max(1.0, std::abs(value));
    return out;
}

LogPotential log_potential_axis(const SymmetricMeasure& theta_sym, double rho, double tol,
                                const SolverOptions& opt) {
    if (!(rho >= 0.0)) throw std::invalid_argument("log_potential: rho must be >= 0");
    LogPotential out;
    out.rho = rho;
    if (rho == 0.0) {
        out.u = closed_form_log_moment(theta_sym);
        return out;
    }
    if (theta_sym.is_point_mass_at_zero()) {
        out.u = std::log(rho);
        return out;
    }

    const double reach = rho + theta_sym.max_abs_location();
    const double scale = reach + 1.0;
    const double y_top = 16.0 * scale;
    const double m2_theta = theta_sym.second_moment();
    const double m2 = rho * rho + m2_theta;
    const double m4 = theta_sym.fourth_moment() + 4.0 * m2_theta * rho * rho +
                      rho * rho * rho * rho;

    // geometric panels [Y 2^-k-1, Y 2^-k] plus a closing panel at 0
    const int halvings = 26;
    std::vector<PanelNodes> panels;
    double hi = y_top;
    for (int k = 0; k < halvings; ++k) {
        panels.push_back(gk15_nodes(0.5 * hi, hi));
        hi *= 0.5;
    }
    panels.push_back(gk15_nodes(0.0, hi));

    // single warm-started sweep down the axis through every node
    struct NodeRef {
        double t;
        std::size_t panel, slot;
    };
    std::vector<NodeRef> order;
    order.reserve(panels.size() * 15);
    for (std::size_t p = 0; p < panels.size(); ++p)
        for (std::size_t s = 0; s < 15; ++s) order.push_back({panels[p].x[s], p, s});
    std::sort(order.begin(), order.end(), [](const NodeRef& a, const NodeRef& b) {
        return a.t > b.t;
    });

    std::vector<std::array<double, 15>> im_g(panels.size());
    SweepContext ctx;
    bool have_warm = false;
    for (const NodeRef& node : order) {
        const Cplx z(0.0, node.t);
        bool solved = false;
        if (have_warm) {
            LevelResult lr = iterate_level(theta_sym, rho, z, ctx.g, tol, opt, &ctx.branch_min);
            if (lr.ok) {
                ctx.g = lr.g;
                solved = true;
            }
        }
        if (!solved) {
            const SDState st = solve_sd(theta_sym, rho, z, tol, opt);
            ctx.g = st.g;
            ctx.branch_min = std::min(ctx.branch_min, st.branch_margin);
            have_warm = true;
        }
        im_g[node.panel][node.slot] = ctx.g.imag();
    }

    double integral = 0.0, err = 0.0;
    for (std::size_t p = 0; p < panels.size(); ++p) {
        double kron = 0.0, gauss = 0.0;
        for (std::size_t s = 0; s < 15; ++s) {
            kron += panels[p].wkron[s] * im_g[p][s];
            gauss += panels[p].wgauss[s] * im_g[p][s];
        }
        integral += kron;
        err += std::abs(kron - gauss);
    }

    const double m6_bound = std::pow(reach, 6);
    out.u = std::log(y_top) + m2 / (2.0 * y_top * y_top) -
            m4 / (4.0 * std::pow(y_top, 4)) + integral;
    out.err_estimate = err + m6_bound / (6.0 * std::pow(y_top, 6));
    return out;
}

}  // namespace singring
