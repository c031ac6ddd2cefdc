#include "singring/ringlaw.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "json.hpp"
#include "singring/errors.hpp"
#include "singring/parallel.hpp"

namespace singring {

namespace {

constexpr double kPi = 3.14159265358979323846;

struct LinearFit {
    double c0, c1;  // value = c0 + c1 r
};

LinearFit fit_line(const std::vector<double>& r, const std::vector<double>& v,
                   std::size_t i0) {
    double sr = 0, sv = 0, srr = 0, srv = 0;
    for (std::size_t k = i0; k < i0 + 3; ++k) {
        sr += r[k];
        sv += v[k];
        srr += r[k] * r[k];
        srv += r[k] * v[k];
    }
    const double det = 3.0 * srr - sr * sr;
    const double c1 = (3.0 * srv - sr * sv) / det;
    const double c0 = (sv - c1 * sr) / 3.0;
    return {c0, c1};
}

}  // namespace

RingDensity radial_density(const SymmetricMeasure& theta_sym, const std::vector<double>& r_grid,
                           const RadialOptions& opt) {
    const std::size_t n = r_grid.size();
    if (n < 9) throw std::invalid_argument("radial_density: grid too short");
    if (!(r_grid.front() > 0.0))
        throw std::invalid_argument("radial_density: grid must be strictly positive");
    const double h = r_grid[1] - r_grid[0];
    for (std::size_t j = 0; j + 1 < n; ++j) {
        const double hj = r_grid[j + 1] - r_grid[j];
        if (!(hj > 0.0) || std::abs(hj - h) > 1e-6 * h)
            throw std::invalid_argument("radial_density: grid must be uniform and ascending");
    }

    RingDensity rd;
    rd.radii = r_grid;
    rd.b = std::sqrt(theta_sym.second_moment());
    if (theta_sym.measure().has_atom_at_zero()) {
        rd.a = 0.0;
        rd.a_defined = false;
    } else {
        rd.a = 1.0 / std::sqrt(theta_sym.measure().moment(-2));
    }

    if (n < 80 || r_grid.front() > 0.8 * rd.a + h || r_grid.back() < 1.2 * rd.b - h)
        throw std::invalid_argument(
            "radial_density: grid must resolve [0.8a, 1.2b] with at least 80 points");

    rd.potential.assign(n, 0.0);
    parallel_for(n, opt.threads, [&](std::size_t j) {
        rd.potential[j] = log_potential_axis(theta_sym, r_grid[j], opt.tol, opt.solver).u;
    });

    rd.density.assign(n, 0.0);
    std::vector<double> du(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        double d1, d2;
        if (j == 0) {
            d1 = (-1.5 * rd.potential[0] + 2.0 * rd.potential[1] - 0.5 * rd.potential[2]) / h;
            d2 = (rd.potential[0] - 2.0 * rd.potential[1] + rd.potential[2]) / (h * h);
        } else if (j + 1 == n) {
            d1 = (1.5 * rd.potential[j] - 2.0 * rd.potential[j - 1] + 0.5 * rd.potential[j - 2]) / h;
            d2 = (rd.potential[j] - 2.0 * rd.potential[j - 1] + rd.potential[j - 2]) / (h * h);
        } else {
            d1 = (rd.potential[j + 1] - rd.potential[j - 1]) / (2.0 * h);
            d2 = (rd.potential[j + 1] - 2.0 * rd.potential[j] + rd.potential[j - 1]) / (h * h);
        }
        du[j] = d1;
        rd.density[j] = (d2 + d1 / r_grid[j]) / (2.0 * kPi);
    }
    rd.trust_begin = 1;
    rd.trust_end = n - 1;

    // mass over [a, b]: trapezoid on clean interior rows plus linear boundary
    // strips from the 3-point extrapolations (rows whose stencil straddles an
    // edge are excluded)
    const double lo_edge = rd.a_defined ? rd.a : r_grid.front();
    std::size_t ia = rd.trust_begin;
    while (ia < rd.trust_end && r_grid[ia] < lo_edge + 1.5 * h) ++ia;
    std::size_t ib = rd.trust_end;
    while (ib > ia && r_grid[ib - 1] > rd.b - 1.5 * h) --ib;
    if (ib < ia + 4)
        throw NumericError("radial_density: too few interior rows between the ring edges");

    double mass = 0.0;
    for (std::size_t j = ia; j + 1 < ib; ++j) {
        const double f0 = 2.0 * kPi * r_grid[j] * rd.density[j];
        const double f1 = 2.0 * kPi * r_grid[j + 1] * rd.density[j + 1];
        mass += 0.5 * (f0 + f1) * h;
    }
    const LinearFit la = fit_line(r_grid, rd.density, ia);
    const LinearFit lb = fit_line(r_grid, rd.density, ib - 3);
    const double rho_at_a = la.c0 + la.c1 * lo_edge;
    const double rho_at_b = lb.c0 + lb.c1 * rd.b;
    mass += 0.5 * (2.0 * kPi * lo_edge * rho_at_a + 2.0 * kPi * r_grid[ia] * rd.density[ia]) *
            (r_grid[ia] - lo_edge);
    mass += 0.5 * (2.0 * kPi * rd.b * rho_at_b + 2.0 * kPi * r_grid[ib - 1] * rd.density[ib - 1]) *
            (rd.b - r_grid[ib - 1]);
    rd.mass = mass;

    for (std::size_t j = ia; j < ib; ++j)
        if (rd.density[j] < -1e-3)
            throw NumericError("radial_density: negative density beyond numerical noise");
    if (std::abs(rd.mass - 1.0) > opt.mass_tolerance)
        throw NumericError("radial_density: mass check failed (" + std::to_string(rd.mass) +
                           "); refine the r grid");
    return rd;
}

BoundaryReport boundary_check(const RingDensity& rd) {
    BoundaryReport rep;
    rep.a = rd.a;
    rep.b = rd.b;
    rep.mass = rd.mass;
    if (!rd.a_defined || !(rd.b - rd.a > 1e-9 * rd.b)) return rep;  // degenerate ring
    rep.applicable = true;
    rep.limit_a = 1.0 / (kPi * rd.a * rd.a);
    rep.limit_b = 1.0 / (kPi * rd.b * rd.b);

    const double h = rd.radii[1] - rd.radii[0];
    std::size_t ia = rd.trust_begin;
    while (ia < rd.trust_end && rd.radii[ia] < rd.a + 1.5 * h) ++ia;
    std::size_t ib = rd.trust_end;
    while (ib > ia && rd.radii[ib - 1] > rd.b - 1.5 * h) --ib;
    if (ib < ia + 3 || ia + 3 > rd.trust_end)
        throw NumericError("boundary_check: not enough interior rows for extrapolation");

    const LinearFit la = fit_line(rd.radii, rd.density, ia);
    const LinearFit lb = fit_line(rd.radii, rd.density, ib - 3);
    rep.extrap_a = la.c0 + la.c1 * rd.a;
    rep.extrap_b = lb.c0 + lb.c1 * rd.b;
    rep.dev_a = std::abs(rep.extrap_a - rep.limit_a) / rep.limit_a;
    rep.dev_b = std::abs(rep.extrap_b - rep.limit_b) / rep.limit_b;
    return rep;
}

std::string boundary_report_json(const BoundaryReport& rep) {
    nlohmann::json doc{{"a", rep.a},           {"b", rep.b},
                       {"limit_a", rep.limit_a}, {"limit_b", rep.limit_b},
                       {"dev_a", rep.dev_a},     {"dev_b", rep.dev_b},
                       {"mass", rep.mass}};
    return doc.dump();
}

}  // namespace singring
