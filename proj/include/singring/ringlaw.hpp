#pragma once

#include <string>
#include <vector>

#include "singring/freeconv.hpp"
#include "singring/measures.hpp"

namespace singring {

// Radial profile of the limiting annular law: log-potential samples U(r_j)
// and the density rho_A(r_j) = (U'' + U'/r) / (2 pi) from central finite
// differences on a uniform grid.  Boundary rows use one-sided stencils and
// sit outside the trust region used for the mass integral.
struct RingDensity {
    std::vector<double> radii;
    std::vector<double> potential;
    std::vector<double> density;
    double a = 0.0;
    double b = 0.0;
    bool a_defined = true;
    double mass = 0.0;          // ∫ rho_A(r) 2 pi r dr over [a, b]
    std::size_t trust_begin = 0;  // [trust_begin, trust_end): central stencils
    std::size_t trust_end = 0;
};

// Re-export of the annulus radii at the law level.
inline RingRadii ring_support(const DiscreteMeasure& theta) { return ring_radii(theta); }

struct RadialOptions {
    int threads = 1;
    double tol = 1e-11;
    SolverOptions solver{};
    double mass_tolerance = 5e-2;  // exceeding it raises a resolution error
};

// Requires a strictly positive, uniform, ascending grid of at least 80
// points covering [0.8 a, 1.2 b].  U is evaluated through the resolvent
// route of log_potential_axis point by point (grid points are independent
// solver sweeps and may run concurrently).
RingDensity radial_density(const SymmetricMeasure& theta_sym, const std::vector<double>& r_grid,
                           const RadialOptions& opt = {});

// One-sided extrapolations of the density to the annulus boundary against
// the limits 1/(pi a^2) and 1/(pi b^2) (linear fit through the 3 nearest
// clean interior grid points).
struct BoundaryReport {
    bool applicable = false;  // false for a degenerate ring (a == b)
    double a = 0.0, b = 0.0;
    double limit_a = 0.0, limit_b = 0.0;
    double extrap_a = 0.0, extrap_b = 0.0;
    double dev_a = 0.0, dev_b = 0.0;  // relative deviations
    double mass = 0.0;
};

BoundaryReport boundary_check(const RingDensity& rd);

// {"a":., "b":., "limit_a":., "limit_b":., "dev_a":., "dev_b":., "mass":.}
std::string boundary_report_json(const BoundaryReport& rep);

}  // namespace singring
