#pragma once

#include <complex>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "singring/errors.hpp"
#include "singring/measures.hpp"

namespace singring {

// One point of the subordination system for nu = theta_sym ⊞ lambda_rho,
// lambda_rho = (δ_rho + δ_-rho)/2.  With w = 1 + 4 rho^2 G^2 and the
// principal square root:
//   G_U  = rho G^2 / (1 + sqrt(w))          (= (-1 + sqrt(w)) / (4 rho))
//   psi  = z1 - rho^2 G / (1 + 2 rho G_U)   (= z1 - 2 rho^2 G / (1 + sqrt(w)))
//   G    = G_{theta_sym}(psi)
// branch_ok certifies Re(w) > 0 at every accepted iterate of the
// continuation path; crossing that cut aborts rather than switching sheets.
struct SDState {
    std::complex<double> z1;
    double rho = 0.0;
    std::complex<double> g, g_u, psi;
    bool branch_ok = true;
    double branch_margin = 1.0;  // min Re(w) seen along the path
    double residual = 0.0;       // |G_{theta}(psi) - G| at acceptance
    int iterations = 0;          // fixed-point steps over all levels
};

// Branch violation on the continuation path, carrying the last good state.
class BranchError : public NumericError {
public:
    BranchError(const std::string& what, SDState last)
        : NumericError(what), last_good(std::move(last)) {}
    SDState last_good;
};

struct SolverOptions {
    double im_start = 16.0;     // continuation starts at Re(z1) + i*im_start
    double ladder_ratio = 0.7;  // geometric descent of Im(z1)
    double omega = 0.5;         // damping; halved on residual increase
    int max_iterations = 800;   // per continuation level
    int max_level_splits = 24;  // extra levels inserted on hard descents
};

// Damped fixed-point solve of G = G_theta(psi(G)) at z1 (Im z1 > 0), warm
// started down a geometric ladder in Im(z1) from the 1/z asymptote.
// rho = 0 reduces exactly to G = G_theta(z1).  Throws BranchError on a branch
// violation and ConvergenceError when an iteration cap is exhausted.
SDState solve_sd(const SymmetricMeasure& theta_sym, double rho, std::complex<double> z1,
                 double tol, const SolverOptions& opt = {});

// Density of nu on a real grid by Stieltjes inversion at height eps:
// density[j] = max(0, -Im G(x_j + i eps) / pi).
struct LimitLaw {
    double rho = 0.0;
    std::vector<double> grid;
    std::vector<double> density;
    std::vector<std::pair<double, double>> components;  // maximal runs above gap_threshold
    std::vector<std::size_t> patched;  // isolated solver failures, linearly interpolated
};

struct DensityOptions {
    double gap_threshold = 1e-2;  // density units
    double tol = 1e-10;
    int threads = 1;
    SolverOptions solver{};
};

// Grid must be symmetric about 0.  A failed grid point is patched only when
// isolated; adjacent failures propagate the underlying error.
LimitLaw density(const SymmetricMeasure& theta_sym, double rho, const std::vector<double>& grid,
                 double eps, const DensityOptions& opt = {});

struct GapProbeOptions {
    double eps_probe = 1e-4;
    double gap_threshold = 1e-2;
    int samples = 41;
    double tol = 1e-10;
};

// True iff the density stays below gap_threshold on [-halfwidth, halfwidth].
bool gap_probe(const SymmetricMeasure& theta_sym, double rho, double halfwidth,
               const GapProbeOptions& opt = {});

// U(rho) = ∫ log|x| d nu^rho(x).
struct LogPotential {
    double rho = 0.0;
    double u = 0.0;
    double err_estimate = 0.0;
    bool flagged = false;  // widened error bar near the log singularity
};

// Real-axis route: integrates the inverted density against log|x| over the
// detected support, with geometric panel refinement toward 0 when the
// density does not vanish there.  Relative accuracy target 1e-3.
LogPotential log_potential(const SymmetricMeasure& theta_sym, double rho,
                           const DensityOptions& opt = {});

// Resolvent route: the same integral evaluated along the imaginary axis,
//   U = log Y + m2/(2Y^2) - m4/(4Y^4) + ∫_0^Y Im G(it) dt,
// with the exact moments m2 = rho^2 + m2(theta), m4 = m4(theta) +
// 4 m2(theta) rho^2 + rho^4 closing the tail.  The integrand is smooth for
// t > 0 regardless of the fine structure of nu on the real axis, which makes
// this route the right input for finite differences in rho.
LogPotential log_potential_axis(const SymmetricMeasure& theta_sym, double rho,
                                double tol = 1e-11, const SolverOptions& opt = {});

}  // namespace singring
