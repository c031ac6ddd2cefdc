#pragma once

#include <Eigen/Dense>

namespace singring {

// Power-norm bound for an R-diagonal contraction: ||A^p|| <= (1+p) C s^(p-1)
// with s = ||A||_2.  The constant C is an input, default 1.
double power_norm_bound(int p, double s, double c = 1.0);

// Majorizing series F(gamma) = Σ_{n>=1} gamma^n (1+n) s^(n-1), in closed form
// gamma (1/(1-gamma s)^2 + 1/(1-gamma s)).  Requires 0 < gamma s < 1.
double f_gamma(double gamma, double s);

// Largest perturbation size eta with C c0 eta gamma (1 + F(gamma)) = 1/4 at
// gamma = 1/(s + eps); the defining inequality (< 1/2) then holds with a
// factor-2 safety margin.
double eta_bound(double eps, double c0, double s, double c = 1.0);

struct RDiagonalBoundParams {
    double c0 = 0.0;     // operator-norm bound on A and B
    double s = 0.0;      // ||A||_2
    double eps = 0.0;
    double c = 1.0;
    double gamma = 0.0;  // 1/(s + eps)
    double f = 0.0;      // F(gamma)
    double eta = 0.0;
};

RDiagonalBoundParams bound_params(double eps, double c0, double s, double c = 1.0);

// Operator norm by power iteration on M*M (30 steps, 1e-8 Rayleigh tol).
double operator_norm(const Eigen::MatrixXcd& m, int max_steps = 30, double tol = 1e-8);

// Spectral radius estimate min_{k in [k_max/2, k_max]} ||A^k||^(1/k); powers
// are rescaled by exact powers of two to avoid overflow, with the scale
// folded back in log space.  Requires k_max >= 8.
double spectral_radius_estimate(const Eigen::MatrixXcd& a, int k_max);

}  // namespace singring
