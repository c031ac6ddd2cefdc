#include "singring/rdiagonal.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "singring/errors.hpp"
#include "singring/rng.hpp"

namespace singring {

double power_norm_bound(int p, double s, double c) {
    if (p < 1) throw std::invalid_argument("power_norm_bound: p must be >= 1");
    if (!(s > 0.0)) throw std::invalid_argument("power_norm_bound: s must be > 0");
    return (1.0 + p) * c * std::pow(s, p - 1);
}

double f_gamma(double gamma, double s) {
    const double q = gamma * s;
    if (!(gamma > 0.0) || !(q < 1.0))
        throw std::domain_error("f_gamma: series diverges unless 0 < gamma*s < 1");
    const double d = 1.0 - q;
    return gamma * (1.0 / (d * d) + 1.0 / d);
}

double eta_bound(double eps, double c0, double s, double c) {
    return bound_params(eps, c0, s, c).eta;
}

RDiagonalBoundParams bound_params(double eps, double c0, double s, double c) {
    if (!(eps > 0.0 && c0 > 0.0 && s > 0.0 && c > 0.0))
        throw std::invalid_argument("bound_params: eps, c0, s, C must all be > 0");
    RDiagonalBoundParams p;
    p.eps = eps;
    p.c0 = c0;
    p.s = s;
    p.c = c;
    p.gamma = 1.0 / (s + eps);  // gamma*s < 1 automatically
    p.f = f_gamma(p.gamma, s);
    p.eta = 1.0 / (4.0 * c * c0 * p.gamma * (1.0 + p.f));
    return p;
}

double operator_norm(const Eigen::MatrixXcd& m, int max_steps, double tol) {
    const Eigen::Index n = m.cols();
    if (n == 0 || m.rows() == 0) return 0.0;
    Rng rng(hash64(0x0b5e55ed, static_cast<std::uint64_t>(n)));
    Eigen::VectorXcd v(n);
    for (Eigen::Index i = 0; i < n; ++i) v(i) = rng.gaussian_complex();
    double nv = v.norm();
    if (nv == 0.0) return 0.0;
    v /= nv;

    double sigma = 0.0;
    for (int step = 0; step < max_steps; ++step) {
        const Eigen::VectorXcd w = m * v;
        const double nw = w.norm();
        if (nw == 0.0) return 0.0;
        const double sigma_new = nw;
        Eigen::VectorXcd u = m.adjoint() * w;
        const double nu = u.norm();
        if (nu == 0.0) return sigma_new;
        v = u / nu;
        if (step > 0 && std::abs(sigma_new - sigma) <= tol * sigma_new) return sigma_new;
        sigma = sigma_new;
    }
    return sigma;
}

double spectral_radius_estimate(const Eigen::MatrixXcd& a, int k_max) {
    if (k_max < 8) throw std::invalid_argument("spectral_radius_estimate: k_max must be >= 8");
    if (a.rows() != a.cols())
        throw std::invalid_argument("spectral_radius_estimate: matrix must be square");

    const int k_lo = (k_max + 1) / 2;
    Eigen::MatrixXcd power = a;
    double log_scale = 0.0;  // power-of-two rescaling, folded back exactly
    double best = std::numeric_limits<double>::infinity();

    for (int k = 1; k <= k_max; ++k) {
        if (k > 1) {
            power = power * a;
            const double peak = power.cwiseAbs().maxCoeff();
            if (peak > 0.0 && (peak > 0x1.0p+256 || peak < 0x1.0p-256)) {
                const double factor = std::exp2(std::round(std::log2(peak)));
                power /= factor;
                log_scale += std::log(factor);
            }
            if (peak == 0.0) return 0.0;  // nilpotent
        }
        if (k < k_lo) continue;
        const double nrm = operator_norm(power);
        if (nrm == 0.0) return 0.0;
        const double est = std::exp((std::log(nrm) + log_scale) / k);
        best = std::min(best, est);
    }
    return best;
}

}  // namespace singring
