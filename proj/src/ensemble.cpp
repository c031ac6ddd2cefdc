#include "singring/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <mutex>
#include <stdexcept>

#include <dlfcn.h>
#include <lapacke.h>

#include "singring/errors.hpp"
#include "singring/rng.hpp"

namespace singring {

void init_linear_algebra() {
    static std::once_flag once;
    std::call_once(once, [] {
        setenv("OPENBLAS_NUM_THREADS", "1", 0);
        using SetThreads = void (*)(int);
        if (auto* fn = reinterpret_cast<SetThreads>(dlsym(RTLD_DEFAULT, "openblas_set_num_threads")))
            fn(1);
    });
}

Eigen::MatrixXcd haar_unitary(int n, std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("haar_unitary: n must be >= 1");
    Rng rng(seed);
    Eigen::MatrixXcd g(n, n);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) g(i, j) = rng.gaussian_complex();

    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
    Eigen::MatrixXcd q = qr.householderQ();
    const auto r_diag = qr.matrixQR().diagonal();
    for (int k = 0; k < n; ++k) {
        const std::complex<double> r = r_diag(k);
        const double mag = std::abs(r);
        q.col(k) *= (mag > 0.0) ? r / mag : 1.0;
    }
    return q;
}

EnsembleDraw assemble(const Eigen::VectorXd& t, std::uint64_t seed_u, std::uint64_t seed_v) {
    if (t.size() < 1) throw std::invalid_argument("assemble: empty T");
    if ((t.array() < 0.0).any())
        throw std::domain_error("assemble: T entries must be nonnegative");
    EnsembleDraw draw;
    draw.n = static_cast<int>(t.size());
    draw.seed_u = seed_u;
    draw.seed_v = seed_v;
    draw.t = t;
    draw.u = haar_unitary(draw.n, seed_u);
    draw.v = haar_unitary(draw.n, seed_v);
    draw.a = draw.u * t.asDiagonal() * draw.v;
    return draw;
}

Hermitization hermitize(const EnsembleDraw& draw, std::complex<double> z) {
    const int n = draw.n;
    Eigen::MatrixXcd m = -draw.a;
    m.diagonal().array() += z;
    Hermitization h;
    h.z = z;
    h.h = Eigen::MatrixXcd::Zero(2 * n, 2 * n);
    h.h.topRightCorner(n, n) = m;
    h.h.bottomLeftCorner(n, n) = m.adjoint();
    return h;
}

Eigen::VectorXd singular_values(const Eigen::MatrixXcd& m) {
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(m);
    return svd.singularValues().reverse();
}

Eigen::VectorXd singular_values(const EnsembleDraw& draw, std::complex<double> z) {
    Eigen::MatrixXcd m = -draw.a;
    m.diagonal().array() += z;
    return singular_values(m);
}

SymmetricMeasure empirical_nu(const EnsembleDraw& draw, std::complex<double> z) {
    const Eigen::VectorXd sigma = singular_values(draw, z);
    const double w = 0.5 / static_cast<double>(draw.n);
    std::vector<std::pair<double, double>> atoms;
    atoms.reserve(2 * draw.n);
    for (int i = 0; i < draw.n; ++i) {
        atoms.emplace_back(sigma(i), w);
        atoms.emplace_back(-sigma(i), w);
    }
    return SymmetricMeasure(DiscreteMeasure(atoms));
}

std::vector<std::complex<double>> eigenvalues(const Eigen::MatrixXcd& m) {
    init_linear_algebra();
    if (m.rows() != m.cols()) throw std::invalid_argument("eigenvalues: matrix must be square");
    const int n = static_cast<int>(m.rows());
    Eigen::MatrixXcd work = m;
    std::vector<std::complex<double>> w(n);
    const int info = LAPACKE_zgeev(
        LAPACK_COL_MAJOR, 'N', 'N', n,
        reinterpret_cast<lapack_complex_double*>(work.data()), n,
        reinterpret_cast<lapack_complex_double*>(w.data()), nullptr, 1, nullptr, 1);
    if (info < 0) throw std::invalid_argument("eigenvalues: bad argument to zgeev");
    if (info > 0)
        throw NumericError("eigenvalues: QR iteration failed to converge (zgeev info=" +
                           std::to_string(info) + ")");
    return w;
}

EmpiricalSpectrum::EmpiricalSpectrum(std::vector<std::complex<double>> eigs,
                                     std::shared_ptr<const Eigen::MatrixXcd> a)
    : eigs_(std::move(eigs)), a_(std::move(a)) {}

Eigen::VectorXd EmpiricalSpectrum::singular_values(std::complex<double> z) const {
    Eigen::MatrixXcd m = -*a_;
    m.diagonal().array() += z;
    return singring::singular_values(m);
}

double EmpiricalSpectrum::sigma_min(std::complex<double> z) const {
    return singular_values(z)(0);
}

double EmpiricalSpectrum::min_modulus() const {
    double out = std::abs(eigs_.front());
    for (const auto& l : eigs_) out = std::min(out, std::abs(l));
    return out;
}

double EmpiricalSpectrum::max_modulus() const {
    double out = 0.0;
    for (const auto& l : eigs_) out = std::max(out, std::abs(l));
    return out;
}

double EmpiricalSpectrum::log_det_gap(const Eigen::VectorXd& t) const {
    double acc = 0.0;
    for (const auto& l : eigs_) acc += std::log(std::abs(l));
    for (Eigen::Index i = 0; i < t.size(); ++i) {
        if (!(t(i) > 0.0))
            throw std::domain_error("log_det_gap: needs strictly positive T entries");
        acc -= std::log(t(i));
    }
    return acc;
}

EmpiricalSpectrum spectrum(const EnsembleDraw& draw) {
    auto a = std::make_shared<const Eigen::MatrixXcd>(draw.a);
    auto eigs = eigenvalues(*a);
    return EmpiricalSpectrum(std::move(eigs), std::move(a));
}

}  // namespace singring
