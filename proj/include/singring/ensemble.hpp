#pragma once

#include <complex>
#include <cstdint>
#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "singring/measures.hpp"

namespace singring {

// One realization of A = U diag(T) V with independently seeded Haar factors.
// T is kept as a vector; diag(T) is never materialized.
struct EnsembleDraw {
    int n = 0;
    std::uint64_t seed_u = 0;
    std::uint64_t seed_v = 0;
    Eigen::VectorXd t;
    Eigen::MatrixXcd u, v;
    Eigen::MatrixXcd a;  // = U diag(T) V
};

// Haar-distributed unitary: QR of an iid complex Gaussian matrix with the
// phases normalized so that R has positive real diagonal (plain QR of a
// Ginibre matrix is not Haar).  Deterministic in (n, seed): Gaussian entries
// are drawn column-major from the mt19937_64 stream keyed by seed.
Eigen::MatrixXcd haar_unitary(int n, std::uint64_t seed);

// Requires all entries of t nonnegative.
EnsembleDraw assemble(const Eigen::VectorXd& t, std::uint64_t seed_u, std::uint64_t seed_v);

// [[0, zI-A], [(zI-A)*, 0]]; Hermitian by construction, spectrum is the
// ± singular values of zI - A.
struct Hermitization {
    std::complex<double> z;
    Eigen::MatrixXcd h;
};
Hermitization hermitize(const EnsembleDraw& draw, std::complex<double> z);

// Ascending singular values.
Eigen::VectorXd singular_values(const Eigen::MatrixXcd& m);
Eigen::VectorXd singular_values(const EnsembleDraw& draw, std::complex<double> z);  // of zI - A

// ESD of the hermitization: weight 1/(2n) at each ±σ_i(zI - A).  Computed
// from singular values rather than by diagonalizing the 2n x 2n block.
SymmetricMeasure empirical_nu(const EnsembleDraw& draw, std::complex<double> z);

// Eigenvalues of a dense non-Hermitian matrix (LAPACK zgeev: Hessenberg
// reduction + shifted QR).  Throws NumericError when the iteration fails.
std::vector<std::complex<double>> eigenvalues(const Eigen::MatrixXcd& m);

class EmpiricalSpectrum {
public:
    EmpiricalSpectrum(std::vector<std::complex<double>> eigs,
                      std::shared_ptr<const Eigen::MatrixXcd> a);

    const std::vector<std::complex<double>>& eigenvalues() const { return eigs_; }
    Eigen::VectorXd singular_values(std::complex<double> z) const;  // of zI - A, ascending
    double sigma_min(std::complex<double> z) const;
    double min_modulus() const;
    double max_modulus() const;
    // Σ log|λ_i| - Σ log t_i; zero in exact arithmetic since |det A| = Π t_i.
    double log_det_gap(const Eigen::VectorXd& t) const;

private:
    std::vector<std::complex<double>> eigs_;
    std::shared_ptr<const Eigen::MatrixXcd> a_;
};

EmpiricalSpectrum spectrum(const EnsembleDraw& draw);

// Caps BLAS threading at one thread per call so application-level
// parallelism stays deterministic.  Idempotent; called lazily by
// eigenvalues() and explicitly by the executables.
void init_linear_algebra();

}  // namespace singring
