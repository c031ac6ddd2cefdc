#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstring>
#include <vector>

#include <Eigen/Dense>

#include "singring/ensemble.hpp"
#include "singring/errors.hpp"
#include "singring/rng.hpp"

using namespace singring;
using Cplx = std::complex<double>;

namespace {

Eigen::VectorXd quantiles_two_atom(int n) {  // (delta_1/2 + delta_2)/2
    Eigen::VectorXd t(n);
    for (int i = 0; i < n; ++i) t(i) = (2 * i < n) ? 0.5 : 2.0;
    return t;
}

Eigen::VectorXd quantiles_uniform(int n, double lo, double hi) {
    Eigen::VectorXd t(n);
    for (int i = 1; i <= n; ++i) t(i - 1) = lo + (hi - lo) * (i - 0.5) / n;
    return t;
}

// two-sample Kolmogorov distance
double ks_two_sample(std::vector<double> a, std::vector<double> b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    double ks = 0.0;
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] <= b[j])
            ++i;
        else
            ++j;
        ks = std::max(ks, std::abs(static_cast<double>(i) / a.size() -
                                   static_cast<double>(j) / b.size()));
    }
    return ks;
}

}  // namespace

TEST_CASE("haar unitary is unitary and deterministic") {
    for (std::uint64_t seed : {1ull, 99ull, 123456789ull}) {
        const Eigen::MatrixXcd u = haar_unitary(4, seed);
        const double dev = (u * u.adjoint() - Eigen::MatrixXcd::Identity(4, 4))
                               .cwiseAbs()
                               .maxCoeff();
        CHECK(dev <= 1e-10);
    }
    const Eigen::MatrixXcd u1 = haar_unitary(1, 7);
    CHECK(std::abs(std::abs(u1(0, 0)) - 1.0) < 1e-12);

    const Eigen::MatrixXcd a = haar_unitary(16, 42);
    const Eigen::MatrixXcd b = haar_unitary(16, 42);
    CHECK(std::memcmp(a.data(), b.data(), sizeof(Cplx) * 16 * 16) == 0);
    CHECK((haar_unitary(16, 43) - a).cwiseAbs().maxCoeff() > 1e-3);

    CHECK_THROWS_AS(haar_unitary(0, 1), std::invalid_argument);
}

TEST_CASE("haar moment E|tr U|^2 = 1 by Monte Carlo") {
    const int n = 50, reps = 2000;
    double acc = 0.0;
    for (int r = 0; r < reps; ++r) {
        const Eigen::MatrixXcd u = haar_unitary(n, hash64(0xA11CE, r));
        acc += std::norm(u.trace());
    }
    const double mean = acc / reps;
    CHECK(mean > 0.85);
    CHECK(mean < 1.15);
}

TEST_CASE("assemble: unitary case and zero case") {
    const int n = 200;
    const EnsembleDraw draw = assemble(Eigen::VectorXd::Ones(n), 11, 12);
    const Eigen::VectorXd sv = singular_values(draw.a);
    CHECK(std::abs(sv(0) - 1.0) <= 1e-8);
    CHECK(std::abs(sv(n - 1) - 1.0) <= 1e-8);
    const EmpiricalSpectrum sp = spectrum(draw);
    for (const auto& lam : sp.eigenvalues()) CHECK(std::abs(std::abs(lam) - 1.0) <= 1e-8);

    const EnsembleDraw zero = assemble(Eigen::VectorXd::Zero(32), 1, 2);
    CHECK(zero.a.cwiseAbs().maxCoeff() <= 1e-14);
    const EmpiricalSpectrum spz = spectrum(zero);
    for (const auto& lam : spz.eigenvalues()) CHECK(std::abs(lam) <= 1e-12);

    Eigen::VectorXd bad(2);
    bad << 1.0, -0.5;
    CHECK_THROWS_AS(assemble(bad, 1, 2), std::domain_error);
}

TEST_CASE("assemble: singular values reproduce T, draws are reproducible") {
    Rng rng(77);
    Eigen::VectorXd t(150);
    for (int i = 0; i < 150; ++i) t(i) = 2.5 * rng.uniform();
    const EnsembleDraw draw = assemble(t, 5, 6);
    Eigen::VectorXd sorted = t;
    std::sort(sorted.data(), sorted.data() + sorted.size());
    const Eigen::VectorXd sv = singular_values(draw.a);
    CHECK((sv - sorted).cwiseAbs().maxCoeff() <= 1e-8);

    const double udev = (draw.u * draw.u.adjoint() - Eigen::MatrixXcd::Identity(150, 150))
                            .cwiseAbs()
                            .maxCoeff();
    CHECK(udev <= 1e-10);

    const EnsembleDraw again = assemble(t, 5, 6);
    CHECK(std::memcmp(draw.a.data(), again.a.data(), sizeof(Cplx) * 150 * 150) == 0);
}

TEST_CASE("hermitize: block structure and spectrum") {
    EnsembleDraw d1 = assemble(Eigen::VectorXd::Zero(1), 3, 4);  // A = (0)
    const Hermitization h1 = hermitize(d1, Cplx(3.0, 0.0));
    CHECK(h1.h.rows() == 2);
    CHECK(std::abs(h1.h(0, 1) - Cplx(3.0, 0.0)) < 1e-15);
    CHECK(std::abs(h1.h(1, 0) - Cplx(3.0, 0.0)) < 1e-15);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es1(h1.h);
    CHECK(es1.eigenvalues()(0) == doctest::Approx(-3.0).epsilon(1e-12));
    CHECK(es1.eigenvalues()(1) == doctest::Approx(3.0).epsilon(1e-12));

    // spectrum(H) = ± singular values of zI - A
    Rng rng(12);
    Eigen::VectorXd t(40);
    for (int i = 0; i < 40; ++i) t(i) = 2.0 * rng.uniform();
    const EnsembleDraw draw = assemble(t, 21, 22);
    const Cplx z(0.8, -0.3);
    const Hermitization h = hermitize(draw, z);
    CHECK((h.h - h.h.adjoint()).cwiseAbs().maxCoeff() <= 1e-12);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h.h);
    const Eigen::VectorXd sv = singular_values(draw, z);
    for (int i = 0; i < 40; ++i) {
        CHECK(es.eigenvalues()(40 + i) == doctest::Approx(sv(i)).epsilon(1e-8));
        CHECK(es.eigenvalues()(39 - i) == doctest::Approx(-sv(i)).epsilon(1e-8));
    }

    // T = I, z = 0: spectrum {±1}, each with multiplicity n
    const EnsembleDraw uni = assemble(Eigen::VectorXd::Ones(100), 31, 32);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> esu(hermitize(uni, 0.0).h);
    for (int i = 0; i < 100; ++i) {
        CHECK(esu.eigenvalues()(i) == doctest::Approx(-1.0).epsilon(1e-8));
        CHECK(esu.eigenvalues()(100 + i) == doctest::Approx(1.0).epsilon(1e-8));
    }
}

TEST_CASE("empirical_nu: exact atomic cases") {
    const EnsembleDraw uni = assemble(Eigen::VectorXd::Ones(64), 41, 42);
    const SymmetricMeasure nu = empirical_nu(uni, 0.0);
    REQUIRE(nu.size() == 2);
    CHECK(nu.measure().locations()[0] == doctest::Approx(-1.0).epsilon(1e-10));
    CHECK(nu.measure().locations()[1] == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(nu.measure().weights()[0] == doctest::Approx(0.5));

    const EnsembleDraw zero = assemble(Eigen::VectorXd::Zero(64), 43, 44);
    const Cplx z(1.2, -0.9);
    const SymmetricMeasure nuz = empirical_nu(zero, z);
    REQUIRE(nuz.size() == 2);
    CHECK(nuz.measure().locations()[1] == doctest::Approx(std::abs(z)).epsilon(1e-12));
}

TEST_CASE("empirical_nu: T = I at |z| = 3 concentrates on ±[2, 4]") {
    for (int trial = 0; trial < 20; ++trial) {
        const std::uint64_t s = hash64(0xBEE, trial);
        const EnsembleDraw draw = assemble(Eigen::VectorXd::Ones(500), hash64(s, 1), hash64(s, 2));
        const SymmetricMeasure nu = empirical_nu(draw, Cplx(3.0, 0.0));
        for (const double x : nu.measure().locations()) {
            const double ax = std::abs(x);
            CHECK(ax >= 1.9);
            CHECK(ax <= 4.1);
        }
    }
}

TEST_CASE("spectrum: direct injection and determinant consistency") {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(2, 2);
    m(0, 0) = Cplx(1.0, 0.0);
    m(1, 1) = Cplx(0.0, 2.0);
    auto eigs = eigenvalues(m);
    std::sort(eigs.begin(), eigs.end(),
              [](Cplx a, Cplx b) { return std::abs(a) < std::abs(b); });
    CHECK(std::abs(eigs[0] - Cplx(1.0, 0.0)) < 1e-12);
    CHECK(std::abs(eigs[1] - Cplx(0.0, 2.0)) < 1e-12);

    const Eigen::VectorXd t = quantiles_uniform(200, 0.5, 2.0);
    const EnsembleDraw draw = assemble(t, 55, 56);
    const EmpiricalSpectrum sp = spectrum(draw);
    CHECK(std::abs(sp.log_det_gap(t)) <= 1e-6);  // |det A| = Π t_i
}

TEST_CASE("spectrum: modulus extremes approach the ring radii" * doctest::timeout(600)) {
    // max|λ| near b = sqrt(2.125) for the two-atom mixture
    const double b = std::sqrt(2.125);
    int ok_max = 0;
    for (int trial = 0; trial < 20; ++trial) {
        const std::uint64_t s = hash64(0xFACE, trial);
        const EnsembleDraw draw =
            assemble(quantiles_two_atom(1000), hash64(s, 1), hash64(s, 2));
        const double mx = spectrum(draw).max_modulus();
        if (mx >= b - 0.05 && mx <= b + 0.05) ++ok_max;
    }
    CHECK(ok_max >= 18);

    // min|λ| near a = 1 for Uniform[0.5, 2]
    int ok_min = 0;
    for (int trial = 0; trial < 20; ++trial) {
        const std::uint64_t s = hash64(0xFEED, trial);
        const EnsembleDraw draw =
            assemble(quantiles_uniform(1000, 0.5, 2.0), hash64(s, 1), hash64(s, 2));
        const double mn = spectrum(draw).min_modulus();
        if (mn >= 0.9 && mn <= 1.1) ++ok_min;
    }
    CHECK(ok_min >= 18);
}

TEST_CASE("sigma_min is 1-Lipschitz in z") {
    Rng rng(99);
    Eigen::VectorXd t(100);
    for (int i = 0; i < 100; ++i) t(i) = 0.25 + 2.0 * rng.uniform();
    const EnsembleDraw draw = assemble(t, 61, 62);
    const EmpiricalSpectrum sp = spectrum(draw);
    for (int rep = 0; rep < 20; ++rep) {
        const Cplx z1(3.0 * rng.uniform() - 1.5, 3.0 * rng.uniform() - 1.5);
        const Cplx z2 = z1 + Cplx(0.4 * rng.uniform() - 0.2, 0.4 * rng.uniform() - 0.2);
        const double d = std::abs(sp.sigma_min(z1) - sp.sigma_min(z2));
        CHECK(d <= std::abs(z1 - z2) + 1e-8);
    }
}

TEST_CASE("eigenvalue moduli are rotation covariant in law") {
    const int n = 60, seeds = 50;
    const Cplx phase = std::polar(1.0, M_PI / 3.0);
    std::vector<double> plain, rotated;
    for (int trial = 0; trial < seeds; ++trial) {
        const std::uint64_t s1 = hash64(0xCAFE, trial);
        const EnsembleDraw d1 =
            assemble(quantiles_uniform(n, 0.5, 2.0), hash64(s1, 1), hash64(s1, 2));
        for (const auto& lam : spectrum(d1).eigenvalues()) plain.push_back(std::abs(lam));

        const std::uint64_t s2 = hash64(0xCAFE, trial + seeds);
        const EnsembleDraw d2 =
            assemble(quantiles_uniform(n, 0.5, 2.0), hash64(s2, 1), hash64(s2, 2));
        for (const auto& lam : eigenvalues(Eigen::MatrixXcd(phase * d2.a)))
            rotated.push_back(std::abs(lam));
    }
    CHECK(ks_two_sample(plain, rotated) < 0.1);
}
