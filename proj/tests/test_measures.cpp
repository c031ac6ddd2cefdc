#include "doctest.h"

#include <cmath>
#include <complex>
#include <vector>

#include "singring/errors.hpp"
#include "singring/measures.hpp"
#include "singring/rng.hpp"

using namespace singring;
using Cplx = std::complex<double>;

namespace {

DiscreteMeasure two_atom_half_two() {
    return DiscreteMeasure({{0.5, 0.5}, {2.0, 0.5}});
}

DiscreteMeasure random_positive_measure(Rng& rng, int max_atoms = 8) {
    const int k = 2 + static_cast<int>(rng.uniform() * (max_atoms - 1));
    std::vector<std::pair<double, double>> atoms;
    double total = 0.0;
    for (int i = 0; i < k; ++i) {
        atoms.emplace_back(0.1 + 3.0 * rng.uniform(), 0.05 + rng.uniform());
        total += atoms.back().second;
    }
    for (auto& [x, w] : atoms) w /= total;
    return DiscreteMeasure(atoms);
}

}  // namespace

TEST_CASE("symmetrize on point masses and mixtures") {
    const SymmetricMeasure s2 = symmetrize(DiscreteMeasure::dirac(2.0));
    REQUIRE(s2.size() == 2);
    CHECK(s2.measure().locations()[0] == doctest::Approx(-2.0));
    CHECK(s2.measure().locations()[1] == doctest::Approx(2.0));
    CHECK(s2.measure().weights()[0] == doctest::Approx(0.5));

    const SymmetricMeasure s0 = symmetrize(DiscreteMeasure::dirac(0.0));
    REQUIRE(s0.size() == 1);
    CHECK(s0.measure().locations()[0] == 0.0);
    CHECK(s0.measure().weights()[0] == doctest::Approx(1.0));
    CHECK(s0.is_point_mass_at_zero());

    const SymmetricMeasure sm = symmetrize(two_atom_half_two());
    REQUIRE(sm.size() == 4);
    const std::vector<double> want_x = {-2.0, -0.5, 0.5, 2.0};
    for (int i = 0; i < 4; ++i) {
        CHECK(sm.measure().locations()[i] == doctest::Approx(want_x[i]));
        CHECK(sm.measure().weights()[i] == doctest::Approx(0.25));
    }
}

TEST_CASE("symmetrize is idempotent on symmetric inputs") {
    Rng rng(41);
    for (int rep = 0; rep < 20; ++rep) {
        const SymmetricMeasure sym = symmetrize(random_positive_measure(rng));
        const SymmetricMeasure again = symmetrize(sym.measure());
        REQUIRE(again.size() == sym.size());
        for (std::size_t i = 0; i < sym.size(); ++i) {
            CHECK(again.measure().locations()[i] ==
                  doctest::Approx(sym.measure().locations()[i]).epsilon(1e-12));
            CHECK(again.measure().weights()[i] ==
                  doctest::Approx(sym.measure().weights()[i]).epsilon(1e-12));
        }
    }
}

TEST_CASE("stieltjes transform closed values") {
    const DiscreteMeasure d1 = DiscreteMeasure::dirac(1.0);
    const Cplx g1 = stieltjes(d1, Cplx(0.0, 1.0));  // 1/(i-1)
    CHECK(std::abs(g1 - Cplx(-0.5, -0.5)) < 1e-15);

    const SymmetricMeasure s1 = symmetrize(d1);
    CHECK(std::abs(stieltjes(s1, Cplx(2.0, 0.0)) - Cplx(2.0 / 3.0, 0.0)) < 1e-15);
    CHECK(std::abs(stieltjes(s1, Cplx(0.0, 2.0)) - Cplx(0.0, -0.4)) < 1e-15);
}

TEST_CASE("stieltjes domain errors") {
    const SymmetricMeasure s1 = symmetrize(DiscreteMeasure::dirac(1.0));
    CHECK_THROWS_AS(stieltjes(s1, Cplx(1.0, 0.0)), std::domain_error);   // at an atom
    CHECK_THROWS_AS(stieltjes(s1, Cplx(0.3, 0.0)), std::domain_error);   // inside the hull
    CHECK_NOTHROW(stieltjes(s1, Cplx(1.5, 0.0)));                        // outside
}

TEST_CASE("stieltjes sign and decay") {
    Rng rng(42);
    for (int rep = 0; rep < 50; ++rep) {
        const DiscreteMeasure mu = random_positive_measure(rng);
        const double ys = 0.1 + 5.0 * rng.uniform();
        const Cplx y(4.0 * rng.uniform() - 2.0, ys);
        const Cplx g = stieltjes(mu, y);
        CHECK(g.imag() < 0.0);
        CHECK(stieltjes(mu, std::conj(y)).imag() > 0.0);

        // |y G - 1| <= max|x| / (|y| - max|x|) for |y| > 2 max|x|
        const double xm = mu.max_abs_location();
        const Cplx big(0.0, 2.0 * xm + 1.0 + 10.0 * rng.uniform());
        const Cplx gb = stieltjes(mu, big);
        CHECK(std::abs(big * gb - 1.0) <= xm / (std::abs(big) - xm) + 1e-14);
    }
}

TEST_CASE("stieltjes of a symmetric measure is purely imaginary on the imaginary axis") {
    Rng rng(43);
    for (int rep = 0; rep < 30; ++rep) {
        const SymmetricMeasure sym = symmetrize(random_positive_measure(rng));
        const Cplx g = stieltjes(sym, Cplx(0.0, 0.05 + 4.0 * rng.uniform()));
        CHECK(std::abs(g.real()) < 1e-14);
    }
}

TEST_CASE("ring radii closed values") {
    const RingRadii one = ring_radii(DiscreteMeasure::dirac(1.0));
    CHECK(one.a == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(one.b == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(one.a_defined);

    // high-precision oracle for the two-atom mixture
    const long double m2 = 0.5L * 0.25L + 0.5L * 4.0L;
    const long double mm2 = 0.5L / 0.25L + 0.5L / 4.0L;
    const RingRadii rr = ring_radii(two_atom_half_two());
    CHECK(std::abs(rr.b - static_cast<double>(std::sqrt(m2))) < 1e-12);
    CHECK(std::abs(rr.a - static_cast<double>(1.0L / std::sqrt(mm2))) < 1e-12);
    CHECK(rr.a == doctest::Approx(0.685994).epsilon(1e-6));
    CHECK(rr.b == doctest::Approx(1.457738).epsilon(1e-6));

    const RingRadii hole = ring_radii(DiscreteMeasure({{0.0, 0.5}, {1.0, 0.5}}));
    CHECK_FALSE(hole.a_defined);
    CHECK(hole.a == 0.0);
    CHECK(hole.b == doctest::Approx(std::sqrt(0.5)).epsilon(1e-14));

    CHECK_THROWS_AS(ring_radii(DiscreteMeasure({{-1.0, 0.5}, {1.0, 0.5}})), std::domain_error);
}

TEST_CASE("ring radii scaling and support bounds") {
    Rng rng(44);
    for (int rep = 0; rep < 30; ++rep) {
        const double s = 0.05 + 4.0 * rng.uniform();
        const RingRadii rr = ring_radii(DiscreteMeasure::dirac(s));
        CHECK(rr.a == doctest::Approx(s).epsilon(1e-12));
        CHECK(rr.b == doctest::Approx(s).epsilon(1e-12));

        const DiscreteMeasure mu = random_positive_measure(rng);
        const RingRadii r2 = ring_radii(mu);
        CHECK(r2.a >= mu.min_location() - 1e-12);
        CHECK(r2.a <= r2.b + 1e-12);
        CHECK(r2.b <= mu.max_location() + 1e-12);
    }
}

TEST_CASE("atom merging and weight validation") {
    const DiscreteMeasure merged({{1.0, 0.25}, {1.0 + 1e-13, 0.25}, {2.0, 0.5}});
    CHECK(merged.size() == 2);
    CHECK(merged.weights()[0] == doctest::Approx(0.5));

    CHECK_THROWS_AS(DiscreteMeasure({{1.0, 0.5}, {2.0, -0.5}}), std::invalid_argument);
    CHECK_THROWS_AS(DiscreteMeasure({{1.0, 0.5}, {2.0, 0.4}}), std::invalid_argument);
    CHECK_NOTHROW(DiscreteMeasure({{1.0, 0.5}, {2.0, 0.5 + 1e-10}}));
}

TEST_CASE("json round trip and validation") {
    const DiscreteMeasure mu = two_atom_half_two();
    const DiscreteMeasure back = DiscreteMeasure::from_json_string(mu.to_json_string());
    REQUIRE(back.size() == mu.size());
    for (std::size_t i = 0; i < mu.size(); ++i) {
        CHECK(back.locations()[i] == mu.locations()[i]);
        CHECK(back.weights()[i] == mu.weights()[i]);
    }

    CHECK_THROWS_AS(DiscreteMeasure::from_json_string("{"), ConfigError);
    CHECK_THROWS_AS(DiscreteMeasure::from_json_string(R"({"atoms": [[2,0.5],[1,0.5]]})"),
                    ConfigError);  // not ascending
    CHECK_THROWS_AS(DiscreteMeasure::from_json_string(R"({"atoms": [[1,0.6],[2,0.6]]})"),
                    ConfigError);  // bad sum
    CHECK_THROWS_AS(DiscreteMeasure::from_json_string(R"({"atoms": []})"), ConfigError);
}

TEST_CASE("regularity diagnostics on a point mass") {
    const RegularityReport rep = regularity_diagnostics(DiscreteMeasure::dirac(1.0), 100, 0.5, 2.0);
    CHECK(rep.norm_ok);
    CHECK(rep.eta == doctest::Approx(0.1).epsilon(1e-14));
    CHECK(rep.grid_step <= rep.eta + 1e-15);

    // independent evaluation of the same sup over the same grid
    double sup = 0.0;
    const int npts = static_cast<int>(std::ceil(2.0 * 2.0 / rep.eta)) + 1;
    const double step = 4.0 / (npts - 1);
    for (int i = 0; i < npts; ++i) {
        const double x = -2.0 + step * i;
        const Cplx g = 0.5 / (Cplx(x, rep.eta) - 1.0) + 0.5 / (Cplx(x, rep.eta) + 1.0);
        sup = std::max(sup, std::abs(g.imag()));
    }
    CHECK(rep.im_g_sup == doctest::Approx(sup).epsilon(1e-12));
    // Cauchy-kernel peak at the atom: height (1/2)/eta plus the far atom's tail
    CHECK(rep.im_g_sup == doctest::Approx(5.0).epsilon(5e-3));
    CHECK(std::abs(std::abs(rep.arg_at_sup) - 1.0) < 1e-12);
}

TEST_CASE("regularity diagnostics norm violation and quantile baseline") {
    CHECK_FALSE(regularity_diagnostics(DiscreteMeasure::dirac(3.0), 100, 0.5, 2.0).norm_ok);

    // 100 mid-quantile atoms of Uniform[0.5, 2]
    std::vector<std::pair<double, double>> atoms;
    for (int i = 1; i <= 100; ++i) atoms.emplace_back(0.5 + 1.5 * (i - 0.5) / 100.0, 0.01);
    const RegularityReport rep =
        regularity_diagnostics(DiscreteMeasure(atoms), 100, 0.25, 2.0);
    CHECK(rep.norm_ok);
    CHECK(std::isfinite(rep.im_g_sup));
    // regression baseline, frozen from the first verified run
    CHECK(rep.im_g_sup == doctest::Approx(0.80188552407296643).epsilon(1e-9));
}
