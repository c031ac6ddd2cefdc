#pragma once

#include <complex>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace singring {

// Radii of the annulus induced by a measure on [0, inf):
//   b^2 = ∫ x^2 dmu,   a^-2 = ∫ x^-2 dmu.
// a_defined is false (and a = 0) when mu charges {0}.
struct RingRadii {
    double a = 0.0;
    double b = 0.0;
    bool a_defined = true;
};

// Finite atomic probability measure on the real line.  Atoms are kept in
// strictly ascending location order; locations closer than the merge
// tolerance are combined and weights renormalized to sum to one.
class DiscreteMeasure {
public:
    static constexpr double kMergeTol = 1e-12;
    static constexpr double kWeightSumTol = 1e-9;

    explicit DiscreteMeasure(const std::vector<std::pair<double, double>>& atoms);
    static DiscreteMeasure from_columns(const std::vector<double>& locations,
                                        const std::vector<double>& weights);
    static DiscreteMeasure dirac(double x) { return DiscreteMeasure({{x, 1.0}}); }

    const std::vector<double>& locations() const { return x_; }
    const std::vector<double>& weights() const { return w_; }
    std::size_t size() const { return x_.size(); }

    double min_location() const { return x_.front(); }
    double max_location() const { return x_.back(); }
    double max_abs_location() const;
    bool has_atom_at_zero() const;

    // Σ w x^k; k may be negative (domain error if the measure charges {0}).
    double moment(int k) const;

    // {"atoms": [[x, w], ...]}, locations ascending.
    std::string to_json_string() const;
    static DiscreteMeasure from_json_string(const std::string& text);

private:
    std::vector<double> x_, w_;
};

// A DiscreteMeasure invariant under x -> -x: every atom (x, w) has a mirror
// (-x, w); an atom at 0 is self-paired.  Construction validates the pairing.
class SymmetricMeasure {
public:
    explicit SymmetricMeasure(DiscreteMeasure m);

    const DiscreteMeasure& measure() const { return m_; }
    std::size_t size() const { return m_.size(); }
    double max_abs_location() const { return m_.max_abs_location(); }
    double second_moment() const { return m_.moment(2); }
    double fourth_moment() const { return m_.moment(4); }
    bool is_point_mass_at_zero() const;

private:
    DiscreteMeasure m_;
};

// mu -> (mu + mu(-.))/2: atoms {(±x, w/2)}, merged at 0.
SymmetricMeasure symmetrize(const DiscreteMeasure& mu);

// G_mu(y) = Σ w_i / (y - x_i).  Requires Im y != 0, or y real strictly
// outside the convex hull of the atoms; evaluation at an atom (or inside the
// hull on the real axis) raises std::domain_error.
std::complex<double> stieltjes(const DiscreteMeasure& mu, std::complex<double> y);
std::complex<double> stieltjes(const SymmetricMeasure& mu, std::complex<double> y);

// Requires mu supported on [0, inf).
RingRadii ring_radii(const DiscreteMeasure& mu);

struct RegularityReport {
    bool norm_ok = false;     // max |atom| <= bound
    double max_atom = 0.0;
    double bound = 0.0;
    double im_g_sup = 0.0;    // sup_x |Im G_sym(x + i eta)| over the grid
    double arg_at_sup = 0.0;
    double eta = 0.0;         // n^-kappa
    double grid_step = 0.0;
    int n = 0;
    double kappa = 0.0;
};

// Desk-scale diagnostics for the norm bound and the imaginary part of the
// symmetrized Stieltjes transform at height n^-kappa, evaluated on a grid
// spanning [-M, M] with step <= n^-kappa.  Reports the computed sup; it does
// not certify any particular constant.
RegularityReport regularity_diagnostics(const DiscreteMeasure& mu, int n, double kappa,
                                        double M);

}  // namespace singring
