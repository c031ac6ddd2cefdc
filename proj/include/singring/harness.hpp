#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include <Eigen/Dense>

#include "singring/ensemble.hpp"
#include "singring/freeconv.hpp"
#include "singring/measures.hpp"
#include "singring/ringlaw.hpp"

namespace singring {

// The limiting singular spectrum: either a named family or an explicit
// atomic measure.  Continuous families are realized on the solver side by
// quantile discretization.
class ThetaSpec {
public:
    enum class Family { TwoAtom, UniformInterval, Custom };

    static ThetaSpec two_atom(double x1, double w1, double x2);
    static ThetaSpec uniform_interval(double lo, double hi);
    static ThetaSpec custom(DiscreteMeasure m);

    Family family() const { return family_; }
    std::string label() const;

    // p in (0, 1); left-continuous quantile for atomic families.
    double quantile(double p) const;
    // n mid-quantile atoms of weight 1/n (merged where equal).
    DiscreteMeasure discretize(int n) const;
    // Closed-form radii where the family allows, else radii of the atoms.
    RingRadii reference_radii() const;
    // The exact atoms for atomic families; empty for continuous ones.
    const std::optional<DiscreteMeasure>& exact_atoms() const { return atoms_; }

    std::string to_json_string() const;
    static ThetaSpec from_json_string(const std::string& text);

private:
    ThetaSpec() = default;
    Family family_ = Family::Custom;
    std::optional<DiscreteMeasure> atoms_;
    double lo_ = 0.0, hi_ = 0.0;

    friend struct ThetaSpecAccess;
};

// Deterministic coupling T_n -> Theta: entry i is the (i - 1/2)/n quantile.
Eigen::VectorXd quantile_diagonal(const ThetaSpec& theta, int n);
Eigen::VectorXd quantile_diagonal(const DiscreteMeasure& theta, int n);

struct ZProbe {
    std::complex<double> z;
    double eps = 0.1;  // ball radius
};

struct GridSpec {
    double lo = 0.0, hi = 0.0;
    int points = 0;
    bool empty() const { return points <= 0; }
};

struct ExperimentConfig {
    ThetaSpec theta = ThetaSpec::uniform_interval(0.5, 2.0);
    std::vector<int> n_list = {200};
    std::uint64_t seed = 20260810;
    int trials = 20;
    std::vector<ZProbe> z_probes = {{{0.5, 0.0}, 0.1}, {{1.15, 0.0}, 0.1}};
    GridSpec x_grid{-6.0, 6.0, 1201};  // symmetric inversion grid
    GridSpec r_grid{};                 // auto [0.8a, 1.2b] x 120 when empty
    int solver_atoms = 400;            // quantile count on the solver side
    double eps_probe = 1e-4;
    double gap_threshold = 1e-2;
    double eps_inversion = 1e-4;       // Stieltjes inversion height for CDFs
    double solver_tol = 1e-10;
    std::string out_dir = "out";
    int threads = 1;

    void validate() const;
    std::vector<double> make_x_grid() const;
    std::vector<double> make_r_grid() const;  // resolves the auto default
    SymmetricMeasure solver_theta_sym() const;

    static ExperimentConfig load(const std::string& path);  // ConfigError on trouble
    static ExperimentConfig from_json_string(const std::string& text);
    std::string to_json_string() const;
};

// Derived seeds: trial t at size n uses hash64(seed, t, n); the draw splits
// it as seed_u = hash64(., 1), seed_v = hash64(., 2).
std::uint64_t trial_seed(const ExperimentConfig& cfg, int trial, int n);
EnsembleDraw make_trial_draw(const ExperimentConfig& cfg, int trial, int n);

struct ProbeCell {
    int n = 0;
    ZProbe probe;
    int hits = 0;
    int trials = 0;
    double fraction = 0.0;
    double mean_sigma_min = 0.0;      // diagnostics on the minimal singular value
    double mean_log_sigma_sq = 0.0;   // mean of (log sigma_min)^2
};

struct ExtremeRow {
    int n = 0;
    int trials = 0;
    double mean_min = 0.0, se_min = 0.0;
    double mean_max = 0.0, se_max = 0.0;
    double a_n = 0.0, b_n = 0.0;  // radii of the realized T_n
    bool a_defined = true;
};

struct SupportReport {
    std::vector<ProbeCell> probes;
    std::vector<ExtremeRow> extremes;
    RingRadii reference;
};

// Eigenvalue-in-a-ball fractions per (n, probe) plus modulus extremes.
SupportReport run_support_experiment(const ExperimentConfig& cfg);

// Modulus extremes per n, paired against (a, b).
std::vector<ExtremeRow> run_sticking_experiment(const ExperimentConfig& cfg);

struct LawCompareRow {
    std::complex<double> z;
    double rho = 0.0;
    int n = 0;
    int trials = 0;
    double ks = 0.0;
};

// Kolmogorov distance between the solved CDF and the trial-averaged
// empirical CDF of the hermitized spectrum, both smoothed at eps_inversion.
std::vector<LawCompareRow> run_law_comparison(const ExperimentConfig& cfg);

// Smoothed-CDF Kolmogorov distance of a pooled ± singular value sample
// against a solved density law, evaluated on the law's grid.
double ks_distance_smoothed(const std::vector<double>& sample, const LimitLaw& law, double eps);

// --- persistence -----------------------------------------------------------
// CSV cells are written with up-to-17-significant-digit round-trip formatting
// so reruns compare byte for byte.
std::string format_cell(double v);
void ensure_directory(const std::string& path);

void write_eigenvalue_csv(const std::string& path,
                          const std::vector<std::tuple<std::uint64_t, int, std::complex<double>>>& rows);
void write_sigma_min_csv(
    const std::string& path,
    const std::vector<std::tuple<std::uint64_t, int, std::complex<double>, double>>& rows);
void write_density_csv(const std::string& path, const LimitLaw& law);
void write_log_potential_csv(const std::string& path, const std::vector<LogPotential>& rows);
void write_ring_density_csv(const std::string& path, const RingDensity& rd);
void write_support_csvs(const std::string& dir, const SupportReport& rep);
void write_support_json(const std::string& path, const SupportReport& rep);
void write_sticking_csv(const std::string& path, const std::vector<ExtremeRow>& rows,
                        const RingRadii& reference);
void write_law_compare_csv(const std::string& path, const std::vector<LawCompareRow>& rows);

}  // namespace singring
