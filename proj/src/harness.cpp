#include "singring/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "json.hpp"
#include "singring/parallel.hpp"
#include "singring/rng.hpp"

namespace singring {

namespace {

constexpr double kPi = 3.14159265358979323846;

nlohmann::json parse_json(const std::string& text, const char* what) {
    try {
        return nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(std::string(what) + ": invalid JSON: " + e.what());
    }
}

DiscreteMeasure atoms_from_json(const nlohmann::json& arr, const char* what) {
    if (!arr.is_array() || arr.empty())
        throw ConfigError(std::string(what) + ": expected a nonempty atoms array");
    std::vector<std::pair<double, double>> atoms;
    for (const auto& entry : arr) {
        if (!entry.is_array() || entry.size() != 2)
            throw ConfigError(std::string(what) + ": each atom must be [location, weight]");
        atoms.emplace_back(entry[0].get<double>(), entry[1].get<double>());
    }
    try {
        return DiscreteMeasure(atoms);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string(what) + ": " + e.what());
    }
}

nlohmann::json atoms_to_json(const DiscreteMeasure& m) {
    nlohmann::json arr = nlohmann::json::array();
    for (std::size_t i = 0; i < m.size(); ++i)
        arr.push_back({m.locations()[i], m.weights()[i]});
    return arr;
}

}  // namespace

ThetaSpec ThetaSpec::two_atom(double x1, double w1, double x2) {
    if (!(w1 > 0.0 && w1 < 1.0)) throw ConfigError("theta: two-atom weight must be in (0,1)");
    ThetaSpec spec;
    spec.family_ = Family::TwoAtom;
    const std::vector<std::pair<double, double>> atoms = {{x1, w1}, {x2, 1.0 - w1}};
    spec.atoms_ = DiscreteMeasure(atoms);
    return spec;
}

ThetaSpec ThetaSpec::uniform_interval(double lo, double hi) {
    if (!(lo < hi)) throw ConfigError("theta: uniform interval needs lo < hi");
    ThetaSpec spec;
    spec.family_ = Family::UniformInterval;
    spec.lo_ = lo;
    spec.hi_ = hi;
    return spec;
}

ThetaSpec ThetaSpec::custom(DiscreteMeasure m) {
    ThetaSpec spec;
    spec.family_ = Family::Custom;
    spec.atoms_ = std::move(m);
    return spec;
}

std::string ThetaSpec::label() const {
    char buf[64];
    switch (family_) {
        case Family::TwoAtom:
            return "two-atom";
        case Family::UniformInterval:
            std::snprintf(buf, sizeof buf, "uniform[%g,%g]", lo_, hi_);
            return buf;
        case Family::Custom:
            return "custom";
    }
    return "custom";
}

double ThetaSpec::quantile(double p) const {
    if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("quantile: p must be in (0,1)");
    if (family_ == Family::UniformInterval) return lo_ + p * (hi_ - lo_);
    const auto& x = atoms_->locations();
    const auto& w = atoms_->weights();
    double cum = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        cum += w[i];
        if (p <= cum + 1e-12) return x[i];
    }
    return x.back();
}

DiscreteMeasure ThetaSpec::discretize(int n) const {
    if (n < 1) throw std::invalid_argument("discretize: n must be >= 1");
    std::vector<std::pair<double, double>> atoms;
    atoms.reserve(n);
    const double w = 1.0 / n;
    for (int i = 1; i <= n; ++i) atoms.emplace_back(quantile((i - 0.5) / n), w);
    return DiscreteMeasure(atoms);
}

RingRadii ThetaSpec::reference_radii() const {
    if (family_ == Family::UniformInterval) {
        RingRadii rr;
        rr.b = std::sqrt((hi_ * hi_ * hi_ - lo_ * lo_ * lo_) / (3.0 * (hi_ - lo_)));
        if (lo_ > 0.0) {
            rr.a = std::sqrt(lo_ * hi_);  // 1/sqrt( (1/lo - 1/hi)/(hi - lo) )
        } else {
            rr.a = 0.0;
            rr.a_defined = false;
        }
        return rr;
    }
    return ring_radii(*atoms_);
}

std::string ThetaSpec::to_json_string() const {
    nlohmann::json doc;
    switch (family_) {
        case Family::TwoAtom:
            doc["family"] = "two-atom";
            doc["atoms"] = atoms_to_json(*atoms_);
            break;
        case Family::UniformInterval:
            doc["family"] = "uniform-interval";
            doc["lo"] = lo_;
            doc["hi"] = hi_;
            break;
        case Family::Custom:
            doc["family"] = "custom";
            doc["atoms"] = atoms_to_json(*atoms_);
            break;
    }
    return doc.dump();
}

ThetaSpec ThetaSpec::from_json_string(const std::string& text) {
    const nlohmann::json doc = parse_json(text, "theta");
    if (!doc.is_object() || !doc.contains("family"))
        throw ConfigError("theta: expected an object with a \"family\" key");
    const std::string family = doc["family"].get<std::string>();
    if (family == "uniform-interval") {
        if (!doc.contains("lo") || !doc.contains("hi"))
            throw ConfigError("theta: uniform-interval needs lo and hi");
        return uniform_interval(doc["lo"].get<double>(), doc["hi"].get<double>());
    }
    if (family == "two-atom") {
        const DiscreteMeasure m = atoms_from_json(doc.value("atoms", nlohmann::json()), "theta");
        if (m.size() != 2) throw ConfigError("theta: two-atom expects exactly two atoms");
        return two_atom(m.locations()[0], m.weights()[0], m.locations()[1]);
    }
    if (family == "custom")
        return custom(atoms_from_json(doc.value("atoms", nlohmann::json()), "theta"));
    throw ConfigError("theta: unknown family \"" + family + "\"");
}

Eigen::VectorXd quantile_diagonal(const ThetaSpec& theta, int n) {
    if (n < 1) throw std::invalid_argument("quantile_diagonal: n must be >= 1");
    Eigen::VectorXd t(n);
    for (int i = 1; i <= n; ++i) t(i - 1) = theta.quantile((i - 0.5) / n);
    return t;
}

Eigen::VectorXd quantile_diagonal(const DiscreteMeasure& theta, int n) {
    return quantile_diagonal(ThetaSpec::custom(theta), n);
}

void ExperimentConfig::validate() const {
    if (n_list.empty()) throw ConfigError("config: n_list must not be empty");
    for (std::size_t i = 0; i < n_list.size(); ++i) {
        if (n_list[i] < 1) throw ConfigError("config: n_list entries must be >= 1");
        if (i > 0 && n_list[i] <= n_list[i - 1])
            throw ConfigError("config: n_list must be strictly ascending");
    }
    if (trials < 1) throw ConfigError("config: trials must be >= 1");
    for (const auto& probe : z_probes)
        if (!(probe.eps > 0.0)) throw ConfigError("config: probe eps must be > 0");
    if (x_grid.points < 3 || !(x_grid.hi > 0.0) || x_grid.lo != -x_grid.hi)
        throw ConfigError("config: x_grid must be symmetric (lo = -hi) with >= 3 points");
    if (!r_grid.empty() && (!(r_grid.lo > 0.0) || !(r_grid.hi > r_grid.lo) || r_grid.points < 2))
        throw ConfigError("config: r_grid must satisfy 0 < lo < hi with >= 2 points");
    if (solver_atoms < 1) throw ConfigError("config: solver_atoms must be >= 1");
    if (!(eps_probe > 0.0) || !(gap_threshold > 0.0) || !(eps_inversion > 0.0) ||
        !(solver_tol > 0.0))
        throw ConfigError("config: tolerances must be > 0");
    if (threads < 1) throw ConfigError("config: threads must be >= 1");
}

std::vector<double> ExperimentConfig::make_x_grid() const {
    const int m = x_grid.points;
    std::vector<double> grid(m);
    for (int i = 0; 2 * i < m; ++i) {
        const double t = x_grid.hi * (1.0 - 2.0 * i / (m - 1.0));
        grid[i] = -t;
        grid[m - 1 - i] = t;
    }
    if (m % 2 == 1) grid[m / 2] = 0.0;
    return grid;
}

std::vector<double> ExperimentConfig::make_r_grid() const {
    GridSpec spec = r_grid;
    if (spec.empty()) {
        const RingRadii rr = theta.reference_radii();
        spec.lo = rr.a_defined && rr.a > 0.0 ? 0.8 * rr.a : rr.b / 100.0;
        spec.hi = 1.2 * rr.b;
        spec.points = 120;
    }
    std::vector<double> grid(spec.points);
    for (int i = 0; i < spec.points; ++i)
        grid[i] = spec.lo + (spec.hi - spec.lo) * i / (spec.points - 1.0);
    return grid;
}

SymmetricMeasure ExperimentConfig::solver_theta_sym() const {
    if (theta.exact_atoms()) return symmetrize(*theta.exact_atoms());
    return symmetrize(theta.discretize(solver_atoms));
}

ExperimentConfig ExperimentConfig::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return from_json_string(text);
}

ExperimentConfig ExperimentConfig::from_json_string(const std::string& text) {
    const nlohmann::json doc = parse_json(text, "config");
    if (!doc.is_object()) throw ConfigError("config: expected a JSON object");
    ExperimentConfig cfg;
    static const char* known[] = {"theta",       "n_list",        "seed",          "trials",
                                  "z_probes",    "x_grid",        "r_grid",        "solver_atoms",
                                  "eps_probe",   "gap_threshold", "eps_inversion", "solver_tol",
                                  "out_dir",     "threads"};
    for (const auto& [key, _] : doc.items()) {
        if (std::find_if(std::begin(known), std::end(known),
                         [&](const char* k) { return key == k; }) == std::end(known))
            throw ConfigError("config: unknown key \"" + key + "\"");
    }
    if (doc.contains("theta")) cfg.theta = ThetaSpec::from_json_string(doc["theta"].dump());
    if (doc.contains("n_list")) cfg.n_list = doc["n_list"].get<std::vector<int>>();
    if (doc.contains("seed")) cfg.seed = doc["seed"].get<std::uint64_t>();
    if (doc.contains("trials")) cfg.trials = doc["trials"].get<int>();
    if (doc.contains("z_probes")) {
        cfg.z_probes.clear();
        for (const auto& p : doc["z_probes"]) {
            ZProbe probe;
            probe.z = {p.value("re", 0.0), p.value("im", 0.0)};
            probe.eps = p.value("eps", 0.1);
            cfg.z_probes.push_back(probe);
        }
    }
    const auto read_grid = [&](const char* key, GridSpec* out) {
        if (!doc.contains(key)) return;
        const auto& g = doc[key];
        out->lo = g.value("lo", 0.0);
        out->hi = g.value("hi", 0.0);
        out->points = g.value("points", 0);
    };
    read_grid("x_grid", &cfg.x_grid);
    read_grid("r_grid", &cfg.r_grid);
    if (doc.contains("solver_atoms")) cfg.solver_atoms = doc["solver_atoms"].get<int>();
    if (doc.contains("eps_probe")) cfg.eps_probe = doc["eps_probe"].get<double>();
    if (doc.contains("gap_threshold")) cfg.gap_threshold = doc["gap_threshold"].get<double>();
    if (doc.contains("eps_inversion")) cfg.eps_inversion = doc["eps_inversion"].get<double>();
    if (doc.contains("solver_tol")) cfg.solver_tol = doc["solver_tol"].get<double>();
    if (doc.contains("out_dir")) cfg.out_dir = doc["out_dir"].get<std::string>();
    if (doc.contains("threads")) cfg.threads = doc["threads"].get<int>();
    cfg.validate();
    return cfg;
}

std::string ExperimentConfig::to_json_string() const {
    nlohmann::json probes = nlohmann::json::array();
    for (const auto& p : z_probes)
        probes.push_back({{"re", p.z.real()}, {"im", p.z.imag()}, {"eps", p.eps}});
    nlohmann::json doc{
        {"theta", nlohmann::json::parse(theta.to_json_string())},
        {"n_list", n_list},
        {"seed", seed},
        {"trials", trials},
        {"z_probes", probes},
        {"x_grid", {{"lo", x_grid.lo}, {"hi", x_grid.hi}, {"points", x_grid.points}}},
        {"solver_atoms", solver_atoms},
        {"eps_probe", eps_probe},
        {"gap_threshold", gap_threshold},
        {"eps_inversion", eps_inversion},
        {"solver_tol", solver_tol},
        {"out_dir", out_dir},
        {"threads", threads}};
    if (!r_grid.empty())
        doc["r_grid"] = {{"lo", r_grid.lo}, {"hi", r_grid.hi}, {"points", r_grid.points}};
    return doc.dump(2);
}

std::uint64_t trial_seed(const ExperimentConfig& cfg, int trial, int n) {
    return hash64(cfg.seed, static_cast<std::uint64_t>(trial), static_cast<std::uint64_t>(n));
}

EnsembleDraw make_trial_draw(const ExperimentConfig& cfg, int trial, int n) {
    const Eigen::VectorXd t = quantile_diagonal(cfg.theta, n);
    const std::uint64_t s = trial_seed(cfg, trial, n);
    return assemble(t, hash64(s, 1), hash64(s, 2));
}

namespace {

RingRadii realized_radii(const Eigen::VectorXd& t) {
    RingRadii rr;
    rr.b = std::sqrt(t.array().square().mean());
    if ((t.array() <= 0.0).any()) {
        rr.a = 0.0;
        rr.a_defined = false;
    } else {
        rr.a = 1.0 / std::sqrt(t.array().square().inverse().mean());
    }
    return rr;
}

struct TrialStats {
    double min_mod = 0.0, max_mod = 0.0;
    std::vector<char> hits;
    std::vector<double> sigma_min;
};

void fold_extremes(const std::vector<TrialStats>& stats, ExtremeRow* row) {
    const int t = static_cast<int>(stats.size());
    row->trials = t;
    double smin = 0.0, smax = 0.0;
    for (const auto& s : stats) {
        smin += s.min_mod;
        smax += s.max_mod;
    }
    row->mean_min = smin / t;
    row->mean_max = smax / t;
    if (t > 1) {
        double vmin = 0.0, vmax = 0.0;
        for (const auto& s : stats) {
            vmin += (s.min_mod - row->mean_min) * (s.min_mod - row->mean_min);
            vmax += (s.max_mod - row->mean_max) * (s.max_mod - row->mean_max);
        }
        row->se_min = std::sqrt(vmin / (t - 1)) / std::sqrt(static_cast<double>(t));
        row->se_max = std::sqrt(vmax / (t - 1)) / std::sqrt(static_cast<double>(t));
    }
}

}  // namespace

SupportReport run_support_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    init_linear_algebra();
    SupportReport rep;
    rep.reference = cfg.theta.reference_radii();
    for (const int n : cfg.n_list) {
        const Eigen::VectorXd t = quantile_diagonal(cfg.theta, n);
        const RingRadii rr_n = realized_radii(t);
        std::vector<TrialStats> stats(cfg.trials);
        parallel_for(cfg.trials, cfg.threads, [&](std::size_t trial) {
            const EnsembleDraw draw = make_trial_draw(cfg, static_cast<int>(trial), n);
            const EmpiricalSpectrum sp = spectrum(draw);
            TrialStats st;
            st.min_mod = sp.min_modulus();
            st.max_mod = sp.max_modulus();
            st.hits.resize(cfg.z_probes.size());
            st.sigma_min.resize(cfg.z_probes.size());
            for (std::size_t p = 0; p < cfg.z_probes.size(); ++p) {
                const auto& probe = cfg.z_probes[p];
                double dist = std::numeric_limits<double>::infinity();
                for (const auto& lam : sp.eigenvalues())
                    dist = std::min(dist, std::abs(lam - probe.z));
                st.hits[p] = dist < probe.eps ? 1 : 0;
                st.sigma_min[p] = sp.sigma_min(probe.z);
            }
            stats[trial] = std::move(st);
        });

        ExtremeRow row;
        row.n = n;
        row.a_n = rr_n.a;
        row.b_n = rr_n.b;
        row.a_defined = rr_n.a_defined;
        fold_extremes(stats, &row);
        rep.extremes.push_back(row);

        for (std::size_t p = 0; p < cfg.z_probes.size(); ++p) {
            ProbeCell cell;
            cell.n = n;
            cell.probe = cfg.z_probes[p];
            cell.trials = cfg.trials;
            for (const auto& st : stats) {
                cell.hits += st.hits[p];
                const double s = std::max(st.sigma_min[p], 1e-300);
                cell.mean_sigma_min += s;
                cell.mean_log_sigma_sq += std::log(s) * std::log(s);
            }
            cell.fraction = static_cast<double>(cell.hits) / cfg.trials;
            cell.mean_sigma_min /= cfg.trials;
            cell.mean_log_sigma_sq /= cfg.trials;
            rep.probes.push_back(cell);
        }
    }
    return rep;
}

std::vector<ExtremeRow> run_sticking_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    init_linear_algebra();
    std::vector<ExtremeRow> rows;
    for (const int n : cfg.n_list) {
        const Eigen::VectorXd t = quantile_diagonal(cfg.theta, n);
        const RingRadii rr_n = realized_radii(t);
        std::vector<TrialStats> stats(cfg.trials);
        parallel_for(cfg.trials, cfg.threads, [&](std::size_t trial) {
            const EnsembleDraw draw = make_trial_draw(cfg, static_cast<int>(trial), n);
            const EmpiricalSpectrum sp = spectrum(draw);
            stats[trial].min_mod = sp.min_modulus();
            stats[trial].max_mod = sp.max_modulus();
        });
        ExtremeRow row;
        row.n = n;
        row.a_n = rr_n.a;
        row.b_n = rr_n.b;
        row.a_defined = rr_n.a_defined;
        fold_extremes(stats, &row);
        rows.push_back(row);
    }
    return rows;
}

double ks_distance_smoothed(const std::vector<double>& sample, const LimitLaw& law, double eps) {
    if (sample.empty() || law.grid.size() < 2)
        throw std::invalid_argument("ks_distance_smoothed: empty inputs");
    const std::size_t m = law.grid.size();
    std::vector<double> cdf(m, 0.0);
    for (std::size_t j = 1; j < m; ++j)
        cdf[j] = cdf[j - 1] + 0.5 * (law.density[j] + law.density[j - 1]) *
                                  (law.grid[j] - law.grid[j - 1]);
    const double total = cdf.back();
    if (!(total > 0.0)) throw NumericError("ks_distance_smoothed: solved density has no mass");
    double ks = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
        double fe = 0.0;
        for (const double s : sample) fe += 0.5 + std::atan((law.grid[j] - s) / eps) / kPi;
        fe /= static_cast<double>(sample.size());
        ks = std::max(ks, std::abs(cdf[j] / total - fe));
    }
    return ks;
}

std::vector<LawCompareRow> run_law_comparison(const ExperimentConfig& cfg) {
    cfg.validate();
    init_linear_algebra();
    const SymmetricMeasure theta_sym = cfg.solver_theta_sym();
    const std::vector<double> xgrid = cfg.make_x_grid();
    std::vector<LawCompareRow> rows;
    for (const auto& probe : cfg.z_probes) {
        const double rho = std::abs(probe.z);
        DensityOptions dopt;
        dopt.gap_threshold = cfg.gap_threshold;
        dopt.tol = cfg.solver_tol;
        dopt.threads = cfg.threads;
        const LimitLaw law = density(theta_sym, rho, xgrid, cfg.eps_inversion, dopt);
        for (const int n : cfg.n_list) {
            std::vector<std::vector<double>> per_trial(cfg.trials);
            parallel_for(cfg.trials, cfg.threads, [&](std::size_t trial) {
                const EnsembleDraw draw = make_trial_draw(cfg, static_cast<int>(trial), n);
                const Eigen::VectorXd sigma = singular_values(draw, probe.z);
                auto& out = per_trial[trial];
                out.reserve(2 * n);
                for (int i = 0; i < n; ++i) {
                    out.push_back(sigma(i));
                    out.push_back(-sigma(i));
                }
            });
            std::vector<double> pooled;
            pooled.reserve(static_cast<std::size_t>(2 * n) * cfg.trials);
            for (const auto& v : per_trial) pooled.insert(pooled.end(), v.begin(), v.end());
            LawCompareRow row;
            row.z = probe.z;
            row.rho = rho;
            row.n = n;
            row.trials = cfg.trials;
            row.ks = ks_distance_smoothed(pooled, law, cfg.eps_inversion);
            rows.push_back(row);
        }
    }
    return rows;
}

// --- persistence -------------------------------------------------------------

std::string format_cell(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void ensure_directory(const std::string& path) {
    std::error_code ec;
    std::filesystem::create_directories(path, ec);
    if (ec) throw ConfigError("cannot create output directory " + path + ": " + ec.message());
}

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary);  // fixed newlines across platforms
    if (!out) throw ConfigError("cannot open " + path + " for writing");
    return out;
}

}  // namespace

void write_eigenvalue_csv(
    const std::string& path,
    const std::vector<std::tuple<std::uint64_t, int, std::complex<double>>>& rows) {
    auto out = open_out(path);
    out << "seed,n,re,im\n";
    for (const auto& [seed, n, lam] : rows)
        out << seed << ',' << n << ',' << format_cell(lam.real()) << ','
            << format_cell(lam.imag()) << '\n';
}

void write_sigma_min_csv(
    const std::string& path,
    const std::vector<std::tuple<std::uint64_t, int, std::complex<double>, double>>& rows) {
    auto out = open_out(path);
    out << "seed,n,z_re,z_im,sigma_min\n";
    for (const auto& [seed, n, z, sigma] : rows)
        out << seed << ',' << n << ',' << format_cell(z.real()) << ',' << format_cell(z.imag())
            << ',' << format_cell(sigma) << '\n';
}

void write_density_csv(const std::string& path, const LimitLaw& law) {
    auto out = open_out(path);
    out << "x,density\n";
    for (std::size_t j = 0; j < law.grid.size(); ++j)
        out << format_cell(law.grid[j]) << ',' << format_cell(law.density[j]) << '\n';
}

void write_log_potential_csv(const std::string& path, const std::vector<LogPotential>& rows) {
    auto out = open_out(path);
    out << "rho,U,err_estimate\n";
    for (const auto& lp : rows)
        out << format_cell(lp.rho) << ',' << format_cell(lp.u) << ','
            << format_cell(lp.err_estimate) << '\n';
}

void write_ring_density_csv(const std::string& path, const RingDensity& rd) {
    auto out = open_out(path);
    out << "r,U,density\n";
    for (std::size_t j = 0; j < rd.radii.size(); ++j)
        out << format_cell(rd.radii[j]) << ',' << format_cell(rd.potential[j]) << ','
            << format_cell(rd.density[j]) << '\n';
}

void write_support_csvs(const std::string& dir, const SupportReport& rep) {
    {
        auto out = open_out(dir + "/support_probes.csv");
        out << "n,z_re,z_im,eps,hits,trials,fraction,mean_sigma_min,mean_log_sigma_min_sq\n";
        for (const auto& c : rep.probes)
            out << c.n << ',' << format_cell(c.probe.z.real()) << ','
                << format_cell(c.probe.z.imag()) << ',' << format_cell(c.probe.eps) << ','
                << c.hits << ',' << c.trials << ',' << format_cell(c.fraction) << ','
                << format_cell(c.mean_sigma_min) << ',' << format_cell(c.mean_log_sigma_sq)
                << '\n';
    }
    {
        auto out = open_out(dir + "/support_extremes.csv");
        out << "n,trials,mean_min_mod,se_min,mean_max_mod,se_max,a_n,b_n,a_ref,b_ref\n";
        for (const auto& r : rep.extremes)
            out << r.n << ',' << r.trials << ',' << format_cell(r.mean_min) << ','
                << format_cell(r.se_min) << ',' << format_cell(r.mean_max) << ','
                << format_cell(r.se_max) << ',' << format_cell(r.a_n) << ','
                << format_cell(r.b_n) << ',' << format_cell(rep.reference.a) << ','
                << format_cell(rep.reference.b) << '\n';
    }
}

void write_support_json(const std::string& path, const SupportReport& rep) {
    nlohmann::json probes = nlohmann::json::array();
    for (const auto& c : rep.probes)
        probes.push_back({{"n", c.n},
                          {"z_re", c.probe.z.real()},
                          {"z_im", c.probe.z.imag()},
                          {"eps", c.probe.eps},
                          {"hits", c.hits},
                          {"trials", c.trials},
                          {"fraction", c.fraction},
                          {"mean_sigma_min", c.mean_sigma_min},
                          {"mean_log_sigma_min_sq", c.mean_log_sigma_sq}});
    nlohmann::json extremes = nlohmann::json::array();
    for (const auto& r : rep.extremes)
        extremes.push_back({{"n", r.n},
                            {"trials", r.trials},
                            {"mean_min_mod", r.mean_min},
                            {"se_min", r.se_min},
                            {"mean_max_mod", r.mean_max},
                            {"se_max", r.se_max},
                            {"a_n", r.a_n},
                            {"b_n", r.b_n},
                            {"a_defined", r.a_defined}});
    nlohmann::json doc{{"reference",
                        {{"a", rep.reference.a},
                         {"b", rep.reference.b},
                         {"a_defined", rep.reference.a_defined}}},
                       {"probes", probes},
                       {"extremes", extremes}};
    auto out = open_out(path);
    out << doc.dump(2) << '\n';
}

void write_sticking_csv(const std::string& path, const std::vector<ExtremeRow>& rows,
                        const RingRadii& reference) {
    auto out = open_out(path);
    out << "n,trials,mean_min_mod,se_min,mean_max_mod,se_max,a_n,b_n,a_ref,b_ref,a_applicable\n";
    for (const auto& r : rows)
        out << r.n << ',' << r.trials << ',' << format_cell(r.mean_min) << ','
            << format_cell(r.se_min) << ',' << format_cell(r.mean_max) << ','
            << format_cell(r.se_max) << ',' << format_cell(r.a_n) << ',' << format_cell(r.b_n)
            << ',' << format_cell(reference.a) << ',' << format_cell(reference.b) << ','
            << (r.a_defined && reference.a_defined ? 1 : 0) << '\n';
}

void write_law_compare_csv(const std::string& path, const std::vector<LawCompareRow>& rows) {
    auto out = open_out(path);
    out << "z_re,z_im,rho,n,trials,ks\n";
    for (const auto& r : rows)
        out << format_cell(r.z.real()) << ',' << format_cell(r.z.imag()) << ','
            << format_cell(r.rho) << ',' << r.n << ',' << r.trials << ',' << format_cell(r.ks)
            << '\n';
}

}  // namespace singring
