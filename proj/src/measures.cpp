#include "singring/measures.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "json.hpp"
#include "singring/errors.hpp"

namespace singring {

DiscreteMeasure DiscreteMeasure::from_columns(const std::vector<double>& locations,
                                              const std::vector<double>& weights) {
    if (locations.size() != weights.size())
        throw std::invalid_argument("measure: locations/weights size mismatch");
    std::vector<std::pair<double, double>> atoms(locations.size());
    for (std::size_t i = 0; i < locations.size(); ++i) atoms[i] = {locations[i], weights[i]};
    return DiscreteMeasure(atoms);
}

DiscreteMeasure::DiscreteMeasure(const std::vector<std::pair<double, double>>& atoms) {
    if (atoms.empty()) throw std::invalid_argument("measure: needs at least one atom");
    std::vector<std::pair<double, double>> sorted = atoms;
    for (const auto& [x, w] : sorted) {
        if (!std::isfinite(x)) throw std::invalid_argument("measure: non-finite atom location");
        if (!(w > 0.0)) throw std::invalid_argument("measure: weights must be strictly positive");
    }
    std::sort(sorted.begin(), sorted.end());

    x_.reserve(sorted.size());
    w_.reserve(sorted.size());
    for (const auto& [x, w] : sorted) {
        if (!x_.empty() && x - x_.back() <= kMergeTol) {
            // merge near-duplicates at the weighted mean location
            const double wt = w_.back() + w;
            x_.back() = (x_.back() * w_.back() + x * w) / wt;
            w_.back() = wt;
        } else {
            x_.push_back(x);
            w_.push_back(w);
        }
    }

    const double total = std::accumulate(w_.begin(), w_.end(), 0.0);
    if (std::abs(total - 1.0) > kWeightSumTol)
        throw std::invalid_argument("measure: weights sum to " + std::to_string(total) +
                                    ", expected 1");
    for (double& w : w_) w /= total;
}

double DiscreteMeasure::max_abs_location() const {
    return std::max(std::abs(x_.front()), std::abs(x_.back()));
}

bool DiscreteMeasure::has_atom_at_zero() const {
    for (double x : x_)
        if (std::abs(x) <= kMergeTol) return true;
    return false;
}

double DiscreteMeasure::moment(int k) const {
    if (k < 0 && has_atom_at_zero())
        throw std::domain_error("moment: negative moment of a measure charging {0}");
    double acc = 0.0;
    for (std::size_t i = 0; i < x_.size(); ++i) acc += w_[i] * std::pow(x_[i], k);
    return acc;
}

std::string DiscreteMeasure::to_json_string() const {
    nlohmann::json atoms = nlohmann::json::array();
    for (std::size_t i = 0; i < x_.size(); ++i) atoms.push_back({x_[i], w_[i]});
    return nlohmann::json{{"atoms", atoms}}.dump();
}

DiscreteMeasure DiscreteMeasure::from_json_string(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(std::string("measure: invalid JSON: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("atoms") || !doc["atoms"].is_array())
        throw ConfigError("measure: expected {\"atoms\": [[x, w], ...]}");
    std::vector<std::pair<double, double>> atoms;
    double prev = -std::numeric_limits<double>::infinity();
    for (const auto& entry : doc["atoms"]) {
        if (!entry.is_array() || entry.size() != 2)
            throw ConfigError("measure: each atom must be [location, weight]");
        const double x = entry[0].get<double>();
        const double w = entry[1].get<double>();
        if (x < prev) throw ConfigError("measure: atom locations must be ascending");
        if (!(w > 0.0)) throw ConfigError("measure: atom weights must be positive");
        prev = x;
        atoms.emplace_back(x, w);
    }
    try {
        return DiscreteMeasure(atoms);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("measure: ") + e.what());
    }
}

SymmetricMeasure::SymmetricMeasure(DiscreteMeasure m) : m_(std::move(m)) {
    const auto& x = m_.locations();
    const auto& w = m_.weights();
    const std::size_t n = x.size();
    const double tol = 1e-9 * std::max(1.0, m_.max_abs_location());
    for (std::size_t i = 0, j = n; i < n; ++i) {
        --j;
        if (std::abs(x[i] + x[j]) > tol || std::abs(w[i] - w[j]) > 1e-9)
            throw std::invalid_argument("symmetric measure: atoms are not mirror-paired");
        if (i >= j) break;
    }
}

bool SymmetricMeasure::is_point_mass_at_zero() const {
    return m_.size() == 1 && m_.has_atom_at_zero();
}

SymmetricMeasure symmetrize(const DiscreteMeasure& mu) {
    std::vector<std::pair<double, double>> atoms;
    atoms.reserve(2 * mu.size());
    for (std::size_t i = 0; i < mu.size(); ++i) {
        const double x = mu.locations()[i];
        const double w = mu.weights()[i];
        atoms.emplace_back(x, 0.5 * w);
        atoms.emplace_back(-x, 0.5 * w);
    }
    return SymmetricMeasure(DiscreteMeasure(atoms));
}

std::complex<double> stieltjes(const DiscreteMeasure& mu, std::complex<double> y) {
    if (y.imag() == 0.0) {
        if (y.real() >= mu.min_location() && y.real() <= mu.max_location())
            throw std::domain_error(
                "stieltjes: real evaluation inside the convex hull of the atoms");
    }
    std::complex<double> acc = 0.0;
    for (std::size_t i = 0; i < mu.size(); ++i)
        acc += mu.weights()[i] / (y - mu.locations()[i]);
    return acc;
}

std::complex<double> stieltjes(const SymmetricMeasure& mu, std::complex<double> y) {
    return stieltjes(mu.measure(), y);
}

RingRadii ring_radii(const DiscreteMeasure& mu) {
    if (mu.min_location() < 0.0)
        throw std::domain_error("ring_radii: measure must be supported on [0, inf)");
    RingRadii out;
    out.b = std::sqrt(mu.moment(2));
    if (mu.has_atom_at_zero()) {
        out.a = 0.0;
        out.a_defined = false;
    } else {
        out.a = 1.0 / std::sqrt(mu.moment(-2));
    }
    return out;
}

RegularityReport regularity_diagnostics(const DiscreteMeasure& mu, int n, double kappa,
                                        double M) {
    if (n < 1) throw std::invalid_argument("regularity_diagnostics: n must be >= 1");
    if (!(kappa > 0.0)) throw std::invalid_argument("regularity_diagnostics: kappa must be > 0");
    if (!(M > 0.0)) throw std::invalid_argument("regularity_diagnostics: M must be > 0");

    RegularityReport rep;
    rep.n = n;
    rep.kappa = kappa;
    rep.bound = M;
    rep.max_atom = mu.max_abs_location();
    rep.norm_ok = rep.max_atom <= M;
    rep.eta = std::pow(static_cast<double>(n), -kappa);

    const SymmetricMeasure sym = symmetrize(mu);
    const int npts = static_cast<int>(std::ceil(2.0 * M / rep.eta)) + 1;
    rep.grid_step = 2.0 * M / (npts - 1);
    for (int i = 0; i < npts; ++i) {
        const double x = -M + rep.grid_step * i;
        const double v = std::abs(stieltjes(sym, {x, rep.eta}).imag());
        if (v > rep.im_g_sup) {
            rep.im_g_sup = v;
            rep.arg_at_sup = x;
        }
    }
    return rep;
}

}  // namespace singring
