#include "s4cast/tuner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>
#include <set>

#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <json.hpp>

#include "s4cast/csv.hpp"
#include "s4cast/errors.hpp"
#include "s4cast/rng.hpp"

namespace s4cast {

namespace {

constexpr double kNoiseVariance = 1e-6;
constexpr double kLengthScaleGrid[] = {0.05, 0.1, 0.15, 0.25, 0.4, 0.6, 1.0, 1.5};
constexpr double kJitterSchedule[] = {0.0, 1e-10, 1e-8, 1e-6, 1e-4, 1e-2};

double norm_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

double norm_pdf(double z) {
    return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi);
}

double dim_coord(const SearchDim& dim, double value) {
    return dim.log_scale ? std::log(value) : value;
}

// Maps u in [0, 1) to an integer in [lo, hi], log-uniformly when flagged.
int dim_value_from_unit(const SearchDim& dim, double u) {
    if (dim.lo == dim.hi) return dim.lo;
    double v;
    if (dim.log_scale) {
        double lo_t = std::log(static_cast<double>(dim.lo));
        double hi_t = std::log(static_cast<double>(dim.hi) + 1.0);
        v = std::floor(std::exp(lo_t + u * (hi_t - lo_t)));
    } else {
        v = static_cast<double>(dim.lo) +
            std::floor(u * (static_cast<double>(dim.hi) - static_cast<double>(dim.lo) + 1.0));
    }
    return std::clamp(static_cast<int>(v), dim.lo, dim.hi);
}

std::vector<int> random_point(const SearchSpace& space, Rng& rng) {
    std::vector<int> p(space.n_dims());
    for (std::size_t d = 0; d < space.n_dims(); ++d) {
        p[d] = dim_value_from_unit(space.dims[d], rng.uniform());
    }
    return p;
}

double squared_distance(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

}  // namespace

void SearchSpace::validate() const {
    if (dims.empty()) throw ConfigError("search space must have at least one dimension");
    std::set<std::string> names;
    for (const SearchDim& dim : dims) {
        if (dim.name.empty()) throw ConfigError("search dimensions must be named");
        if (!names.insert(dim.name).second)
            throw ConfigError("duplicate search dimension name '" + dim.name + "'");
        if (dim.lo < 1)
            throw ConfigError("dimension '" + dim.name + "' lower bound must be >= 1");
        if (dim.hi < dim.lo)
            throw ConfigError("dimension '" + dim.name + "' bounds are inverted");
    }
}

void TuneOptions::validate() const {
    if (n_initial < 1) throw ConfigError("n_initial must be at least 1");
    if (n_iterations < n_initial)
        throw ConfigError("n_iterations must be at least n_initial");
    if (n_candidates < 1) throw ConfigError("n_candidates must be at least 1");
}

double expected_improvement(double mean, double stdev, double best_so_far) {
    double improve = mean - best_so_far;
    if (!(stdev > 0.0)) return std::max(improve, 0.0);
    double z = improve / stdev;
    return improve * norm_cdf(z) + stdev * norm_pdf(z);
}

std::vector<double> GpSurrogate::normalize(std::span<const int> point) const {
    std::vector<double> u(space_.n_dims());
    for (std::size_t d = 0; d < space_.n_dims(); ++d) {
        const SearchDim& dim = space_.dims[d];
        double lo_t = dim_coord(dim, dim.lo);
        double hi_t = dim_coord(dim, dim.hi);
        double t = dim_coord(dim, point[d]);
        u[d] = hi_t > lo_t ? (t - lo_t) / (hi_t - lo_t) : 0.5;
    }
    return u;
}

GpSurrogate GpSurrogate::fit(const SearchSpace& space, std::span<const TrialRecord> trials) {
    space.validate();
    if (trials.size() < 2) throw DataError("surrogate needs at least 2 trials");
    const std::size_t n = trials.size();
    const std::size_t d = space.n_dims();

    GpSurrogate gp;
    gp.space_ = space;
    gp.n_ = n;
    gp.noise_var_ = kNoiseVariance;

    gp.z_.resize(n * d);
    for (std::size_t i = 0; i < n; ++i) {
        if (trials[i].params.size() != d)
            throw DataError("trial dimensionality does not match the search space");
        std::vector<double> u = gp.normalize(trials[i].params);
        std::copy(u.begin(), u.end(), gp.z_.begin() + static_cast<std::ptrdiff_t>(i * d));
    }

    Eigen::VectorXd y(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) y[static_cast<Eigen::Index>(i)] = trials[i].objective;
    gp.mean_y_ = y.mean();
    Eigen::VectorXd yc = y.array() - gp.mean_y_;
    gp.signal_var_ = yc.squaredNorm() / static_cast<double>(n);

    Eigen::MatrixXd dist2(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            dist2(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                squared_distance({gp.z_.data() + i * d, d}, {gp.z_.data() + j * d, d});
        }
    }

    double best_ml = -std::numeric_limits<double>::infinity();
    bool fitted = false;
    for (double ell : kLengthScaleGrid) {
        Eigen::MatrixXd k =
            gp.signal_var_ * (-dist2 / (2.0 * ell * ell)).array().exp().matrix();
        Eigen::LLT<Eigen::MatrixXd> llt;
        double used_jitter = -1.0;
        for (double jitter : kJitterSchedule) {
            Eigen::MatrixXd kn = k;
            kn.diagonal().array() += kNoiseVariance + jitter;
            llt.compute(kn);
            if (llt.info() == Eigen::Success) {
                used_jitter = jitter;
                break;
            }
        }
        if (used_jitter < 0.0) continue;

        Eigen::VectorXd alpha = llt.solve(yc);
        Eigen::MatrixXd lmat = llt.matrixL();
        double log_det = 0.0;
        for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(n); ++i)
            log_det += std::log(lmat(i, i));
        double ml = -0.5 * yc.dot(alpha) - log_det -
                    0.5 * static_cast<double>(n) * std::log(2.0 * std::numbers::pi);
        if (ml > best_ml) {
            best_ml = ml;
            fitted = true;
            gp.length_scale_ = ell;
            gp.noise_var_ = kNoiseVariance + used_jitter;
            gp.alpha_.assign(alpha.data(), alpha.data() + n);
            gp.chol_.resize(n * n);
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j)
                    gp.chol_[i * n + j] = lmat(static_cast<Eigen::Index>(i),
                                               static_cast<Eigen::Index>(j));
        }
    }
    if (!fitted)
        throw NumericError("kernel matrix not positive definite at any jitter level",
                           static_cast<long>(std::size(kJitterSchedule)));
    return gp;
}

GpSurrogate::Posterior GpSurrogate::predict(std::span<const int> point) const {
    const std::size_t n = n_;
    const std::size_t d = space_.n_dims();
    if (point.size() != d) throw DataError("query dimensionality does not match the space");
    std::vector<double> u = normalize(point);

    std::vector<double> kstar(n);
    for (std::size_t i = 0; i < n; ++i) {
        double d2 = squared_distance(u, {z_.data() + i * d, d});
        kstar[i] = signal_var_ * std::exp(-d2 / (2.0 * length_scale_ * length_scale_));
    }

    double mean = mean_y_;
    for (std::size_t i = 0; i < n; ++i) mean += kstar[i] * alpha_[i];

    // Forward substitution L v = k*; variance = k(x,x) + noise - |v|^2.
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) {
        double s = kstar[i];
        for (std::size_t j = 0; j < i; ++j) s -= chol_[i * n + j] * v[j];
        v[i] = s / chol_[i * n + i];
    }
    double var = signal_var_ + noise_var_;
    for (double vi : v) var -= vi * vi;
    return Posterior{mean, std::sqrt(std::max(var, 0.0))};
}

namespace {

// Latin hypercube over the unit cube, one stratum per point and dimension.
std::vector<std::vector<double>> latin_hypercube(std::size_t n_points, std::size_t n_dims,
                                                 Rng& rng) {
    std::vector<std::vector<double>> u(n_points, std::vector<double>(n_dims));
    std::vector<std::size_t> strata(n_points);
    for (std::size_t d = 0; d < n_dims; ++d) {
        for (std::size_t i = 0; i < n_points; ++i) strata[i] = i;
        rng.shuffle(strata);
        for (std::size_t i = 0; i < n_points; ++i) {
            u[i][d] = (static_cast<double>(strata[i]) + rng.uniform()) /
                      static_cast<double>(n_points);
        }
    }
    return u;
}

}  // namespace

TuneResult tune(const TuneObjective& objective, const SearchSpace& space,
                const TuneOptions& opt) {
    space.validate();
    opt.validate();

    Rng lhs_rng(derive_seed(opt.seed, "tune.lhs"));
    Rng cand_rng(derive_seed(opt.seed, "tune.candidates"));

    TuneResult result;
    std::set<std::vector<int>> evaluated;
    constexpr int kRedrawAttempts = 100;

    auto run_trial = [&](std::vector<int> params) {
        evaluated.insert(params);
        auto started = std::chrono::steady_clock::now();
        try {
            double value = objective(params);
            double seconds = std::chrono::duration<double>(
                                 std::chrono::steady_clock::now() - started)
                                 .count();
            if (!(value >= 0.0 && value <= 1.0))
                throw DataError("objective returned " + format_double(value) +
                                ", outside [0, 1]");
            result.history.push_back(TrialRecord{std::move(params), value, seconds});
        } catch (const std::exception& e) {
            result.failures.push_back(TrialFailure{std::move(params), e.what()});
        }
    };

    // Initial design: Latin hypercube, duplicates after rounding re-drawn
    // uniformly (the attempt bound keeps tiny exhausted spaces terminating).
    const std::size_t n_init = static_cast<std::size_t>(opt.n_initial);
    auto lhs = latin_hypercube(n_init, space.n_dims(), lhs_rng);
    for (std::size_t i = 0; i < n_init; ++i) {
        std::vector<int> p(space.n_dims());
        for (std::size_t d = 0; d < space.n_dims(); ++d)
            p[d] = dim_value_from_unit(space.dims[d], lhs[i][d]);
        for (int attempt = 0; attempt < kRedrawAttempts && evaluated.contains(p); ++attempt)
            p = random_point(space, lhs_rng);
        run_trial(std::move(p));
    }

    for (int it = opt.n_initial; it < opt.n_iterations; ++it) {
        std::vector<int> proposal;
        if (result.history.size() >= 2) {
            GpSurrogate gp = GpSurrogate::fit(space, result.history);
            double best_objective = 0.0;
            for (const TrialRecord& t : result.history)
                best_objective = std::max(best_objective, t.objective);

            double best_ei = -1.0;
            int attempts_left = opt.n_candidates * 16;
            int collected = 0;
            while (collected < opt.n_candidates && attempts_left-- > 0) {
                std::vector<int> cand = random_point(space, cand_rng);
                if (evaluated.contains(cand)) continue;
                ++collected;
                GpSurrogate::Posterior post = gp.predict(cand);
                double ei = expected_improvement(post.mean, post.stdev, best_objective);
                if (ei > best_ei) {
                    best_ei = ei;
                    proposal = std::move(cand);
                }
            }
        }
        if (proposal.empty()) proposal = random_point(space, cand_rng);
        run_trial(std::move(proposal));
    }

    if (result.history.empty()) throw DataError("all tuning trials failed");
    const TrialRecord* best = &result.history.front();
    for (const TrialRecord& t : result.history)
        if (t.objective > best->objective) best = &t;
    result.best = *best;
    return result;
}

void write_history_csv(std::ostream& out, const SearchSpace& space, const TuneResult& result) {
    out << "trial";
    for (const SearchDim& dim : space.dims) out << ',' << dim.name;
    out << ",objective,wall_time_s\n";
    for (std::size_t i = 0; i < result.history.size(); ++i) {
        const TrialRecord& t = result.history[i];
        out << (i + 1);
        for (int v : t.params) out << ',' << v;
        out << ',' << format_double(t.objective) << ',' << format_double(t.wall_time_s)
            << '\n';
    }
}

std::string best_to_json_string(const SearchSpace& space, const TuneResult& result) {
    nlohmann::json j;
    j["format"] = "s4cast-tune-best";
    j["version"] = 1;
    nlohmann::json params;
    for (std::size_t d = 0; d < space.n_dims(); ++d)
        params[space.dims[d].name] = result.best.params[d];
    j["params"] = params;
    j["objective"] = result.best.objective;
    j["trials"] = result.history.size();
    j["failures"] = result.failures.size();
    return j.dump(2) + "\n";
}

}  // namespace s4cast
