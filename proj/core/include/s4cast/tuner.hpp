#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace s4cast {

struct SearchDim {
    std::string name;
    int lo = 1;
    int hi = 1;
    bool log_scale = false;
};

/// Integer box the tuner searches over. Dimensions flagged log_scale are
/// sampled and modelled in log coordinates.
struct SearchSpace {
    std::vector<SearchDim> dims;

    void validate() const;  ///< nonempty, unique names, 1 <= lo <= hi
    std::size_t n_dims() const { return dims.size(); }
};

struct TrialRecord {
    std::vector<int> params;
    double objective = 0.0;  ///< validation accuracy in [0, 1]
    double wall_time_s = 0.0;
};

struct TrialFailure {
    std::vector<int> params;
    std::string message;
};

/// EI for maximization: (mean - best)*Phi(z) + stdev*phi(z) with
/// z = (mean - best)/stdev; a zero (or numerically negative) stdev
/// degenerates to max(mean - best, 0).
double expected_improvement(double mean, double stdev, double best_so_far);

/// Gaussian-process regression over normalized search-space coordinates with
/// a squared-exponential kernel. The length scale is picked from a fixed grid
/// by marginal likelihood; a small observation-noise term plus escalating
/// jitter keeps the kernel factorizable (NumericError once jitter runs out).
/// Prediction needs no linear-algebra backend: the Cholesky factor is stored
/// and forward-substituted directly.
class GpSurrogate {
public:
    static GpSurrogate fit(const SearchSpace& space, std::span<const TrialRecord> trials);

    struct Posterior {
        double mean = 0.0;
        double stdev = 0.0;
    };
    Posterior predict(std::span<const int> point) const;

    double length_scale() const { return length_scale_; }
    double noise_variance() const { return noise_var_; }

private:
    SearchSpace space_;
    std::size_t n_ = 0;
    double mean_y_ = 0.0;
    double signal_var_ = 0.0;
    double noise_var_ = 0.0;
    double length_scale_ = 1.0;
    std::vector<double> z_;      ///< n x d normalized training coordinates
    std::vector<double> alpha_;  ///< (K + noise I)^-1 (y - mean)
    std::vector<double> chol_;   ///< lower-triangular factor, row-major n x n

    std::vector<double> normalize(std::span<const int> point) const;
};

struct TuneOptions {
    int n_iterations = 50;
    int n_initial = 10;
    int n_candidates = 512;
    std::uint64_t seed = 0;

    void validate() const;  ///< 1 <= n_initial <= n_iterations, n_candidates >= 1
};

struct TuneResult {
    TrialRecord best;
    std::vector<TrialRecord> history;    ///< successful trials, evaluation order
    std::vector<TrialFailure> failures;  ///< trials whose objective threw
};

using TuneObjective = std::function<double(std::span<const int>)>;

/// Bayesian optimization: Latin-hypercube initial design, then EI-maximizing
/// proposals chosen from seeded random candidate sets. Duplicate points are
/// re-drawn (accepted only once the attempt budget is exhausted on tiny
/// spaces). Deterministic for a fixed seed and deterministic objective;
/// throws DataError when every trial fails.
TuneResult tune(const TuneObjective& objective, const SearchSpace& space,
                const TuneOptions& opt);

/// History CSV: trial,<dim names...>,objective,wall_time_s.
void write_history_csv(std::ostream& out, const SearchSpace& space, const TuneResult& result);

/// Best parameters plus objective as a JSON document.
std::string best_to_json_string(const SearchSpace& space, const TuneResult& result);

}  // namespace s4cast
