#include "s4cast/svm.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "s4cast/errors.hpp"
#include "s4cast/rng.hpp"

namespace s4cast {

namespace {

// Full kernel matrices are cached up to this many rows (~72 MB); larger
// problems fall back to on-demand kernel evaluation.
constexpr std::size_t kKernelCacheMaxRows = 3000;

double kernel(const double* a, const double* b, std::size_t n, double scale) {
    double d2 = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        double d = a[j] - b[j];
        d2 += d * d;
    }
    return std::exp(-d2 / (scale * scale));
}

class KernelView {
public:
    KernelView(const FeatureMatrix& x, double scale) : x_(x), scale_(scale) {
        if (x.n_rows <= kKernelCacheMaxRows) {
            cache_.resize(x.n_rows * x.n_rows);
            for (std::size_t i = 0; i < x.n_rows; ++i) {
                for (std::size_t j = i; j < x.n_rows; ++j) {
                    double k = kernel(x.row(i), x.row(j), x.n_cols, scale_);
                    cache_[i * x.n_rows + j] = k;
                    cache_[j * x.n_rows + i] = k;
                }
            }
        }
    }

    double operator()(std::size_t i, std::size_t j) const {
        if (!cache_.empty()) return cache_[i * x_.n_rows + j];
        return kernel(x_.row(i), x_.row(j), x_.n_cols, scale_);
    }

private:
    const FeatureMatrix& x_;
    double scale_;
    std::vector<double> cache_;
};

struct SmoResult {
    std::vector<double> alpha;
    double bias = 0.0;
};

// Simplified SMO with Platt's partner hierarchy. Each sweep examines every
// row; a KKT violator tries the partner with the largest |e_i - e_j| among
// non-bound alphas, then all non-bound rows, then all rows (the scan orders
// start at seeded random offsets). A violator no partner can improve is
// numerically converged and does not keep the sweep alive; training stops
// once a full sweep makes no progress.
SmoResult run_smo(const FeatureMatrix& x, std::span<const double> y, const SvmOptions& opt,
                  Rng& rng) {
    const std::size_t n = x.n_rows;
    const double c = opt.box_constraint;
    const double tol = opt.tolerance;
    KernelView k(x, opt.kernel_scale);
    std::vector<double> alpha(n, 0.0);
    double bias = 0.0;
    // Error cache e_i = f(x_i) - y_i, maintained incrementally; f starts at 0.
    std::vector<double> err(n);
    for (std::size_t i = 0; i < n; ++i) err[i] = -y[i];

    auto non_bound = [&](std::size_t j) { return alpha[j] > 0.0 && alpha[j] < c; };

    auto try_step = [&](std::size_t i, std::size_t j) {
        if (i == j) return false;
        const double ai_old = alpha[i];
        const double aj_old = alpha[j];
        double lo, hi;
        if (y[i] != y[j]) {
            lo = std::max(0.0, aj_old - ai_old);
            hi = std::min(c, c + aj_old - ai_old);
        } else {
            lo = std::max(0.0, ai_old + aj_old - c);
            hi = std::min(c, ai_old + aj_old);
        }
        if (lo >= hi) return false;
        const double kii = k(i, i);
        const double kjj = k(j, j);
        const double kij = k(i, j);
        const double eta = 2.0 * kij - kii - kjj;
        if (eta >= 0.0) return false;
        double aj = aj_old - y[j] * (err[i] - err[j]) / eta;
        aj = std::clamp(aj, lo, hi);
        if (std::abs(aj - aj_old) < 1e-12) return false;
        const double ai = ai_old + y[i] * y[j] * (aj_old - aj);
        const double dai = ai - ai_old;
        const double daj = aj - aj_old;
        const double b1 = bias - err[i] - y[i] * dai * kii - y[j] * daj * kij;
        const double b2 = bias - err[j] - y[i] * dai * kij - y[j] * daj * kjj;
        double new_bias;
        if (ai > 0.0 && ai < c) {
            new_bias = b1;
        } else if (aj > 0.0 && aj < c) {
            new_bias = b2;
        } else {
            new_bias = (b1 + b2) / 2.0;
        }
        const double db = new_bias - bias;
        alpha[i] = ai;
        alpha[j] = aj;
        bias = new_bias;
        for (std::size_t t = 0; t < n; ++t) {
            err[t] += y[i] * dai * k(i, t) + y[j] * daj * k(j, t) + db;
        }
        return true;
    };

    auto examine = [&](std::size_t i) {
        const double ye = y[i] * err[i];
        const bool violates = (ye < -tol && alpha[i] < c) || (ye > tol && alpha[i] > 0.0);
        if (!violates) return false;
        std::size_t best = n;
        double best_gap = -1.0;
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i || !non_bound(j)) continue;
            const double gap = std::abs(err[i] - err[j]);
            if (gap > best_gap) {
                best_gap = gap;
                best = j;
            }
        }
        if (best < n && try_step(i, best)) return true;
        std::size_t start = rng.uniform_index(n);
        for (std::size_t t = 0; t < n; ++t) {
            const std::size_t j = (start + t) % n;
            if (non_bound(j) && try_step(i, j)) return true;
        }
        start = rng.uniform_index(n);
        for (std::size_t t = 0; t < n; ++t) {
            if (try_step(i, (start + t) % n)) return true;
        }
        return false;
    };

    for (int sweep = 1;; ++sweep) {
        if (sweep > opt.max_sweeps)
            throw NumericError("SMO did not converge", static_cast<long>(sweep - 1));
        std::size_t progressed = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (examine(i)) ++progressed;
        }
        if (progressed == 0) break;
    }
    return SmoResult{std::move(alpha), bias};
}

}  // namespace

double BinarySvm::decision(std::span<const double> standardized_row, double kernel_scale) const {
    double f = bias;
    for (std::size_t i = 0; i < support_vectors.n_rows; ++i) {
        f += dual_coef[i] * kernel(standardized_row.data(), support_vectors.row(i),
                                   support_vectors.n_cols, kernel_scale);
    }
    return f;
}

SvmOvo SvmOvo::fit(const FeatureMatrix& x, std::span<const int> y, const SvmOptions& opt) {
    if (x.n_rows == 0) throw DataError("cannot train SVM on an empty dataset");
    if (y.size() != x.n_rows) throw DataError("label count does not match row count");
    if (!(opt.kernel_scale > 0.0)) throw ConfigError("kernel_scale must be positive");
    if (!(opt.box_constraint > 0.0)) throw ConfigError("box_constraint must be positive");

    std::array<std::vector<std::size_t>, kNumClasses> by_class;
    for (std::size_t i = 0; i < x.n_rows; ++i)
        by_class[static_cast<std::size_t>(y[i])].push_back(i);
    int present = 0;
    for (const auto& rows : by_class)
        if (!rows.empty()) ++present;
    if (present < 2) throw DataError("SVM training needs at least 2 classes");

    SvmOvo model;
    model.options_ = opt;
    model.scaler_ = Scaler::fit(x);
    FeatureMatrix xs = model.scaler_.apply(x);

    for (int a = 0; a < kNumClasses; ++a) {
        for (int b = a + 1; b < kNumClasses; ++b) {
            const auto& rows_a = by_class[static_cast<std::size_t>(a)];
            const auto& rows_b = by_class[static_cast<std::size_t>(b)];
            if (rows_a.empty() || rows_b.empty()) continue;

            std::vector<std::size_t> rows;
            rows.reserve(rows_a.size() + rows_b.size());
            rows.insert(rows.end(), rows_a.begin(), rows_a.end());
            rows.insert(rows.end(), rows_b.begin(), rows_b.end());

            FeatureMatrix sub;
            sub.n_rows = rows.size();
            sub.n_cols = xs.n_cols;
            sub.data.resize(sub.n_rows * sub.n_cols);
            std::vector<double> labels(rows.size());
            for (std::size_t i = 0; i < rows.size(); ++i) {
                const double* src = xs.row(rows[i]);
                std::copy(src, src + xs.n_cols, sub.row(i));
                labels[i] = i < rows_a.size() ? 1.0 : -1.0;
            }

            Rng rng(derive_seed(opt.seed, "svm.pair." + std::to_string(a + 1) + "." +
                                              std::to_string(b + 1)));
            SmoResult smo = run_smo(sub, labels, opt, rng);

            BinarySvm machine;
            machine.positive_class = a;
            machine.negative_class = b;
            machine.bias = smo.bias;
            machine.support_vectors.n_cols = sub.n_cols;
            for (std::size_t i = 0; i < rows.size(); ++i) {
                if (smo.alpha[i] == 0.0) continue;
                const double* src = sub.row(i);
                machine.support_vectors.data.insert(machine.support_vectors.data.end(), src,
                                                    src + sub.n_cols);
                machine.support_vectors.n_rows++;
                machine.dual_coef.push_back(smo.alpha[i] * labels[i]);
            }
            model.machines_.push_back(std::move(machine));
        }
    }
    return model;
}

SvmOvo SvmOvo::from_state(Scaler scaler, std::vector<BinarySvm> machines, SvmOptions options) {
    if (machines.empty()) throw DataError("SVM state has no machines");
    for (const BinarySvm& m : machines) {
        if (m.dual_coef.size() != m.support_vectors.n_rows)
            throw DataError("SVM dual coefficient count does not match support vectors");
        if (m.support_vectors.n_cols != scaler.n_features())
            throw DataError("SVM support vectors disagree with scaler on feature count");
    }
    SvmOvo model;
    model.scaler_ = std::move(scaler);
    model.machines_ = std::move(machines);
    model.options_ = std::move(options);
    return model;
}

std::array<double, kNumClasses> SvmOvo::predict_scores(std::span<const double> raw_row) const {
    std::vector<double> q = scaler_.apply_row(raw_row);
    std::array<double, kNumClasses> votes{};
    for (const BinarySvm& m : machines_) {
        double f = m.decision(q, options_.kernel_scale);
        int winner = f >= 0.0 ? m.positive_class : m.negative_class;
        votes[static_cast<std::size_t>(winner)] += 1.0;
    }
    return votes;
}

int SvmOvo::predict_index(std::span<const double> raw_row) const {
    std::vector<double> q = scaler_.apply_row(raw_row);
    std::array<double, kNumClasses> votes{};
    std::array<double, kNumClasses> margin{};
    for (const BinarySvm& m : machines_) {
        double f = m.decision(q, options_.kernel_scale);
        int winner = f >= 0.0 ? m.positive_class : m.negative_class;
        votes[static_cast<std::size_t>(winner)] += 1.0;
        margin[static_cast<std::size_t>(winner)] += std::abs(f);
    }
    int best = 0;
    for (int c = 1; c < kNumClasses; ++c) {
        if (votes[c] > votes[best] || (votes[c] == votes[best] && margin[c] > margin[best]))
            best = c;
    }
    return best;
}

}  // namespace s4cast
