#include "s4cast/metrics.hpp"

#include <cstdio>
#include <sstream>

#include <json.hpp>

#include "s4cast/errors.hpp"

namespace s4cast {

void ConfusionMatrix::add(Severity predicted, Severity truth, std::uint64_t count) {
    counts_[severity_index(predicted)][severity_index(truth)] += count;
}

ConfusionMatrix ConfusionMatrix::from_pairs(std::span<const Severity> predicted,
                                            std::span<const Severity> truth) {
    if (predicted.size() != truth.size()) {
        throw DataError("prediction/truth length mismatch: " + std::to_string(predicted.size()) +
                        " vs " + std::to_string(truth.size()));
    }
    ConfusionMatrix cm;
    for (std::size_t i = 0; i < predicted.size(); ++i) cm.add(predicted[i], truth[i]);
    return cm;
}

ConfusionMatrix ConfusionMatrix::from_counts(
    const std::array<std::array<std::uint64_t, kNumClasses>, kNumClasses>& counts) {
    ConfusionMatrix cm;
    cm.counts_ = counts;
    return cm;
}

std::uint64_t ConfusionMatrix::total() const {
    std::uint64_t t = 0;
    for (const auto& row : counts_)
        for (std::uint64_t v : row) t += v;
    return t;
}

std::uint64_t ConfusionMatrix::row_sum(int predicted_index) const {
    std::uint64_t t = 0;
    for (std::uint64_t v : counts_[predicted_index]) t += v;
    return t;
}

std::uint64_t ConfusionMatrix::column_sum(int truth_index) const {
    std::uint64_t t = 0;
    for (const auto& row : counts_) t += row[truth_index];
    return t;
}

std::uint64_t ConfusionMatrix::diagonal_sum() const {
    std::uint64_t t = 0;
    for (int i = 0; i < kNumClasses; ++i) t += counts_[i][i];
    return t;
}

double ConfusionMatrix::accuracy() const {
    std::uint64_t t = total();
    if (t == 0) throw DataError("accuracy undefined for an empty confusion matrix");
    return static_cast<double>(diagonal_sum()) / static_cast<double>(t);
}

std::optional<double> ConfusionMatrix::precision(Severity c) const {
    int i = severity_index(c);
    std::uint64_t denom = row_sum(i);
    if (denom == 0) return std::nullopt;
    return static_cast<double>(counts_[i][i]) / static_cast<double>(denom);
}

std::optional<double> ConfusionMatrix::recall(Severity c) const {
    int i = severity_index(c);
    std::uint64_t denom = column_sum(i);
    if (denom == 0) return std::nullopt;
    return static_cast<double>(counts_[i][i]) / static_cast<double>(denom);
}

ConfusionMatrix& ConfusionMatrix::operator+=(const ConfusionMatrix& other) {
    for (int i = 0; i < kNumClasses; ++i)
        for (int j = 0; j < kNumClasses; ++j) counts_[i][j] += other.counts_[i][j];
    return *this;
}

ConfusionMatrix operator+(ConfusionMatrix a, const ConfusionMatrix& b) {
    a += b;
    return a;
}

EvalSummary summarize(const ConfusionMatrix& cm) {
    EvalSummary s;
    s.pooled = cm;
    s.accuracy = cm.accuracy();
    for (int c = 0; c < kNumClasses; ++c) {
        Severity sev = severity_from_index(c);
        s.precision[c] = cm.precision(sev);
        s.recall[c] = cm.recall(sev);
    }
    return s;
}

EvalSummary aggregate_cv(std::span<const ConfusionMatrix> folds) {
    if (folds.empty()) throw DataError("no folds to aggregate");
    ConfusionMatrix pooled;
    for (const ConfusionMatrix& f : folds) pooled += f;
    return summarize(pooled);
}

namespace {

std::string pct(std::optional<double> rate) {
    if (!rate) return "n/a";
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%.2f%%", *rate * 100.0);
    return buf;
}

nlohmann::json rate_json(std::optional<double> rate) {
    if (!rate) return nullptr;
    return *rate;
}

}  // namespace

std::string to_text(const EvalSummary& s) {
    const ConfusionMatrix& cm = s.pooled;
    std::ostringstream os;
    char line[160];
    std::snprintf(line, sizeof(line), "%-10s %12s %12s %12s %12s\n", "", "truth 1", "truth 2",
                  "truth 3", "precision");
    os << line;
    for (int i = 0; i < kNumClasses; ++i) {
        std::snprintf(line, sizeof(line), "pred %-5d %12llu %12llu %12llu %12s\n", i + 1,
                      static_cast<unsigned long long>(cm.at(i, 0)),
                      static_cast<unsigned long long>(cm.at(i, 1)),
                      static_cast<unsigned long long>(cm.at(i, 2)), pct(s.precision[i]).c_str());
        os << line;
    }
    std::snprintf(line, sizeof(line), "%-10s %12s %12s %12s\n", "recall", pct(s.recall[0]).c_str(),
                  pct(s.recall[1]).c_str(), pct(s.recall[2]).c_str());
    os << line;
    std::snprintf(line, sizeof(line), "accuracy   %s   (total %llu)\n",
                  pct(s.accuracy).c_str(), static_cast<unsigned long long>(cm.total()));
    os << line;
    return os.str();
}

std::string to_csv(const ConfusionMatrix& cm) {
    std::ostringstream os;
    os << "predicted_class,truth_1,truth_2,truth_3\n";
    for (int i = 0; i < kNumClasses; ++i) {
        os << (i + 1) << ',' << cm.at(i, 0) << ',' << cm.at(i, 1) << ',' << cm.at(i, 2) << '\n';
    }
    return os.str();
}

std::string confusion_to_json_string(const ConfusionMatrix& cm) {
    nlohmann::json j;
    j["format"] = "s4cast-confusion";
    j["version"] = 1;
    j["orientation"] = "rows=predicted, columns=ground truth";
    nlohmann::json counts = nlohmann::json::array();
    for (int i = 0; i < kNumClasses; ++i) {
        counts.push_back({cm.at(i, 0), cm.at(i, 1), cm.at(i, 2)});
    }
    j["counts"] = counts;
    j["total"] = cm.total();
    return j.dump(2) + "\n";
}

std::string to_json_string(const EvalSummary& s, const std::string& split_note) {
    nlohmann::json j;
    j["format"] = "s4cast-metrics";
    j["version"] = 1;
    const ConfusionMatrix& cm = s.pooled;
    nlohmann::json counts = nlohmann::json::array();
    for (int i = 0; i < kNumClasses; ++i) {
        counts.push_back({cm.at(i, 0), cm.at(i, 1), cm.at(i, 2)});
    }
    j["counts"] = counts;
    j["total"] = cm.total();
    j["accuracy"] = s.accuracy;
    nlohmann::json per_class = nlohmann::json::array();
    for (int c = 0; c < kNumClasses; ++c) {
        per_class.push_back({{"class", c + 1},
                             {"precision", rate_json(s.precision[c])},
                             {"recall", rate_json(s.recall[c])}});
    }
    j["per_class"] = per_class;
    if (!split_note.empty()) j["split"] = split_note;
    return j.dump(2) + "\n";
}

}  // namespace s4cast
