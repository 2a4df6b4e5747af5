#include <doctest.h>

#include <json.hpp>

#include "s4cast/errors.hpp"
#include "s4cast/metrics.hpp"

using namespace s4cast;

namespace {

ConfusionMatrix hand_matrix() {
    // pred\truth:  1    2    3
    //        1  [ 50    3    1 ]
    //        2  [  4   40    6 ]
    //        3  [  2    5   30 ]
    ConfusionMatrix cm;
    cm.add(Severity::weak, Severity::weak, 50);
    cm.add(Severity::weak, Severity::moderate, 3);
    cm.add(Severity::weak, Severity::severe, 1);
    cm.add(Severity::moderate, Severity::weak, 4);
    cm.add(Severity::moderate, Severity::moderate, 40);
    cm.add(Severity::moderate, Severity::severe, 6);
    cm.add(Severity::severe, Severity::weak, 2);
    cm.add(Severity::severe, Severity::moderate, 5);
    cm.add(Severity::severe, Severity::severe, 30);
    return cm;
}

}  // namespace

TEST_CASE("from_pairs counts in prediction-by-truth orientation") {
    const std::vector<Severity> pred{Severity::weak, Severity::moderate, Severity::weak};
    const std::vector<Severity> truth{Severity::weak, Severity::weak, Severity::severe};
    const auto cm = ConfusionMatrix::from_pairs(pred, truth);
    CHECK(cm.at(0, 0) == 1);
    CHECK(cm.at(1, 0) == 1);
    CHECK(cm.at(0, 2) == 1);
    CHECK(cm.total() == 3);

    const std::vector<Severity> shorter{Severity::weak};
    CHECK_THROWS_AS(ConfusionMatrix::from_pairs(pred, shorter), DataError);
}

TEST_CASE("sums and accuracy on the hand matrix") {
    const auto cm = hand_matrix();
    CHECK(cm.total() == 141);
    CHECK(cm.diagonal_sum() == 120);
    CHECK(cm.row_sum(0) == 54);
    CHECK(cm.column_sum(0) == 56);
    CHECK(cm.accuracy() == doctest::Approx(120.0 / 141.0).epsilon(1e-15));
}

TEST_CASE("precision and recall on the hand matrix") {
    const auto cm = hand_matrix();
    CHECK(*cm.precision(Severity::weak) == doctest::Approx(50.0 / 54.0).epsilon(1e-15));
    CHECK(*cm.recall(Severity::weak) == doctest::Approx(50.0 / 56.0).epsilon(1e-15));
    CHECK(*cm.precision(Severity::severe) == doctest::Approx(30.0 / 37.0).epsilon(1e-15));
    CHECK(*cm.recall(Severity::severe) == doctest::Approx(30.0 / 37.0).epsilon(1e-15));
}

TEST_CASE("undefined rates are nullopt, never zero") {
    ConfusionMatrix cm;
    cm.add(Severity::weak, Severity::weak, 10);
    // Nothing predicted moderate, nothing truly moderate.
    CHECK(!cm.precision(Severity::moderate).has_value());
    CHECK(!cm.recall(Severity::moderate).has_value());
    CHECK(cm.precision(Severity::weak).has_value());

    CHECK_THROWS_AS(ConfusionMatrix{}.accuracy(), DataError);
}

TEST_CASE("matrix addition is cell-wise") {
    auto a = hand_matrix();
    const auto b = hand_matrix();
    a += b;
    CHECK(a.at(0, 0) == 100);
    CHECK(a.total() == 282);
    const auto c = hand_matrix() + hand_matrix();
    CHECK(c.at(2, 1) == 10);
}

TEST_CASE("aggregate_cv pools folds before computing rates") {
    // Fold rates of pooled counts differ from averaged per-fold rates; the
    // pooled convention is what the published tables use.
    ConfusionMatrix f1;
    f1.add(Severity::weak, Severity::weak, 9);
    f1.add(Severity::weak, Severity::moderate, 1);
    ConfusionMatrix f2;
    f2.add(Severity::moderate, Severity::moderate, 3);
    f2.add(Severity::moderate, Severity::weak, 7);
    const std::vector<ConfusionMatrix> folds{f1, f2};
    const EvalSummary s = aggregate_cv(folds);
    CHECK(s.pooled.total() == 20);
    CHECK(s.accuracy == doctest::Approx(12.0 / 20.0).epsilon(1e-15));
    CHECK(*s.precision[0] == doctest::Approx(0.9).epsilon(1e-15));
    CHECK(*s.recall[0] == doctest::Approx(9.0 / 16.0).epsilon(1e-15));

    CHECK_THROWS_AS(aggregate_cv(std::vector<ConfusionMatrix>{}), DataError);
}

TEST_CASE("csv emitter follows the documented layout") {
    const std::string csv = to_csv(hand_matrix());
    CHECK(csv ==
          "predicted_class,truth_1,truth_2,truth_3\n"
          "1,50,3,1\n"
          "2,4,40,6\n"
          "3,2,5,30\n");
}

TEST_CASE("text report shows percentages with two decimals") {
    const auto summary = summarize(hand_matrix());
    const std::string text = to_text(summary);
    CHECK(text.find("85.11%") != std::string::npos);  // accuracy 120/141
    CHECK(text.find("92.59%") != std::string::npos);  // precision class 1
    CHECK(text.find("89.29%") != std::string::npos);  // recall class 1
    CHECK(text.find("truth 1") != std::string::npos);
    CHECK(text.find("pred 3") != std::string::npos);
}

TEST_CASE("text report prints n/a for undefined rates") {
    ConfusionMatrix cm;
    cm.add(Severity::weak, Severity::weak, 5);
    const std::string text = to_text(summarize(cm));
    CHECK(text.find("n/a") != std::string::npos);
}

TEST_CASE("metrics json parses and uses null for undefined rates") {
    ConfusionMatrix cm;
    cm.add(Severity::weak, Severity::weak, 5);
    cm.add(Severity::weak, Severity::severe, 2);
    const auto j = nlohmann::json::parse(to_json_string(summarize(cm), "unit"));
    CHECK(j.at("format") == "s4cast-metrics");
    CHECK(j.at("version") == 1);
    CHECK(j.at("total") == 7);
    CHECK(j.at("split") == "unit");
    CHECK(j.at("counts").at(0).at(0) == 5);
    CHECK(j.at("accuracy").get<double>() == doctest::Approx(5.0 / 7.0));
    const auto& moderate = j.at("per_class").at(1);
    CHECK(moderate.at("class") == 2);
    CHECK(moderate.at("precision").is_null());
    CHECK(moderate.at("recall").is_null());
    const auto& severe = j.at("per_class").at(2);
    CHECK(severe.at("precision").is_null());      // row sum zero
    CHECK(severe.at("recall").get<double>() == 0.0);  // truth exists, none found
}

TEST_CASE("confusion json carries the orientation note") {
    const auto j = nlohmann::json::parse(confusion_to_json_string(hand_matrix()));
    CHECK(j.at("format") == "s4cast-confusion");
    CHECK(j.at("counts").at(1).at(2) == 6);
    CHECK(j.at("total") == 141);
    CHECK(j.at("orientation").get<std::string>().find("predicted") != std::string::npos);
}

TEST_CASE("summarize matches the matrix accessors") {
    const auto cm = hand_matrix();
    const auto s = summarize(cm);
    CHECK(s.accuracy == cm.accuracy());
    for (int c = 0; c < kNumClasses; ++c) {
        CHECK(s.precision[c] == cm.precision(severity_from_index(c)));
        CHECK(s.recall[c] == cm.recall(severity_from_index(c)));
    }
}
