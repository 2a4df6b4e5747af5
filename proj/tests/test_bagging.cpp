#include <doctest.h>

#include <vector>

#include "s4cast/bagging.hpp"
#include "s4cast/errors.hpp"
#include "s4cast/rng.hpp"

using namespace s4cast;

namespace {

// Two noisy interleaved clusters per class on a 2-D grid.
FeatureMatrix fixture_x(std::vector<int>& y, std::size_t n) {
    Rng rng(404);
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < n; ++i) {
        const int cls = static_cast<int>(i % 3);
        rows.push_back({static_cast<double>(cls) * 2.0 + rng.normal() * 0.4,
                        static_cast<double>(cls) * -1.5 + rng.normal() * 0.4});
        y.push_back(cls);
    }
    return FeatureMatrix::from_rows(rows);
}

TreeNode leaf(std::array<double, kNumClasses> dist) {
    TreeNode node;
    node.distribution = dist;
    return node;
}

}  // namespace

TEST_CASE("one member without bootstrap reproduces a plain tree exactly") {
    std::vector<int> y;
    const FeatureMatrix x = fixture_x(y, 90);

    TreeOptions tree_opt;
    tree_opt.max_splits = 12;
    const Tree tree = Tree::fit(x, y, tree_opt);

    BagOptions opt;
    opt.n_learners = 1;
    opt.max_splits = 12;
    opt.bootstrap = false;
    const BaggedTrees bag = BaggedTrees::fit(x, y, opt);

    REQUIRE(bag.trees().size() == 1);
    for (std::size_t r = 0; r < x.n_rows; ++r) {
        CHECK(bag.predict_index(x.row(r)) == tree.predict_index(x.row(r)));
        CHECK(bag.predict_scores(x.row(r)) == tree.predict_distribution(x.row(r)));
    }
}

TEST_CASE("bootstrap draws are reproducible from the derived member seeds") {
    std::vector<int> y;
    const FeatureMatrix x = fixture_x(y, 45);

    BagOptions opt;
    opt.n_learners = 4;
    opt.max_splits = 8;
    opt.seed = 9001;
    BagTrace trace;
    BaggedTrees::fit(x, y, opt, &trace);

    REQUIRE(trace.bootstrap_indices.size() == 4);
    for (std::size_t t = 0; t < 4; ++t) {
        Rng rng(derive_seed(opt.seed, static_cast<std::uint64_t>(t)));
        for (std::size_t i = 0; i < x.n_rows; ++i) {
            REQUIRE(trace.bootstrap_indices[t][i] == rng.uniform_index(x.n_rows));
        }
    }

    // Distinct members draw distinct samples.
    CHECK(trace.bootstrap_indices[0] != trace.bootstrap_indices[1]);
}

TEST_CASE("member seeds depend only on the member index") {
    // Training with more members must not change the earlier members' draws.
    std::vector<int> y;
    const FeatureMatrix x = fixture_x(y, 30);

    BagOptions small;
    small.n_learners = 2;
    small.seed = 77;
    BagTrace small_trace;
    BaggedTrees::fit(x, y, small, &small_trace);

    BagOptions big = small;
    big.n_learners = 5;
    BagTrace big_trace;
    BaggedTrees::fit(x, y, big, &big_trace);

    REQUIRE(big_trace.bootstrap_indices.size() == 5);
    CHECK(big_trace.bootstrap_indices[0] == small_trace.bootstrap_indices[0]);
    CHECK(big_trace.bootstrap_indices[1] == small_trace.bootstrap_indices[1]);
}

TEST_CASE("training is deterministic in the seed") {
    std::vector<int> y;
    const FeatureMatrix x = fixture_x(y, 60);

    BagOptions opt;
    opt.n_learners = 6;
    opt.max_splits = 10;
    opt.seed = 31337;
    const BaggedTrees a = BaggedTrees::fit(x, y, opt);
    const BaggedTrees b = BaggedTrees::fit(x, y, opt);

    BagOptions other = opt;
    other.seed = 31338;
    BagTrace trace_a;
    BagTrace trace_c;
    BaggedTrees::fit(x, y, opt, &trace_a);
    BaggedTrees::fit(x, y, other, &trace_c);

    for (double v = -2.0; v <= 7.0; v += 0.5) {
        const double row[] = {v, -v / 2.0};
        CHECK(a.predict_index(row) == b.predict_index(row));
        CHECK(a.predict_scores(row) == b.predict_scores(row));
    }
    CHECK(trace_a.bootstrap_indices[0] != trace_c.bootstrap_indices[0]);
}

TEST_CASE("scores are the mean of member leaf distributions") {
    // Single-leaf trees make the aggregation arithmetic visible.
    std::vector<Tree> members;
    members.push_back(Tree::from_nodes({leaf({0.6, 0.4, 0.0})}));
    members.push_back(Tree::from_nodes({leaf({0.0, 0.4, 0.6})}));
    members.push_back(Tree::from_nodes({leaf({0.3, 0.7, 0.0})}));
    const BaggedTrees bag = BaggedTrees::from_state(std::move(members), BagOptions{});

    const double row[] = {0.0};
    const auto scores = bag.predict_scores(row);
    CHECK(scores[0] == doctest::Approx(0.3).epsilon(1e-15));
    CHECK(scores[1] == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(scores[2] == doctest::Approx(0.2).epsilon(1e-15));
    CHECK(bag.predict_index(row) == 1);
}

TEST_CASE("tied mean scores go to the lowest class") {
    std::vector<Tree> members;
    members.push_back(Tree::from_nodes({leaf({0.0, 0.5, 0.5})}));
    members.push_back(Tree::from_nodes({leaf({0.0, 0.5, 0.5})}));
    const BaggedTrees bag = BaggedTrees::from_state(std::move(members), BagOptions{});
    const double row[] = {0.0};
    CHECK(bag.predict_index(row) == 1);
}

TEST_CASE("mean scores stay a probability vector") {
    std::vector<int> y;
    const FeatureMatrix x = fixture_x(y, 75);
    BagOptions opt;
    opt.n_learners = 9;
    opt.seed = 5;
    const BaggedTrees bag = BaggedTrees::fit(x, y, opt);
    for (std::size_t r = 0; r < x.n_rows; ++r) {
        const auto scores = bag.predict_scores(x.row(r));
        double total = 0.0;
        for (const double s : scores) {
            CHECK(s >= 0.0);
            total += s;
        }
        CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("bagging drives training accuracy on a noisy fixture") {
    std::vector<int> y;
    const FeatureMatrix x = fixture_x(y, 150);
    BagOptions opt;
    opt.n_learners = 25;
    opt.max_splits = 40;
    opt.seed = 2024;
    const BaggedTrees bag = BaggedTrees::fit(x, y, opt);
    int correct = 0;
    for (std::size_t r = 0; r < x.n_rows; ++r) {
        correct += bag.predict_index(x.row(r)) == y[r];
    }
    CHECK(static_cast<double>(correct) / static_cast<double>(x.n_rows) > 0.9);
}

TEST_CASE("fit and from_state validate their inputs") {
    std::vector<int> y;
    const FeatureMatrix x = fixture_x(y, 12);

    CHECK_THROWS_AS(BaggedTrees::fit(FeatureMatrix{}, std::vector<int>{}, BagOptions{}),
                    DataError);
    CHECK_THROWS_AS(BaggedTrees::fit(x, std::vector<int>{0, 1}, BagOptions{}), DataError);
    BagOptions bad;
    bad.n_learners = 0;
    CHECK_THROWS_AS(BaggedTrees::fit(x, y, bad), ConfigError);
    CHECK_THROWS_AS(BaggedTrees::from_state({}, BagOptions{}), DataError);
}
