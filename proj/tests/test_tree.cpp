#include <doctest.h>

#include <vector>

#include "s4cast/errors.hpp"
#include "s4cast/tree.hpp"

using namespace s4cast;

TEST_CASE("gini impurity on pinned count triples") {
    CHECK(gini_impurity({2, 1, 1}) == 0.625);
    CHECK(gini_impurity({4, 0, 0}) == 0.0);
    CHECK(gini_impurity({1, 1, 1}) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    CHECK(gini_impurity({1, 1, 0}) == 0.5);
    CHECK_THROWS_AS(gini_impurity({0, 0, 0}), DataError);
}

TEST_CASE("argmax ties break to the lowest class") {
    CHECK(argmax_index({1.0, 1.0, 0.5}) == 0);
    CHECK(argmax_index({0.1, 0.9, 0.9}) == 1);
    CHECK(argmax_index({0.0, 0.0, 0.0}) == 0);
    CHECK(argmax_index({0.0, 0.0, 1.0}) == 2);
}

TEST_CASE("a clean two-class column splits at the midpoint") {
    const auto x = FeatureMatrix::from_rows({{1.0}, {2.0}, {3.0}, {4.0}});
    const std::vector<int> y{0, 0, 1, 1};
    const Tree tree = Tree::fit(x, y, TreeOptions{});

    CHECK(tree.n_internal() == 1);
    CHECK(tree.n_leaves() == 2);
    const TreeNode& root = tree.nodes()[0];
    CHECK(root.feature == 0);
    CHECK(root.threshold == 2.5);
    CHECK(root.distribution[0] == 0.5);
    CHECK(root.distribution[1] == 0.5);

    const double left_row[] = {2.4};
    const double boundary_row[] = {2.5};
    CHECK(tree.predict_index(left_row) == 0);
    // Routing is value < threshold to the left, so the threshold itself
    // goes right.
    CHECK(tree.predict_index(boundary_row) == 1);
    CHECK(tree.predict_distribution(left_row)[0] == 1.0);
}

TEST_CASE("pure nodes are never split") {
    const auto x = FeatureMatrix::from_rows({{1.0}, {2.0}, {3.0}});
    const std::vector<int> y{2, 2, 2};
    const Tree tree = Tree::fit(x, y, TreeOptions{});
    CHECK(tree.n_internal() == 0);
    const double row[] = {9.9};
    CHECK(tree.predict_index(row) == 2);
    CHECK(tree.predict_distribution(row)[2] == 1.0);
}

TEST_CASE("identical feature values leave an unsplittable leaf") {
    const auto x = FeatureMatrix::from_rows({{5.0}, {5.0}, {5.0}});
    const std::vector<int> y{0, 1, 1};
    const Tree tree = Tree::fit(x, y, TreeOptions{});
    CHECK(tree.n_internal() == 0);
    const double row[] = {5.0};
    CHECK(tree.predict_index(row) == 1);
}

TEST_CASE("the split budget caps internal nodes globally") {
    // 8 distinct values, alternating labels: fully separating them needs 7
    // splits; the budget must stop growth early.
    const auto x = FeatureMatrix::from_rows(
        {{1.0}, {2.0}, {3.0}, {4.0}, {5.0}, {6.0}, {7.0}, {8.0}});
    const std::vector<int> y{0, 1, 0, 1, 0, 1, 0, 1};
    for (int budget : {1, 2, 3, 7}) {
        const Tree tree = Tree::fit(x, y, TreeOptions{budget});
        CHECK(tree.n_internal() == budget);
        CHECK(tree.n_leaves() == budget + 1);
    }
    const Tree full = Tree::fit(x, y, TreeOptions{100});
    CHECK(full.n_internal() == 7);  // growth stops at purity, not budget
    for (std::size_t r = 0; r < 8; ++r) {
        CHECK(full.predict_index(x.row(r)) == y[r]);
    }
}

TEST_CASE("training is deterministic") {
    const auto x = FeatureMatrix::from_rows(
        {{0.3, 1.0}, {0.1, 2.0}, {0.9, 0.5}, {0.7, 1.5}, {0.5, 0.1}, {0.2, 1.9}});
    const std::vector<int> y{0, 1, 2, 0, 1, 2};
    const Tree a = Tree::fit(x, y, TreeOptions{3});
    const Tree b = Tree::fit(x, y, TreeOptions{3});
    REQUIRE(a.nodes().size() == b.nodes().size());
    for (std::size_t i = 0; i < a.nodes().size(); ++i) {
        CHECK(a.nodes()[i].feature == b.nodes()[i].feature);
        CHECK(a.nodes()[i].threshold == b.nodes()[i].threshold);
        CHECK(a.nodes()[i].distribution == b.nodes()[i].distribution);
    }
}

TEST_CASE("integer weights match row duplication") {
    const auto x_weighted = FeatureMatrix::from_rows({{1.0}, {2.0}, {3.0}, {4.0}});
    const std::vector<int> y_weighted{0, 0, 1, 1};
    const std::vector<double> w{3.0, 1.0, 1.0, 1.0};

    const auto x_dup = FeatureMatrix::from_rows({{1.0}, {1.0}, {1.0}, {2.0}, {3.0}, {4.0}});
    const std::vector<int> y_dup{0, 0, 0, 0, 1, 1};

    const Tree a = Tree::fit_weighted(x_weighted, y_weighted, w, TreeOptions{});
    const Tree b = Tree::fit(x_dup, y_dup, TreeOptions{});
    REQUIRE(a.nodes().size() == b.nodes().size());
    for (std::size_t i = 0; i < a.nodes().size(); ++i) {
        CHECK(a.nodes()[i].feature == b.nodes()[i].feature);
        CHECK(a.nodes()[i].threshold == b.nodes()[i].threshold);
    }
    for (double v = 0.5; v < 5.0; v += 0.5) {
        const double row[] = {v};
        CHECK(a.predict_index(row) == b.predict_index(row));
    }
}

TEST_CASE("empty weight span means uniform") {
    const auto x = FeatureMatrix::from_rows({{1.0}, {2.0}, {3.0}, {4.0}});
    const std::vector<int> y{0, 0, 1, 1};
    const Tree a = Tree::fit_weighted(x, y, {}, TreeOptions{});
    const Tree b = Tree::fit(x, y, TreeOptions{});
    REQUIRE(a.nodes().size() == b.nodes().size());
    CHECK(a.nodes()[0].threshold == b.nodes()[0].threshold);
}

TEST_CASE("fit rejects inconsistent inputs") {
    const auto x = FeatureMatrix::from_rows({{1.0}, {2.0}});
    const std::vector<int> y_short{0};
    CHECK_THROWS_AS(Tree::fit(x, y_short, TreeOptions{}), DataError);

    const std::vector<int> y_bad{0, 7};
    CHECK_THROWS_AS(Tree::fit(x, y_bad, TreeOptions{}), DataError);

    FeatureMatrix empty;
    const std::vector<int> y_empty;
    CHECK_THROWS_AS(Tree::fit(empty, y_empty, TreeOptions{}), DataError);

    const std::vector<int> y{0, 1};
    const std::vector<double> negative{1.0, -0.5};
    CHECK_THROWS_AS(Tree::fit_weighted(x, y, negative, TreeOptions{}), DataError);
    const std::vector<double> zero{0.0, 0.0};
    CHECK_THROWS_AS(Tree::fit_weighted(x, y, zero, TreeOptions{}), DataError);
}

TEST_CASE("from_nodes validates structure") {
    // A valid stump.
    std::vector<TreeNode> good(3);
    good[0] = TreeNode{0, 2.5, 1, 2, {0.5, 0.5, 0.0}};
    good[1] = TreeNode{-1, 0.0, -1, -1, {1.0, 0.0, 0.0}};
    good[2] = TreeNode{-1, 0.0, -1, -1, {0.0, 1.0, 0.0}};
    const Tree t = Tree::from_nodes(good);
    const double row[] = {1.0};
    CHECK(t.predict_index(row) == 0);

    // Child index out of range.
    auto bad_child = good;
    bad_child[0].right = 9;
    CHECK_THROWS_AS(Tree::from_nodes(bad_child), DataError);

    // Backward reference (cycle risk).
    auto backward = good;
    backward[0].left = 0;
    CHECK_THROWS_AS(Tree::from_nodes(backward), DataError);

    // Feature index out of range.
    auto bad_feature = good;
    bad_feature[0].feature = static_cast<int>(FeatureVector::kNumFeatures);
    CHECK_THROWS_AS(Tree::from_nodes(bad_feature), DataError);

    // Distribution must sum to 1.
    auto bad_dist = good;
    bad_dist[1].distribution = {0.7, 0.0, 0.0};
    CHECK_THROWS_AS(Tree::from_nodes(bad_dist), DataError);

    CHECK_THROWS_AS(Tree::from_nodes({}), DataError);
}

TEST_CASE("two-feature data picks the more informative feature") {
    // Feature 1 separates perfectly; feature 0 is noise.
    const auto x = FeatureMatrix::from_rows(
        {{5.0, 0.0}, {1.0, 0.1}, {4.0, 0.9}, {2.0, 1.0}});
    const std::vector<int> y{0, 0, 2, 2};
    const Tree tree = Tree::fit(x, y, TreeOptions{1});
    CHECK(tree.nodes()[0].feature == 1);
    CHECK(tree.nodes()[0].threshold == 0.5);
    for (std::size_t r = 0; r < 4; ++r) CHECK(tree.predict_index(x.row(r)) == y[r]);
}
