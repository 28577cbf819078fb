#include <doctest.h>

#include <cmath>
#include <functional>
#include <limits>

#include "midrank/rng.hpp"
#include "midrank/types.hpp"

using namespace midrank;

namespace {

errc code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return errc::io_error;
}

Permutation random_permutation(std::size_t n, std::mt19937_64& rng) {
  std::vector<int> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = static_cast<int>(i);
  shuffle_in_place(order, rng);
  return Permutation::from_order(std::move(order));
}

}  // namespace

TEST_SUITE_BEGIN("core");

TEST_CASE("make_permutation accepts bijections") {
  CHECK(make_permutation({0, 1, 2}).order() == std::vector<int>{0, 1, 2});
  CHECK(make_permutation({2, 0, 1}).order() == std::vector<int>{2, 0, 1});
}

TEST_CASE("make_permutation rejects invalid orders") {
  CHECK(code_of([] { make_permutation({0, 0, 1}); }) == errc::duplicate_index);
  CHECK(code_of([] { make_permutation({0, 1, 3}); }) == errc::index_out_of_range);
  CHECK(code_of([] { make_permutation({-1, 0}); }) == errc::index_out_of_range);
  CHECK(code_of([] { make_permutation({0}); }) == errc::too_short);
}

TEST_CASE("consecutive_subsequences window math") {
  CHECK(consecutive_subsequences(20, 7).size() == 14);
  CHECK(consecutive_subsequences(5, 5).size() == 1);
  CHECK(consecutive_subsequences(5, 5)[0] == Window{0, 5});
  CHECK(code_of([] { consecutive_subsequences(3, 4); }) ==
        errc::lambda_out_of_range);
  CHECK(code_of([] { consecutive_subsequences(5, 1); }) ==
        errc::lambda_out_of_range);

  auto windows = consecutive_subsequences(10, 3);
  for (std::size_t j = 0; j < windows.size(); ++j) {
    CHECK(windows[j].start == j);
    CHECK(windows[j].length() == 3);
  }
}

TEST_CASE("windows cover every adjacent pair") {
  // The transitivity argument needs each (i, i+1) inside some window.
  for (std::size_t len = 2; len <= 12; ++len) {
    for (int lambda = 2; static_cast<std::size_t>(lambda) <= len; ++lambda) {
      auto windows = consecutive_subsequences(len, lambda);
      for (std::size_t i = 0; i + 1 < len; ++i) {
        bool covered = false;
        for (const auto& w : windows) {
          if (w.start <= i && i + 1 < w.end) covered = true;
        }
        CHECK(covered);
      }
    }
  }
}

TEST_CASE("l2_normalize") {
  CHECK(l2_normalize({3, 4}) == FeatureVector{0.6, 0.8});
  CHECK(l2_normalize({0, 0}) == FeatureVector{0, 0});
  CHECK(l2_normalize({1, 0, 0}) == FeatureVector{1, 0, 0});
  CHECK(code_of([] {
          l2_normalize({1.0, std::numeric_limits<double>::quiet_NaN()});
        }) == errc::non_finite_entry);
  CHECK(code_of([] {
          l2_normalize({std::numeric_limits<double>::infinity()});
        }) == errc::non_finite_entry);

  auto rng = make_rng(11);
  std::normal_distribution<double> gauss;
  for (int trial = 0; trial < 100; ++trial) {
    FeatureVector v(8);
    for (double& x : v) x = 3.0 * gauss(rng);
    FeatureVector u = l2_normalize(v);
    double norm_sq = 0.0;
    for (double x : u) norm_sq += x * x;
    CHECK(std::abs(std::sqrt(norm_sq) - 1.0) < 1e-9);
  }
}

TEST_CASE("permutation composed with its inverse is the identity") {
  auto rng = make_rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + uniform_below(rng, 9);
    Permutation p = random_permutation(n, rng);
    CHECK(p.compose(p.inverse()) == Permutation::identity(n));
    CHECK(p.inverse().compose(p) == Permutation::identity(n));
  }
}

TEST_CASE("ranks invert order") {
  Permutation p = make_permutation({2, 0, 3, 1});
  // item 2 sits at rank 0, item 0 at rank 1, ...
  CHECK(p.ranks() == std::vector<int>{1, 3, 0, 2});
}

TEST_CASE("sequence validation") {
  Sequence seq;
  seq.id = "s";
  seq.items = {{1.0, 0.0}, {0.0, 1.0}};
  CHECK_NOTHROW(validate(seq));

  seq.ground_truth = make_permutation({1, 0});
  CHECK_NOTHROW(validate(seq));

  Sequence mixed = seq;
  mixed.items.push_back({1.0});
  CHECK(code_of([&] { validate(mixed); }) == errc::dimension_mismatch);

  Sequence short_gt = seq;
  short_gt.items.push_back({0.5, 0.5});
  CHECK(code_of([&] { validate(short_gt); }) == errc::invariant_violation);
}

TEST_SUITE_END();
