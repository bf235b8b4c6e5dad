#include <cmath>
#include <cstdio>
#include <filesystem>

#include <doctest.h>

#include "slf/metrics.hpp"
#include "slf/rng.hpp"
#include "test_util.hpp"

using namespace slf;
using test::random_vector;

TEST_SUITE_BEGIN("metrics");

TEST_CASE("hand values") {
  const std::vector<double> pred{0.0, 0.0}, target{3.0, 4.0};
  CHECK(rmse(pred, target) == doctest::Approx(std::sqrt(12.5)).epsilon(1e-12));
  CHECK(mae(pred, target) == doctest::Approx(3.5).epsilon(1e-12));
  CHECK(nrmse(std::vector{1.0, 1.0}, std::vector{1.0, 2.0}, 0.0, 4.0) ==
        doctest::Approx(std::sqrt(0.5) / 4.0));

  CHECK(rmse(target, target) == 0.0);
  CHECK(mae(target, target) == 0.0);
  CHECK(nrmse(target, target, 0.0, 4.0) == 0.0);

  CHECK_THROWS_AS(rmse(std::vector{1.0}, std::vector{1.0, 2.0}), Error);
  CHECK_THROWS_AS(rmse(std::vector<double>{}, std::vector<double>{}), Error);
  CHECK_THROWS_AS(nrmse(pred, target, 2.0, 2.0), Error);
}

TEST_CASE("rmse dominates mae; both scale linearly") {
  Rng rng(31);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 1 + rng.below(16);
    const auto pred = random_vector(n, rng, -100.0, 100.0);
    const auto target = random_vector(n, rng, -100.0, 100.0);
    CHECK(rmse(pred, target) >= mae(pred, target) - 1e-12);
  }

  const std::vector<double> pred{1.0, 5.0}, target{2.0, 3.0};
  std::vector<double> pred3, target3;
  for (double v : pred) pred3.push_back(3.0 * v);
  for (double v : target) target3.push_back(3.0 * v);
  CHECK(rmse(pred3, target3) == doctest::Approx(3.0 * rmse(pred, target)));
  CHECK(mae(pred3, target3) == doctest::Approx(3.0 * mae(pred, target)));
  // nrmse is invariant when the range scales along
  CHECK(nrmse(pred3, target3, 0.0, 30.0) ==
        doctest::Approx(nrmse(pred, target, 0.0, 10.0)));
}

TEST_CASE("permutation invariance") {
  Rng rng(37);
  auto pred = random_vector(64, rng);
  auto target = random_vector(64, rng);
  const double r0 = rmse(pred, target);
  const double m0 = mae(pred, target);
  // one fixed permutation: reverse
  std::vector<double> pr(pred.rbegin(), pred.rend());
  std::vector<double> tr(target.rbegin(), target.rend());
  CHECK(rmse(pr, tr) == doctest::Approx(r0).epsilon(1e-12));
  CHECK(mae(pr, tr) == doctest::Approx(m0).epsilon(1e-12));
}

TEST_CASE("affine consistency of normalized and watt metrics") {
  // min-max normalization is affine, so errors cancel the offset and the
  // watt-scale rmse/mae equal the normalized ones times the range.
  Rng rng(41);
  const double mn = 10.0, mx = 2010.0, range = mx - mn;
  for (int trial = 0; trial < 50; ++trial) {
    const auto pred_norm = random_vector(32, rng, 0.0, 1.0);
    const auto target_norm = random_vector(32, rng, 0.0, 1.0);
    std::vector<double> pred_watts, target_watts;
    for (double v : pred_norm) pred_watts.push_back(mn + v * range);
    for (double v : target_norm) target_watts.push_back(mn + v * range);
    CHECK(std::abs(rmse(pred_watts, target_watts) -
                   rmse(pred_norm, target_norm) * range) < 1e-9);
    CHECK(std::abs(mae(pred_watts, target_watts) -
                   mae(pred_norm, target_norm) * range) < 1e-9);
  }
}

TEST_CASE("report csv round trip") {
  const std::string path =
      (std::filesystem::temp_directory_path() / "slf_metrics_test.csv").string();
  std::vector<MetricReport> reports(2);
  reports[0] = {"b0", "fridge", "seq2seq", 43.748, 0.174, 30.587, 360};
  reports[1] = {"b0", "lamp", "varma", 18.452, 0.45, 9.456, 360};
  write_metric_reports(reports, path);
  const auto back = read_metric_reports(path);
  REQUIRE(back.size() == 2);
  CHECK(back[0].building == "b0");
  CHECK(back[0].appliance == "fridge");
  CHECK(back[0].model == "seq2seq");
  CHECK(back[0].rmse == 43.748);
  CHECK(back[0].nrmse == 0.174);
  CHECK(back[0].mae == 30.587);
  CHECK(back[0].sample_count == 360);
  std::remove(path.c_str());
}

TEST_SUITE_END();
