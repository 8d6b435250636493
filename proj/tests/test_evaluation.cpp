#include <doctest.h>

#include <json.hpp>

#include "helpers.hpp"
#include "specmcd/evaluation.hpp"

using namespace specmcd;

TEST_CASE("confusion counts classify every pixel") {
  SUBCASE("hand case") {
    const BinaryMask pred = testutil::make_mask(4, 1, {1, 1, 0, 0});
    const BinaryMask ref = testutil::make_mask(4, 1, {1, 0, 1, 0});
    const ConfusionCounts c = confusion(pred, ref);
    CHECK(c.tp == 1);
    CHECK(c.fp == 1);
    CHECK(c.fn == 1);
    CHECK(c.tn == 1);
    CHECK(c.total() == 4);
  }
  SUBCASE("perfect prediction has no errors") {
    const BinaryMask m = testutil::make_mask(2, 2, {1, 0, 0, 1});
    const ConfusionCounts c = confusion(m, m);
    CHECK(c.fp == 0);
    CHECK(c.fn == 0);
    CHECK(c.tp == 2);
    CHECK(c.tn == 2);
  }
  SUBCASE("full prediction against an empty reference is all false positives") {
    BinaryMask pred = BinaryMask::zeros(10, 10);
    std::fill(pred.values.begin(), pred.values.end(), 1);
    const ConfusionCounts c = confusion(pred, BinaryMask::zeros(10, 10));
    CHECK(c.fp == 100);
    CHECK(c.tp == 0);
    CHECK(c.fn == 0);
    CHECK(c.tn == 0);
  }
  SUBCASE("shape mismatch is rejected") {
    CHECK_THROWS_AS(confusion(BinaryMask::zeros(2, 2), BinaryMask::zeros(4, 1)),
                    Error);
  }
}

TEST_CASE("metrics follow their closed forms") {
  // tp=8, fp=2, fn=4, tn=6: precision 0.8, recall 2/3, F1 = 8/11 and
  // F2 = 20/29 by direct substitution.
  const ConfusionCounts c{8, 2, 4, 6};
  const Metrics m = compute_metrics(c);
  CHECK(m.oa == doctest::Approx(14.0 / 20.0).epsilon(1e-12));
  CHECK(m.precision == doctest::Approx(0.8).epsilon(1e-12));
  CHECK(m.recall == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(m.f1 == doctest::Approx(8.0 / 11.0).epsilon(1e-12));
  CHECK(m.f2 == doctest::Approx(20.0 / 29.0).epsilon(1e-12));
  CHECK(m.flags.empty());
}

TEST_CASE("f2 rewards recall harder than f1") {
  const ConfusionCounts c{8, 4, 1, 10};  // recall above precision
  const Metrics m = compute_metrics(c);
  CHECK(m.recall > m.precision);
  CHECK(m.f2 > m.f1);
}

TEST_CASE("zero denominators flag the metric instead of producing NaN") {
  // Empty prediction and empty reference: only true negatives.
  const ConfusionCounts c{0, 0, 0, 16};
  const Metrics m = compute_metrics(c);
  CHECK(m.oa == 1.0);
  CHECK(m.precision == 0.0);
  CHECK(m.recall == 0.0);
  CHECK(m.f1 == 0.0);
  CHECK(m.f2 == 0.0);
  REQUIRE(m.flags.size() == 4);
  CHECK(m.flags[0] == "precision-denominator-zero");
  CHECK(m.flags[1] == "recall-denominator-zero");
  CHECK(m.flags[2] == "f1-denominator-zero");
  CHECK(m.flags[3] == "f2-denominator-zero");
}

TEST_CASE("an empty confusion table is an error") {
  CHECK_THROWS_AS(compute_metrics(ConfusionCounts{}), Error);
}

TEST_CASE("metrics serialize as one JSON object") {
  const ConfusionCounts c{8, 2, 4, 6};
  const Metrics m = compute_metrics(c);
  const std::string text = metrics_json(m, c);
  REQUIRE(!text.empty());
  CHECK(text.back() == '\n');

  const auto j = nlohmann::json::parse(text);
  CHECK(j["oa"].get<double>() == doctest::Approx(0.7));
  CHECK(j["precision"].get<double>() == doctest::Approx(0.8));
  CHECK(j["recall"].get<double>() == doctest::Approx(2.0 / 3.0));
  CHECK(j["f1"].get<double>() == doctest::Approx(8.0 / 11.0));
  CHECK(j["f2"].get<double>() == doctest::Approx(20.0 / 29.0));
  CHECK(j["counts"]["tp"] == 8);
  CHECK(j["counts"]["fp"] == 2);
  CHECK(j["counts"]["fn"] == 4);
  CHECK(j["counts"]["tn"] == 6);
  CHECK(j["flags"].is_array());
  CHECK(j["flags"].empty());
}
