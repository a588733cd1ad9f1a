#include <gtest/gtest.h>

#include "gridstats/error.hpp"
#include "gridstats/serialization.hpp"

using namespace gridstats;
using nlohmann::json;

TEST(DistJson, Encoding) {
  const auto j = to_json(DistSpec::gev(41.08, 27.38, 0.3732));
  EXPECT_EQ(j, json::parse(R"({"family":"gev","params":{"mu":41.08,"sigma":27.38,"zeta":0.3732}})"));
  EXPECT_EQ(dist_from_json(j), DistSpec::gev(41.08, 27.38, 0.3732));
  EXPECT_EQ(dist_from_json(to_json(DistSpec::tls(0.1, 0.02, 3))), DistSpec::tls(0.1, 0.02, 3));
}

TEST(DistJson, InvalidInputsRejected) {
  EXPECT_THROW(dist_from_json(json::parse(R"({"family":"gev","params":{"mu":1,"sigma":1,"zeta":0}})")), Error);
  EXPECT_THROW(dist_from_json(json::parse(R"({"family":"lognormal","params":{"mu":1}})")), Error);
  EXPECT_THROW(dist_from_json(json::parse(R"({"family":"normal","params":{"mu":1}})")), Error);
}

TEST(ProfileJson, BuiltinRoundTrip) {
  const auto profile = builtin_profile();
  EXPECT_EQ(profile_from_json(json::parse(to_json(profile).dump())), profile);
}

TEST(ProfileJson, EntryFamilyMustMatchKind) {
  const auto j = json::parse(
      R"([{"kind":"transformer_mva_rating","class_kv":115,"fitted":{"family":"normal","params":{"mu":1,"sigma":1}}}])");
  EXPECT_THROW(profile_from_json(j), Error);
}

TEST(ThresholdsJson, PartialOverride) {
  const auto t = thresholds_from_json(json::parse(R"({"kl_max": 0.5})"));
  EXPECT_EQ(t.kl_max, 0.5);
  EXPECT_EQ(t.median_rel, ValidationThresholds{}.median_rel);
  EXPECT_THROW(thresholds_from_json(json::parse(R"({"kl_maximum": 0.5})")), Error);
  EXPECT_THROW(thresholds_from_json(json::parse(R"({"band_abs": -1})")), Error);
}

TEST(ReportJson, FindingsCarryThresholds) {
  ValidationReport report;
  Finding f;
  f.kind = ParameterKind::TransformerXr;
  f.class_kv = 138;
  f.check = CheckName::MedianCheck;
  f.observed = 30;
  f.expected_lo = f.expected_hi = 29.58;
  f.threshold_name = "median_rel";
  f.threshold = 0.25;
  report.findings.push_back(f);
  const auto j = to_json(report);
  EXPECT_EQ(j["overall_pass"], true);
  ASSERT_EQ(j["findings"].size(), 1u);
  EXPECT_EQ(j["findings"][0]["check"], "MedianCheck");
  EXPECT_EQ(j["findings"][0]["threshold"]["name"], "median_rel");
  EXPECT_EQ(j["thresholds"]["median_rel"], 0.25);
}
