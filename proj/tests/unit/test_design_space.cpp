#include <gtest/gtest.h>

#include <set>

#include "blockprof/design_space.hpp"
#include "blockprof/errors.hpp"
#include "fixtures.hpp"

using namespace blockprof;

TEST(DesignSpace, PresetsLoad) {
  EXPECT_EQ(preset_space_names(), (std::vector<std::string>{"ofa", "proxylessnas", "resnet50"}));
  const auto ofa = load_space("ofa");
  EXPECT_EQ(ofa.unit_count(), 5u);
  EXPECT_EQ(ofa.resolutions, (std::vector<int>{192, 208, 224}));
  for (const auto& u : ofa.units) {
    EXPECT_EQ(u.depth_min, 2);
    EXPECT_EQ(u.depth_max, 4);
    EXPECT_EQ(u.blocks.size(), 9u);
  }
  const auto r50 = load_space("resnet50");
  EXPECT_EQ(r50.family, BlockFamily::ResNetBottleneck);
  EXPECT_EQ(r50.unit(3).depth_min, 4);
  EXPECT_EQ(r50.unit(3).depth_max, 6);
  EXPECT_EQ(r50.unit(1).channel_ratios.size(), 3u);
}

TEST(DesignSpace, UnknownSpaceIsNotFound) { EXPECT_THROW(load_space("vgg"), NotFoundError); }

TEST(DesignSpace, ConfigErrorsNameThePath) {
  auto broken = std::string(fixtures::kMiniSpace);
  broken.replace(broken.find("\"depth_min\": 1"), 14, "\"depth_min\": 3");
  try {
    parse_space_config(broken);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("units[0]"), std::string::npos) << e.what();
  }
  EXPECT_THROW(parse_space_config("{ not json"), ParseError);
  EXPECT_THROW(parse_space_config(R"({"name":"x","family":"MBConvV3","resolutions":[224],"units":[
      {"depth_min":1,"depth_max":1,"base_channels":8,"blocks":["MBConv9-9"]}]})"),
               ParseError);
}

TEST(DesignSpace, ConfigRoundTrip) {
  for (const auto& name : preset_space_names()) {
    const auto s = load_space(name);
    EXPECT_EQ(space_from_json(space_to_json(s)), s) << name;
  }
}

TEST(DesignSpace, RecordRoundTrip) {
  for (const auto& name : preset_space_names()) {
    const auto s = load_space(name);
    Rng rng = derive_rng(11, {1});
    for (int i = 0; i < 200; ++i) {
      const auto a = sample_uniform(s, rng);
      const auto text = serialize(a, s);
      EXPECT_EQ(deserialize(text, s), a) << text;
      EXPECT_EQ(serialize(deserialize(text, s), s), text);
    }
  }
}

TEST(DesignSpace, ValidationRejectsBadRecords) {
  const auto s = load_space("ofa");
  Rng rng = derive_rng(3);
  auto a = sample_uniform(s, rng);
  EXPECT_TRUE(is_valid(a, s));

  auto bad = a;
  bad.resolution = 200;
  EXPECT_THROW(validate(bad, s), ValidationError);
  bad = a;
  bad.blocks[0].resize(5, BlockId{0});
  EXPECT_THROW(validate(bad, s), ValidationError);
  bad = a;
  bad.blocks[0].resize(1);
  EXPECT_FALSE(is_valid(bad, s));
  bad = a;
  bad.space = "resnet50";
  EXPECT_FALSE(is_valid(bad, s));
  EXPECT_THROW(deserialize("{\"space\": 3}", s), ValidationError);
  EXPECT_THROW(deserialize("nonsense", s), ValidationError);
}

TEST(DesignSpace, SerializedRecordIsCompactAndUsesCodes) {
  const auto s = fixtures::mini_space();
  Architecture a{"mini", 160, {{BlockId{0}}, {BlockId{4}, BlockId{8}}}, {}};
  EXPECT_EQ(serialize(a, s), R"({"space":"mini","resolution":160,"depths":[1,2],"blocks":[["B1"],["B5","B9"]]})");
}

TEST(DesignSpace, SamplesAreValidAndCoverChoices) {
  const auto s = load_space("resnet50");
  Rng rng = derive_rng(5);
  std::set<int> depths;
  std::set<double> ratios;
  for (int i = 0; i < 2000; ++i) {
    const auto a = sample_uniform(s, rng);
    ASSERT_TRUE(is_valid(a, s));
    depths.insert(a.depth(2));
    ratios.insert(a.channel_ratios[0]);
  }
  EXPECT_EQ(depths, (std::set<int>{4, 5, 6}));
  EXPECT_EQ(ratios.size(), 3u);
}

TEST(DesignSpace, PinnedResolution) {
  const auto s = load_space("ofa");
  Rng rng = derive_rng(5);
  for (int i = 0; i < 50; ++i) EXPECT_EQ(sample_uniform(s, rng, 208).resolution, 208);
  EXPECT_THROW(sample_uniform(s, rng, 100), DomainError);
}

TEST(DesignSpace, SampleFixedHonoursThePlacement) {
  const auto s = load_space("ofa");
  Rng rng = derive_rng(9);
  const Placement p{3, 4, BlockId{8}, std::nullopt};
  for (int i = 0; i < 500; ++i) {
    const auto a = sample_fixed(s, p, rng);
    ASSERT_TRUE(is_valid(a, s));
    ASSERT_EQ(a.depth(2), 4);
    ASSERT_EQ(a.blocks[2][3], BlockId{8});
  }
  const Placement shallow{1, 1, BlockId{0}, std::nullopt};
  std::set<int> depths;
  for (int i = 0; i < 500; ++i) depths.insert(sample_fixed(s, shallow, rng).depth(0));
  EXPECT_EQ(depths, (std::set<int>{2, 3, 4}));
}

TEST(DesignSpace, PlacementChecks) {
  const auto ofa = load_space("ofa");
  EXPECT_THROW(check_placement(ofa, {6, 1, BlockId{0}, std::nullopt}), DomainError);
  EXPECT_THROW(check_placement(ofa, {1, 5, BlockId{0}, std::nullopt}), DomainError);
  EXPECT_THROW(check_placement(ofa, {1, 1, BlockId{0}, 0.8}), DomainError);
  const auto r50 = load_space("resnet50");
  EXPECT_THROW(check_placement(r50, {1, 1, BlockId{0}, std::nullopt}), DomainError);
  EXPECT_NO_THROW(check_placement(r50, {1, 1, BlockId{0}, 0.8}));
  EXPECT_EQ(placement_code(r50, {1, 1, BlockId{1}, 0.8}), "C80-B25");
}

TEST(DesignSpace, PlacementEnumeration) {
  EXPECT_EQ(enumerate_placements(load_space("ofa")).size(), 180u);
  EXPECT_EQ(enumerate_placements(load_space("proxylessnas")).size(), 189u);
  EXPECT_EQ(enumerate_placements(load_space("resnet50")).size(), 162u);

  const auto ps = enumerate_placements(fixtures::mini_space());
  ASSERT_EQ(ps.size(), 12u);
  EXPECT_EQ(ps[0], (Placement{1, 1, BlockId{0}, std::nullopt}));
  EXPECT_EQ(ps[3], (Placement{1, 2, BlockId{0}, std::nullopt}));
  EXPECT_EQ(ps[11], (Placement{2, 2, BlockId{8}, std::nullopt}));
}

TEST(DesignSpace, PlacementsOfABlock) {
  const auto ofa = load_space("ofa");
  EXPECT_EQ(placements_of(ofa, "B9").size(), 20u);
  EXPECT_TRUE(placements_of(ofa, "B20").empty());
  const auto r50 = load_space("resnet50");
  EXPECT_EQ(placements_of(r50, "C65-B20").size(), 18u);
  EXPECT_EQ(profile_block_codes(r50).size(), 9u);
}
