#include <gtest/gtest.h>

#include "blockprof/catalog.hpp"
#include "blockprof/errors.hpp"

using namespace blockprof;

TEST(Catalog, MobileNetOrderIsExpansionMajor) {
  const auto cat = catalog(BlockFamily::MBConvV3);
  ASSERT_EQ(cat.size(), 9u);
  EXPECT_EQ(cat[0].name, "MBConv3-3");
  EXPECT_EQ(cat[2].name, "MBConv3-7");
  EXPECT_EQ(cat[3].name, "MBConv4-3");
  EXPECT_EQ(cat[8].code, "B9");
  EXPECT_DOUBLE_EQ(cat[8].expansion_ratio, 6.0);
  EXPECT_EQ(cat[8].kernel_size, 7);
}

TEST(Catalog, FindByCodeOrName) {
  EXPECT_EQ(find_block(BlockFamily::MBConvV2, "B5")->index, 4);
  EXPECT_EQ(find_block(BlockFamily::MBConvV2, "MBConv4-5")->index, 4);
  EXPECT_FALSE(find_block(BlockFamily::MBConvV3, "MBConv5-5").has_value());
  EXPECT_FALSE(find_block(BlockFamily::MBConvV3, "B20").has_value());
  EXPECT_EQ(find_block(BlockFamily::ResNetBottleneck, "B25")->index, 1);
  EXPECT_EQ(find_block(BlockFamily::ResNetBottleneck, "0.35")->index, 2);
}

TEST(Catalog, ParseBlockThrowsOnUnknown) {
  EXPECT_THROW(parse_block(BlockFamily::MBConvV3, "nope"), ValidationError);
  EXPECT_EQ(parse_block(BlockFamily::MBConvV3, "B1").index, 0);
}

TEST(Catalog, ChannelRatioIndex) {
  EXPECT_EQ(channel_ratio_index(0.65), 0u);
  EXPECT_EQ(channel_ratio_index(1.0), 2u);
  EXPECT_FALSE(channel_ratio_index(0.5).has_value());
}

TEST(Catalog, JointResNetCode) {
  EXPECT_EQ(resnet_joint_code(0.65, BlockId{0}), "C65-B20");
  EXPECT_EQ(resnet_joint_code(1.0, BlockId{2}), "C100-B35");
}

TEST(Catalog, FamilyAndActivationNamesRoundTrip) {
  for (auto f : {BlockFamily::MBConvV3, BlockFamily::MBConvV2, BlockFamily::ResNetBottleneck}) {
    EXPECT_EQ(parse_family(to_string(f)), f);
  }
  for (auto a : {Activation::ReLU, Activation::HSwish}) EXPECT_EQ(parse_activation(to_string(a)), a);
  EXPECT_THROW(parse_family("VGG"), ParseError);
  EXPECT_TRUE(is_mobilenet(BlockFamily::MBConvV2));
  EXPECT_FALSE(is_mobilenet(BlockFamily::ResNetBottleneck));
}
