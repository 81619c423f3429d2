// -*- mode:C++; tab-width:8; c-basic-offset:2; indent-tabs-mode:nil -*-
#include <gtest/gtest.h>

#include <vector>

#include "ecsim/errors.h"
#include "ecsim/gf256.h"
#include "oracles.h"

using namespace ecsim;

TEST(gf256, add)
{
  EXPECT_EQ(gf256::add(0x00, 0x5A), 0x5A);
  EXPECT_EQ(gf256::add(0xFF, 0xFF), 0x00);
  EXPECT_EQ(gf256::add(0x53, 0xCA), 0x99);
}

TEST(gf256, mul_examples)
{
  EXPECT_EQ(gf256::mul(0x37, 0x01), 0x37);
  EXPECT_EQ(gf256::mul(0x9C, 0x00), 0x00);
  EXPECT_EQ(gf256::mul(0x02, 0x80), 0x1D);
}

TEST(gf256, mul_matches_peasant_oracle)
{
  for (int a = 0; a < 256; ++a)
    for (int b = 0; b < 256; ++b)
      ASSERT_EQ(gf256::mul(a, b), oracle::peasant_mul(a, b)) << a << " * " << b;
}

TEST(gf256, mul_commutative_and_distributive)
{
  for (int a = 0; a < 256; a += 7)
    for (int b = 0; b < 256; b += 5)
      for (int c = 0; c < 256; c += 11) {
        ASSERT_EQ(gf256::mul(a, b), gf256::mul(b, a));
        ASSERT_EQ(gf256::mul(a, gf256::add(b, c)),
                  gf256::add(gf256::mul(a, b), gf256::mul(a, c)));
      }
}

TEST(gf256, inv)
{
  EXPECT_EQ(gf256::inv(0x01), 0x01);
  EXPECT_EQ(gf256::inv(0x02), 0x8E);
  EXPECT_THROW(gf256::inv(0x00), domain_error);
  for (int a = 1; a < 256; ++a)
    ASSERT_EQ(gf256::inv(a), oracle::brute_inv(a)) << a;
}

TEST(gf256, div)
{
  EXPECT_EQ(gf256::div(0x42, 0x42), 0x01);
  EXPECT_EQ(gf256::div(0x00, 0x7F), 0x00);
  EXPECT_EQ(gf256::div(0x1D, 0x02), 0x80);
  EXPECT_THROW(gf256::div(0x10, 0x00), domain_error);
  for (int a = 0; a < 256; a += 3)
    for (int b = 1; b < 256; b += 2)
      ASSERT_EQ(gf256::mul(gf256::div(a, b), b), a);
}

TEST(gf256, tables_cover_group)
{
  const auto& t = gf256::tables::instance();
  std::vector<bool> seen(256, false);
  for (int e = 0; e < 255; ++e) {
    const auto v = t.antilog(e);
    ASSERT_NE(v, 0);
    ASSERT_FALSE(seen[v]) << "generator 2 repeats at exponent " << e;
    seen[v] = true;
    ASSERT_EQ(t.log(v), e);
    ASSERT_EQ(v, oracle::pow(gf256::kGenerator, e));
  }
}

TEST(gf256, regions)
{
  std::vector<std::uint8_t> src = oracle::splitmix_bytes(5, 333);
  std::vector<std::uint8_t> dst = oracle::splitmix_bytes(6, 333);
  std::vector<std::uint8_t> expect = dst;
  for (std::size_t i = 0; i < src.size(); ++i)
    expect[i] ^= oracle::peasant_mul(0xA7, src[i]);
  gf256::mul_add_region(0xA7, src, dst);
  EXPECT_EQ(dst, expect);

  gf256::mul_region(0x03, src, dst);
  for (std::size_t i = 0; i < src.size(); ++i)
    ASSERT_EQ(dst[i], oracle::peasant_mul(0x03, src[i]));
}
