// -*- mode:C++; tab-width:8; c-basic-offset:2; indent-tabs-mode:nil -*-
#include "ecsim/gf256.h"

#include <cassert>

#include "ecsim/errors.h"

namespace ecsim::gf256 {

tables::tables()
{
  unsigned x = 1;
  for (unsigned e = 0; e < 255; ++e) {
    antilog_[e] = static_cast<element>(x);
    antilog_[e + 255] = static_cast<element>(x);
    log_[x] = static_cast<std::uint8_t>(e);
    x <<= 1;  // multiply by the generator 2
    if (x & 0x100)
      x ^= kPolynomial;
  }
  assert(x == 1);

  for (unsigned a = 0; a < 256; ++a) {
    for (unsigned b = 0; b < 256; ++b) {
      mul_[a][b] = (a == 0 || b == 0)
        ? 0
        : antilog_[log_[a] + log_[b]];
    }
  }
}

const tables& tables::instance()
{
  static const tables t;
  return t;
}

element mul(element a, element b)
{
  return tables::instance().mul_[a][b];
}

element inv(element a)
{
  if (a == 0)
    throw domain_error("gf256: zero has no multiplicative inverse");
  const auto& t = tables::instance();
  return t.antilog_[255 - t.log_[a]];
}

element div(element a, element b)
{
  if (b == 0)
    throw domain_error("gf256: division by zero");
  return mul(a, inv(b));
}

void mul_add_region(element c, std::span<const std::uint8_t> src,
                    std::span<std::uint8_t> dst)
{
  assert(src.size() == dst.size());
  if (c == 0)
    return;
  if (c == 1) {
    for (std::size_t i = 0; i < src.size(); ++i)
      dst[i] ^= src[i];
    return;
  }
  const auto& row = tables::instance().product_row(c);
  for (std::size_t i = 0; i < src.size(); ++i)
    dst[i] ^= row[src[i]];
}

void mul_region(element c, std::span<const std::uint8_t> src,
                std::span<std::uint8_t> dst)
{
  assert(src.size() == dst.size());
  const auto& row = tables::instance().product_row(c);
  for (std::size_t i = 0; i < src.size(); ++i)
    dst[i] = row[src[i]];
}

} // namespace ecsim::gf256
