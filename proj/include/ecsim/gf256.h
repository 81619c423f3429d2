// -*- mode:C++; tab-width:8; c-basic-offset:2; indent-tabs-mode:nil -*-
#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>

namespace ecsim::gf256 {

/// Reduction polynomial x^8 + x^4 + x^3 + x^2 + 1.
inline constexpr unsigned kPolynomial = 0x11D;
inline constexpr unsigned kGenerator = 2;
inline constexpr unsigned kWordBits = 8;

using element = std::uint8_t;

/**
 * Log/antilog tables for GF(2^8), built once from kPolynomial.
 *
 * antilog is stored twice over (510 entries) so a product can index
 * log[a] + log[b] without a modulo.  The full 64KB product table backs
 * the region operations used by the codec.
 */
class tables {
public:
  static const tables& instance();

  std::uint8_t log(element a) const { return log_[a]; }
  element antilog(unsigned e) const { return antilog_[e % 255]; }
  const std::array<element, 256>& product_row(element a) const {
    return mul_[a];
  }

private:
  tables();

  std::array<std::uint8_t, 256> log_{};
  std::array<element, 510> antilog_{};
  std::array<std::array<element, 256>, 256> mul_{};

  friend element mul(element, element);
  friend element inv(element);
};

inline element add(element a, element b) { return a ^ b; }

element mul(element a, element b);

/// Throws ecsim::domain_error for a == 0.
element inv(element a);

/// Throws ecsim::domain_error for b == 0.
element div(element a, element b);

// dst[i] ^= c * src[i]
void mul_add_region(element c, std::span<const std::uint8_t> src,
                    std::span<std::uint8_t> dst);

// dst[i] = c * src[i]
void mul_region(element c, std::span<const std::uint8_t> src,
                std::span<std::uint8_t> dst);

} // namespace ecsim::gf256
