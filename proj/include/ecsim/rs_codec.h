// -*- mode:C++; tab-width:8; c-basic-offset:2; indent-tabs-mode:nil -*-
#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "ecsim/gf256.h"

namespace ecsim {

inline constexpr std::size_t kDefaultChunkBytes = 4096;

/// RS(k, m) geometry. A stripe is k data chunks of chunk_bytes each.
struct CodeParams {
  std::size_t k = 6;
  std::size_t m = 3;
  std::size_t chunk_bytes = kDefaultChunkBytes;

  CodeParams() = default;
  /// Throws shape_error unless k, m, chunk_bytes >= 1.
  CodeParams(std::size_t k, std::size_t m,
             std::size_t chunk_bytes = kDefaultChunkBytes);

  std::size_t width() const { return k + m; }
  std::size_t stripe_width_bytes() const { return k * chunk_bytes; }

  bool operator==(const CodeParams&) const = default;
};

/// Dense row-major matrix over GF(2^8).
class GfMatrix {
public:
  GfMatrix() = default;
  GfMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), elements_(rows * cols, 0) {}
  GfMatrix(std::size_t rows, std::size_t cols,
           std::vector<gf256::element> elements);

  static GfMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  gf256::element& at(std::size_t r, std::size_t c) {
    return elements_[r * cols_ + c];
  }
  gf256::element at(std::size_t r, std::size_t c) const {
    return elements_[r * cols_ + c];
  }
  std::span<const gf256::element> row(std::size_t r) const {
    return {elements_.data() + r * cols_, cols_};
  }
  const std::vector<gf256::element>& elements() const { return elements_; }

  /// Copy of the listed rows, in the listed order.
  GfMatrix select_rows(std::span<const std::size_t> indices) const;

  GfMatrix operator*(const GfMatrix& rhs) const;
  bool operator==(const GfMatrix&) const = default;

private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<gf256::element> elements_;
};

enum class ChunkKind { data, coding };

struct Chunk {
  std::size_t index = 0;
  ChunkKind kind = ChunkKind::data;
  std::vector<std::uint8_t> payload;

  static Chunk make(const CodeParams& p, std::size_t index,
                    std::vector<std::uint8_t> payload) {
    return Chunk{index, index < p.k ? ChunkKind::data : ChunkKind::coding,
                 std::move(payload)};
  }
};

struct Stripe {
  CodeParams params;
  std::vector<Chunk> chunks;  // k data followed by m coding
};

/**
 * (k+m) x k extended Vandermonde matrix: row 0 is e_0, the last row is
 * e_{k-1}, and row i in between is the geometric sequence 1, i, i^2, ...
 * Throws capacity_error when k + m > 255.
 */
GfMatrix build_extended_vandermonde(std::size_t k, std::size_t m);

/**
 * Reduces an extended Vandermonde matrix to systematic form using column
 * operations: the top k rows become the identity and the first coding row
 * becomes all ones. Each later coding row is scaled so its first element
 * is 1. Column operations keep every k x k submatrix invertible.
 */
GfMatrix derive_generator(const GfMatrix& ext, std::size_t k);

/// Gauss-Jordan inverse. Throws singular_matrix_error naming the column.
GfMatrix invert_matrix(const GfMatrix& mat);

/**
 * Systematic RS codec over GF(2^8) with a generator derived from the
 * extended Vandermonde matrix. Immutable after construction.
 */
class RsCodec {
public:
  explicit RsCodec(CodeParams params);

  const CodeParams& params() const { return params_; }
  const GfMatrix& generator() const { return generator_; }

  /// Returns the m coding chunks for the k data chunks.
  std::vector<Chunk> encode(std::span<const Chunk> data) const;

  /// In-place variant over raw buffers; used by the storage backend.
  void encode(std::span<const std::span<const std::uint8_t>> data,
              std::span<const std::span<std::uint8_t>> coding) const;

  /**
   * Rebuilds the k data chunks from the first k entries of `available`.
   * If those are exactly the data chunks no field math is performed.
   */
  std::vector<Chunk> decode(std::span<const Chunk> available) const;

  /// Full stripe (data and coding) from the encoded data chunks.
  Stripe make_stripe(std::vector<Chunk> data) const;

private:
  CodeParams params_;
  GfMatrix generator_;
};

std::vector<Chunk> encode(const CodeParams& params, std::span<const Chunk> data);
std::vector<Chunk> decode(const CodeParams& params,
                          std::span<const Chunk> available);

/// Stripe payload from its k data chunks, data chunk 0 first.
std::vector<std::uint8_t> concatenate(const CodeParams& params,
                                      std::span<const Chunk> data);

} // namespace ecsim
