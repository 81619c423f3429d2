// -*- mode:C++; tab-width:8; c-basic-offset:2; indent-tabs-mode:nil -*-
#include "ecsim/rs_codec.h"

#include <algorithm>
#include <string>

#include "ecsim/errors.h"

namespace ecsim {

using gf256::element;

CodeParams::CodeParams(std::size_t k_, std::size_t m_, std::size_t chunk_bytes_)
  : k(k_), m(m_), chunk_bytes(chunk_bytes_)
{
  if (k == 0 || m == 0 || chunk_bytes == 0)
    throw shape_error("CodeParams: k, m and chunk_bytes must all be >= 1");
}

GfMatrix::GfMatrix(std::size_t rows, std::size_t cols,
                   std::vector<element> elements)
  : rows_(rows), cols_(cols), elements_(std::move(elements))
{
  if (elements_.size() != rows_ * cols_)
    throw shape_error("GfMatrix: element count does not match dimensions");
}

GfMatrix GfMatrix::identity(std::size_t n)
{
  GfMatrix id(n, n);
  for (std::size_t i = 0; i < n; ++i)
    id.at(i, i) = 1;
  return id;
}

GfMatrix GfMatrix::select_rows(std::span<const std::size_t> indices) const
{
  GfMatrix out(indices.size(), cols_);
  for (std::size_t r = 0; r < indices.size(); ++r) {
    if (indices[r] >= rows_)
      throw shape_error("GfMatrix: row index out of range");
    std::copy_n(elements_.begin() + indices[r] * cols_, cols_,
                out.elements_.begin() + r * cols_);
  }
  return out;
}

GfMatrix GfMatrix::operator*(const GfMatrix& rhs) const
{
  if (cols_ != rhs.rows_)
    throw shape_error("GfMatrix: dimension mismatch in product");
  GfMatrix out(rows_, rhs.cols_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < rhs.cols_; ++j) {
      element acc = 0;
      for (std::size_t t = 0; t < cols_; ++t)
        acc ^= gf256::mul(at(i, t), rhs.at(t, j));
      out.at(i, j) = acc;
    }
  return out;
}

GfMatrix build_extended_vandermonde(std::size_t k, std::size_t m)
{
  if (k == 0 || m == 0)
    throw shape_error("extended Vandermonde: k and m must be >= 1");
  const std::size_t rows = k + m;
  if (rows > 255)
    throw capacity_error("extended Vandermonde: k + m = " +
                         std::to_string(rows) + " exceeds 255");

  GfMatrix v(rows, k);
  v.at(0, 0) = 1;
  v.at(rows - 1, k - 1) = 1;
  for (std::size_t i = 1; i + 1 < rows; ++i) {
    element term = 1;
    for (std::size_t j = 0; j < k; ++j) {
      v.at(i, j) = term;
      term = gf256::mul(term, static_cast<element>(i));
    }
  }
  return v;
}

namespace {

void swap_columns(GfMatrix& g, std::size_t a, std::size_t b)
{
  for (std::size_t r = 0; r < g.rows(); ++r)
    std::swap(g.at(r, a), g.at(r, b));
}

void scale_column(GfMatrix& g, std::size_t c, element factor,
                  std::size_t first_row = 0)
{
  for (std::size_t r = first_row; r < g.rows(); ++r)
    g.at(r, c) = gf256::mul(g.at(r, c), factor);
}

// col[dst] += factor * col[src]
void add_column(GfMatrix& g, std::size_t dst, std::size_t src, element factor)
{
  for (std::size_t r = 0; r < g.rows(); ++r)
    g.at(r, dst) ^= gf256::mul(factor, g.at(r, src));
}

} // namespace

GfMatrix derive_generator(const GfMatrix& ext, std::size_t k)
{
  if (ext.cols() != k || ext.rows() <= k)
    throw shape_error("derive_generator: expected a (k+m) x k matrix");

  GfMatrix g = ext;
  for (std::size_t i = 0; i < k; ++i) {
    if (g.at(i, i) == 0) {
      std::size_t c = i + 1;
      while (c < k && g.at(i, c) == 0)
        ++c;
      if (c == k)
        throw internal_error("derive_generator: top k x k block is singular");
      swap_columns(g, i, c);
    }
    if (g.at(i, i) != 1)
      scale_column(g, i, gf256::inv(g.at(i, i)));
    for (std::size_t c = 0; c < k; ++c) {
      if (c != i && g.at(i, c) != 0)
        add_column(g, c, i, g.at(i, c));
    }
  }

  // First coding row to all ones: scaling a coding column by a constant is
  // equivalent to scaling the matching identity row, which keeps the code MDS.
  for (std::size_t c = 0; c < k; ++c) {
    const element e = g.at(k, c);
    if (e == 0)
      throw internal_error("derive_generator: zero in first coding row");
    if (e != 1)
      scale_column(g, c, gf256::inv(e), k);
  }
  for (std::size_t r = k + 1; r < g.rows(); ++r) {
    const element lead = g.at(r, 0);
    if (lead == 0)
      throw internal_error("derive_generator: zero in coding column 0");
    if (lead != 1) {
      const element f = gf256::inv(lead);
      for (std::size_t c = 0; c < k; ++c)
        g.at(r, c) = gf256::mul(g.at(r, c), f);
    }
  }
  return g;
}

GfMatrix invert_matrix(const GfMatrix& mat)
{
  if (mat.rows() != mat.cols())
    throw shape_error("invert_matrix: matrix is not square");
  const std::size_t n = mat.rows();
  GfMatrix a = mat;
  GfMatrix inv = GfMatrix::identity(n);

  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    while (pivot < n && a.at(pivot, col) == 0)
      ++pivot;
    if (pivot == n)
      throw singular_matrix_error(col);
    if (pivot != col) {
      for (std::size_t c = 0; c < n; ++c) {
        std::swap(a.at(pivot, c), a.at(col, c));
        std::swap(inv.at(pivot, c), inv.at(col, c));
      }
    }
    const element scale = gf256::inv(a.at(col, col));
    for (std::size_t c = 0; c < n; ++c) {
      a.at(col, c) = gf256::mul(a.at(col, c), scale);
      inv.at(col, c) = gf256::mul(inv.at(col, c), scale);
    }
    for (std::size_t r = 0; r < n; ++r) {
      const element f = a.at(r, col);
      if (r == col || f == 0)
        continue;
      for (std::size_t c = 0; c < n; ++c) {
        a.at(r, c) ^= gf256::mul(f, a.at(col, c));
        inv.at(r, c) ^= gf256::mul(f, inv.at(col, c));
      }
    }
  }
  return inv;
}

RsCodec::RsCodec(CodeParams params)
  : params_(params),
    generator_(derive_generator(build_extended_vandermonde(params.k, params.m),
                                params.k))
{}

void RsCodec::encode(std::span<const std::span<const std::uint8_t>> data,
                     std::span<const std::span<std::uint8_t>> coding) const
{
  const std::size_t k = params_.k;
  if (data.size() != k || coding.size() != params_.m)
    throw shape_error("encode: expected k data and m coding buffers");
  for (std::size_t i = 0; i < coding.size(); ++i) {
    auto out = coding[i];
    std::fill(out.begin(), out.end(), 0);
    for (std::size_t j = 0; j < k; ++j) {
      if (data[j].size() != out.size())
        throw shape_error("encode: buffer length mismatch");
      gf256::mul_add_region(generator_.at(k + i, j), data[j], out);
    }
  }
}

namespace {

void check_payload(const CodeParams& p, const Chunk& c, const char* who)
{
  if (c.payload.size() != p.chunk_bytes)
    throw shape_error(std::string(who) + ": chunk " + std::to_string(c.index) +
                      " has " + std::to_string(c.payload.size()) +
                      " bytes, expected " + std::to_string(p.chunk_bytes));
}

} // namespace

std::vector<Chunk> RsCodec::encode(std::span<const Chunk> data) const
{
  if (data.size() != params_.k)
    throw shape_error("encode: expected " + std::to_string(params_.k) +
                      " data chunks, got " + std::to_string(data.size()));
  std::vector<std::span<const std::uint8_t>> in;
  for (const auto& c : data) {
    check_payload(params_, c, "encode");
    in.emplace_back(c.payload);
  }
  std::vector<Chunk> coding;
  std::vector<std::span<std::uint8_t>> out;
  coding.reserve(params_.m);
  for (std::size_t i = 0; i < params_.m; ++i)
    coding.push_back(Chunk::make(params_, params_.k + i,
                                 std::vector<std::uint8_t>(params_.chunk_bytes)));
  for (auto& c : coding)
    out.emplace_back(c.payload);
  encode(in, out);
  return coding;
}

std::vector<Chunk> RsCodec::decode(std::span<const Chunk> available) const
{
  const std::size_t k = params_.k;
  const std::size_t n = params_.width();
  if (available.size() < k)
    throw insufficient_data_error("decode: " + std::to_string(available.size()) +
                                  " chunks supplied, need " + std::to_string(k));
  std::vector<bool> seen(n, false);
  for (const auto& c : available) {
    if (c.index >= n)
      throw shape_error("decode: chunk index " + std::to_string(c.index) +
                        " out of range");
    if (seen[c.index])
      throw shape_error("decode: duplicate chunk index " +
                        std::to_string(c.index));
    seen[c.index] = true;
    check_payload(params_, c, "decode");
  }

  const auto used = available.first(k);
  std::vector<std::size_t> indices;
  for (const auto& c : used)
    indices.push_back(c.index);

  std::vector<Chunk> out(k);
  if (std::all_of(indices.begin(), indices.end(),
                  [k](std::size_t i) { return i < k; })) {
    for (const auto& c : used)
      out[c.index] = c;
    return out;
  }

  const GfMatrix recover = invert_matrix(generator_.select_rows(indices));
  for (std::size_t i = 0; i < k; ++i) {
    out[i] = Chunk::make(params_, i, std::vector<std::uint8_t>(params_.chunk_bytes));
    for (std::size_t j = 0; j < k; ++j)
      gf256::mul_add_region(recover.at(i, j), used[j].payload, out[i].payload);
  }
  return out;
}

Stripe RsCodec::make_stripe(std::vector<Chunk> data) const
{
  auto coding = encode(data);
  Stripe s{params_, std::move(data)};
  for (auto& c : coding)
    s.chunks.push_back(std::move(c));
  return s;
}

std::vector<Chunk> encode(const CodeParams& params, std::span<const Chunk> data)
{
  return RsCodec(params).encode(data);
}

std::vector<Chunk> decode(const CodeParams& params,
                          std::span<const Chunk> available)
{
  return RsCodec(params).decode(available);
}

std::vector<std::uint8_t> concatenate(const CodeParams& params,
                                      std::span<const Chunk> data)
{
  if (data.size() != params.k)
    throw shape_error("concatenate: all k data chunks are required; use decode");
  std::vector<std::uint8_t> out(params.stripe_width_bytes());
  std::vector<bool> seen(params.k, false);
  for (const auto& c : data) {
    if (c.index >= params.k || seen[c.index])
      throw shape_error("concatenate: expected data chunks 0..k-1 exactly once");
    seen[c.index] = true;
    check_payload(params, c, "concatenate");
    std::copy(c.payload.begin(), c.payload.end(),
              out.begin() + c.index * params.chunk_bytes);
  }
  return out;
}

} // namespace ecsim
