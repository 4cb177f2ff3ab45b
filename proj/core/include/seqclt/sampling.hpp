#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>

#include "seqclt/bitsource.hpp"

namespace seqclt {

enum class SchemeKind { triangular, fixed, affine };

// Bit range of one sample. `start` is a 1-based bit index.
struct BlockBounds {
  std::uint64_t start = 1;
  std::uint64_t size = 1;

  bool operator==(const BlockBounds&) const = default;
};

// Maps a 1-based sample index k to its block size n(k). Blocks are laid out
// consecutively from bit 1 with no gaps.
//   triangular  n(k) = k
//   fixed       n(k) = N
//   affine      n(k) = a*k + b,  a >= 1
class BlockScheme {
public:
  static BlockScheme triangular();
  static BlockScheme fixed(std::uint64_t block_size);
  static BlockScheme affine(std::uint64_t slope, std::uint64_t offset);

  // "tri", "fixed:N" or "affine:a:b"; throws std::invalid_argument.
  static BlockScheme parse(std::string_view text);
  std::string to_string() const;

  SchemeKind kind() const noexcept { return kind_; }
  std::uint64_t fixed_size() const noexcept { return fixed_; }
  std::uint64_t slope() const noexcept { return slope_; }
  std::uint64_t offset() const noexcept { return offset_; }

  // n(k). Throws std::overflow_error if it does not fit in 64 bits.
  std::uint64_t block_size(std::uint64_t k) const;

  // Total bits used by samples 1..k.
  std::uint64_t bits_through(std::uint64_t k) const;

  bool operator==(const BlockScheme&) const = default;

private:
  BlockScheme() = default;

  SchemeKind kind_ = SchemeKind::triangular;
  std::uint64_t fixed_ = 0;
  std::uint64_t slope_ = 1;
  std::uint64_t offset_ = 0;
};

// Throws std::invalid_argument for k == 0 and std::overflow_error when the
// block does not fit in the 64-bit index range.
BlockBounds block_bounds(const BlockScheme& scheme, std::uint64_t k);

struct Sample {
  std::uint64_t index = 0;       // k, 1-based
  double value = 0.0;            // X_k = (2S - n) / sqrt(n)
  std::uint64_t block_sum = 0;   // S, number of ones
  std::uint64_t block_size = 0;  // n
};

// X = (2S - n)/sqrt(n), one rounding for the square root and one for the division.
Sample make_sample(std::uint64_t k, std::uint64_t block_sum, std::uint64_t block_size);

// Same value from the sign form: sum of r_i = 2*bit_i - 1 over the block, over sqrt(n).
double rademacher_value(const BitBlock& block);

// Reads block k. The stream must sit exactly at the start of that block
// (std::logic_error otherwise).
Sample next_sample(BitStream& stream, const BlockScheme& scheme, std::uint64_t k);

class SampleSink {
public:
  virtual ~SampleSink() = default;
  virtual void observe(const Sample& sample) = 0;
};

template <class F>
class CallbackSink final : public SampleSink {
public:
  explicit CallbackSink(F f) : f_(std::move(f)) {}
  void observe(const Sample& sample) override { f_(sample); }

private:
  F f_;
};

struct RunSummary {
  std::uint64_t samples = 0;
  std::uint64_t bits_consumed = 0;
};

// Feeds X_1..X_{k_max} to every sink in order. The stream must be at position
// 0. SourceExhausted is rethrown with the sample index that ran dry.
RunSummary sample_run(BitStream& stream, const BlockScheme& scheme, std::uint64_t k_max,
                      std::span<SampleSink* const> sinks);

}  // namespace seqclt
