#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace seqclt {

// Identifier of the frozen PRNG recurrence, echoed into every CLI output.
inline constexpr std::string_view kPrngRecurrence = "splitmix64/state0=seed";

// SplitMix64, frozen. Bit stream order: each 64-bit output word is emitted
// most-significant bit first.
//
//   state += 0x9e3779b97f4a7c15
//   z = state
//   z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9
//   z = (z ^ (z >> 27)) * 0x94d049bb133111eb
//   return z ^ (z >> 31)
//
// The initial state is the seed itself.
class SplitMix64 {
public:
  explicit constexpr SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

  constexpr std::uint64_t operator()() noexcept {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

private:
  std::uint64_t state_;
};

enum class SourceKind { prng, file_ascii, file_raw, constant, periodic, champernowne };

// Describes a bit source. Two streams built from equal specs emit equal bits.
//
// Text form (CLI): "prng:seed=N" (or "prng:N"), "constant:0|1", "periodic:<bits>",
// "champernowne", "file-ascii:<path>", "file-raw:<path>".
struct SourceSpec {
  SourceKind kind = SourceKind::prng;
  std::uint64_t seed = 0;
  std::string pattern;
  std::string path;

  static SourceSpec prng(std::uint64_t seed);
  static SourceSpec constant(bool bit);
  static SourceSpec periodic(std::string pattern);
  static SourceSpec champernowne();
  static SourceSpec file_ascii(std::string path);
  static SourceSpec file_raw(std::string path);

  // Throws std::invalid_argument on malformed text.
  static SourceSpec parse(std::string_view text);
  std::string to_string() const;

  // Throws std::invalid_argument if the description breaks its invariants.
  void validate() const;

  bool operator==(const SourceSpec&) const = default;
};

// Longest accepted periodic pattern.
inline constexpr std::size_t kMaxPatternLength = 4096;

// Thrown when a finite source cannot supply the requested bits. `sample_index`
// is filled in by sampling drivers (0 when raised outside a sample run).
class SourceExhausted : public std::runtime_error {
public:
  SourceExhausted(std::uint64_t position, std::uint64_t requested, std::uint64_t sample_index = 0);

  std::uint64_t position() const noexcept { return position_; }
  std::uint64_t requested() const noexcept { return requested_; }
  std::uint64_t sample_index() const noexcept { return sample_index_; }

private:
  std::uint64_t position_;
  std::uint64_t requested_;
  std::uint64_t sample_index_;
};

// A packed, MSB-first block of bits: bit i lives in words()[i / 64] at
// bit position 63 - i % 64. Unused trailing bits of the last word are zero.
class BitBlock {
public:
  BitBlock() = default;

  std::size_t size() const noexcept { return size_; }
  bool empty() const noexcept { return size_ == 0; }
  bool operator[](std::size_t i) const { return (words_[i >> 6] >> (63 - (i & 63))) & 1U; }
  std::span<const std::uint64_t> words() const noexcept { return words_; }
  std::uint64_t popcount() const noexcept;

  // Appends the `count` most significant bits of `bits` (1 <= count <= 64).
  void append(std::uint64_t bits, unsigned count);

  std::vector<int> to_vector() const;

private:
  std::vector<std::uint64_t> words_;
  std::size_t size_ = 0;
};

namespace detail {
class WordSource;
}

// Lazily generated, resettable bit stream. Single consumer.
class BitStream {
public:
  explicit BitStream(SourceSpec spec);
  ~BitStream();
  BitStream(BitStream&&) noexcept;
  BitStream& operator=(BitStream&&) noexcept;
  BitStream(const BitStream&) = delete;
  BitStream& operator=(const BitStream&) = delete;

  const SourceSpec& spec() const noexcept { return spec_; }

  // Number of bits emitted since construction or the last reset.
  std::uint64_t position() const noexcept { return position_; }

  // Returns exactly `count` bits. On SourceExhausted, the bits that were
  // available have been consumed.
  BitBlock next_bits(std::uint64_t count);

  // Sum of the next `count` bits.
  std::uint64_t popcount_block(std::uint64_t count);

  void reset();

private:
  bool load_chunk();

  SourceSpec spec_;
  std::unique_ptr<detail::WordSource> source_;
  std::vector<std::uint64_t> chunk_;
  std::size_t chunk_bits_ = 0;   // valid bits in chunk_
  std::size_t chunk_word_ = 0;   // next unread word index
  std::uint64_t word_ = 0;       // current word, unread bits top-aligned
  unsigned avail_ = 0;           // unread bits in word_
  std::uint64_t position_ = 0;
};

}  // namespace seqclt
