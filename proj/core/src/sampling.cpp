#include "seqclt/sampling.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace seqclt {

namespace {

__extension__ typedef unsigned __int128 u128;

constexpr u128 kIndexMax = std::numeric_limits<std::uint64_t>::max();

std::uint64_t checked(u128 value, const char* what) {
  if (value > kIndexMax) throw std::overflow_error(std::string(what) + " exceeds the 64-bit index range");
  return static_cast<std::uint64_t>(value);
}

std::uint64_t parse_positive(std::string_view text, std::string_view what, bool allow_zero = false) {
  std::uint64_t value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size() || (!allow_zero && value == 0))
    throw std::invalid_argument("invalid " + std::string(what) + " in scheme: '" + std::string(text) + "'");
  return value;
}

// Sum of n(j) for j = 1..k as a 128-bit value.
u128 bits_through_wide(const BlockScheme& s, std::uint64_t k) {
  const u128 kk = k;
  switch (s.kind()) {
    case SchemeKind::triangular: return kk * (kk + 1) / 2;
    case SchemeKind::fixed: return kk * s.fixed_size();
    case SchemeKind::affine: return u128{s.slope()} * (kk * (kk + 1) / 2) + u128{s.offset()} * kk;
  }
  return 0;
}

}  // namespace

BlockScheme BlockScheme::triangular() { return BlockScheme{}; }

BlockScheme BlockScheme::fixed(std::uint64_t block_size) {
  if (block_size == 0) throw std::invalid_argument("fixed block size must be >= 1");
  BlockScheme s;
  s.kind_ = SchemeKind::fixed;
  s.fixed_ = block_size;
  return s;
}

BlockScheme BlockScheme::affine(std::uint64_t slope, std::uint64_t offset) {
  if (slope == 0) throw std::invalid_argument("affine slope must be >= 1");
  BlockScheme s;
  s.kind_ = SchemeKind::affine;
  s.slope_ = slope;
  s.offset_ = offset;
  return s;
}

BlockScheme BlockScheme::parse(std::string_view text) {
  if (text == "tri") return triangular();
  if (text.starts_with("fixed:")) return fixed(parse_positive(text.substr(6), "block size"));
  if (text.starts_with("affine:")) {
    const std::string_view rest = text.substr(7);
    const auto colon = rest.find(':');
    if (colon == std::string_view::npos) throw std::invalid_argument("affine scheme must be 'affine:a:b'");
    return affine(parse_positive(rest.substr(0, colon), "slope"),
                  parse_positive(rest.substr(colon + 1), "offset", /*allow_zero=*/true));
  }
  throw std::invalid_argument("unknown scheme '" + std::string(text) + "' (expected tri, fixed:N or affine:a:b)");
}

std::string BlockScheme::to_string() const {
  switch (kind_) {
    case SchemeKind::triangular: return "tri";
    case SchemeKind::fixed: return "fixed:" + std::to_string(fixed_);
    case SchemeKind::affine: return "affine:" + std::to_string(slope_) + ":" + std::to_string(offset_);
  }
  return {};
}

std::uint64_t BlockScheme::block_size(std::uint64_t k) const {
  switch (kind_) {
    case SchemeKind::triangular: return k;
    case SchemeKind::fixed: return fixed_;
    case SchemeKind::affine: return checked(u128{slope_} * k + offset_, "block size");
  }
  return 0;
}

std::uint64_t BlockScheme::bits_through(std::uint64_t k) const {
  return checked(bits_through_wide(*this, k), "bit count");
}

BlockBounds block_bounds(const BlockScheme& scheme, std::uint64_t k) {
  if (k == 0) throw std::invalid_argument("sample index must be >= 1");
  const u128 before = bits_through_wide(scheme, k - 1);
  const u128 size = scheme.block_size(k);
  // The last bit of the block must be addressable too.
  checked(before + size, "block end");
  return {static_cast<std::uint64_t>(before + 1), static_cast<std::uint64_t>(size)};
}

Sample make_sample(std::uint64_t k, std::uint64_t block_sum, std::uint64_t block_size) {
  const auto centered = static_cast<double>(2 * static_cast<std::int64_t>(block_sum) - static_cast<std::int64_t>(block_size));
  return {k, centered / std::sqrt(static_cast<double>(block_size)), block_sum, block_size};
}

double rademacher_value(const BitBlock& block) {
  std::int64_t sum = 0;
  for (std::size_t i = 0; i < block.size(); ++i) sum += block[i] ? 1 : -1;
  return static_cast<double>(sum) / std::sqrt(static_cast<double>(block.size()));
}

Sample next_sample(BitStream& stream, const BlockScheme& scheme, std::uint64_t k) {
  const BlockBounds b = block_bounds(scheme, k);
  if (stream.position() != b.start - 1)
    throw std::logic_error("stream position " + std::to_string(stream.position()) + " is not at the start of block " +
                           std::to_string(k));
  const std::uint64_t sum = stream.popcount_block(b.size);
  return make_sample(k, sum, b.size);
}

RunSummary sample_run(BitStream& stream, const BlockScheme& scheme, std::uint64_t k_max,
                      std::span<SampleSink* const> sinks) {
  if (k_max == 0) throw std::invalid_argument("sample run needs k_max >= 1");
  if (stream.position() != 0) throw std::logic_error("sample run must start at stream position 0");
  scheme.bits_through(k_max);  // overflow check up front

  RunSummary summary;
  for (std::uint64_t k = 1; k <= k_max; ++k) {
    const std::uint64_t n = scheme.block_size(k);
    std::uint64_t sum = 0;
    try {
      sum = stream.popcount_block(n);
    } catch (const SourceExhausted& e) {
      throw SourceExhausted(e.position(), e.requested(), k);
    }
    const Sample sample = make_sample(k, sum, n);
    for (SampleSink* sink : sinks) sink->observe(sample);
    summary.samples = k;
    summary.bits_consumed += n;
  }
  return summary;
}

}  // namespace seqclt
