#include "seqclt/bitsource.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <charconv>
#include <fstream>
#include <numeric>
#include <utility>

namespace seqclt {

namespace {

constexpr std::size_t kChunkWords = 1024;

std::uint64_t shl(std::uint64_t x, unsigned s) { return s >= 64 ? 0 : x << s; }
std::uint64_t shr(std::uint64_t x, unsigned s) { return s >= 64 ? 0 : x >> s; }

std::uint64_t parse_u64(std::string_view text, std::string_view what) {
  std::uint64_t value = 0;
  const auto* first = text.data();
  const auto* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (text.empty() || ec != std::errc{} || ptr != last)
    throw std::invalid_argument("invalid " + std::string(what) + ": '" + std::string(text) + "'");
  return value;
}

}  // namespace

namespace detail {

// Produces the stream as packed MSB-first words. fill() writes whole words and
// returns the number of valid bits; a short count marks the end of the source.
class WordSource {
public:
  virtual ~WordSource() = default;
  virtual std::size_t fill(std::span<std::uint64_t> out) = 0;
  virtual void reset() = 0;
};

namespace {

class PrngSource final : public WordSource {
public:
  explicit PrngSource(std::uint64_t seed) : seed_(seed), gen_(seed) {}
  std::size_t fill(std::span<std::uint64_t> out) override {
    for (auto& w : out) w = gen_();
    return out.size() * 64;
  }
  void reset() override { gen_ = SplitMix64(seed_); }

private:
  std::uint64_t seed_;
  SplitMix64 gen_;
};

// Constant and periodic sources: the pattern repeated to a whole number of words.
class PatternSource final : public WordSource {
public:
  explicit PatternSource(const std::string& pattern) {
    const std::size_t period = pattern.size();
    const std::size_t cycle_words = period / std::gcd(period, std::size_t{64});
    cycle_.assign(cycle_words, 0);
    for (std::size_t i = 0; i < cycle_words * 64; ++i) {
      if (pattern[i % period] == '1') cycle_[i >> 6] |= std::uint64_t{1} << (63 - (i & 63));
    }
  }
  std::size_t fill(std::span<std::uint64_t> out) override {
    for (auto& w : out) {
      w = cycle_[next_];
      if (++next_ == cycle_.size()) next_ = 0;
    }
    return out.size() * 64;
  }
  void reset() override { next_ = 0; }

private:
  std::vector<std::uint64_t> cycle_;
  std::size_t next_ = 0;
};

// Binary numerals of 1, 2, 3, ... concatenated, each without leading zeros.
class ChampernowneSource final : public WordSource {
public:
  std::size_t fill(std::span<std::uint64_t> out) override {
    for (auto& w : out) {
      std::uint64_t word = 0;
      unsigned filled = 0;
      while (filled < 64) {
        if (remaining_ == 0) {
          ++value_;
          remaining_ = static_cast<unsigned>(std::bit_width(value_));
        }
        const unsigned take = std::min(64U - filled, remaining_);
        const std::uint64_t mask = take == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << take) - 1;
        const std::uint64_t piece = shr(value_, remaining_ - take) & mask;
        word = shl(word, take) | piece;
        filled += take;
        remaining_ -= take;
      }
      w = word;
    }
    return out.size() * 64;
  }
  void reset() override {
    value_ = 0;
    remaining_ = 0;
  }

private:
  std::uint64_t value_ = 0;
  unsigned remaining_ = 0;
};

class FileSource : public WordSource {
public:
  explicit FileSource(const std::string& path) : path_(path), in_(path, std::ios::binary) {
    if (!in_) throw std::invalid_argument("cannot open bit file '" + path + "'");
  }
  void reset() override {
    in_.clear();
    in_.seekg(0);
  }

protected:
  void push_bit(std::span<std::uint64_t> out, std::size_t& bits, unsigned bit) {
    const std::size_t i = bits++;
    if ((i & 63) == 0) out[i >> 6] = 0;
    out[i >> 6] |= std::uint64_t{bit} << (63 - (i & 63));
  }

  std::string path_;
  std::ifstream in_;
};

class AsciiFileSource final : public FileSource {
public:
  using FileSource::FileSource;
  std::size_t fill(std::span<std::uint64_t> out) override {
    std::size_t bits = 0;
    const std::size_t capacity = out.size() * 64;
    char buf[4096];
    while (bits < capacity) {
      const std::size_t want = std::min<std::size_t>(sizeof buf, capacity - bits);
      in_.read(buf, static_cast<std::streamsize>(want));
      const auto got = static_cast<std::size_t>(in_.gcount());
      if (got == 0) break;
      for (std::size_t i = 0; i < got; ++i) {
        const char c = buf[i];
        if (c == '0' || c == '1') {
          push_bit(out, bits, c == '1' ? 1U : 0U);
        } else if (!std::isspace(static_cast<unsigned char>(c))) {
          throw std::invalid_argument("bit file '" + path_ + "' contains invalid character");
        }
      }
    }
    return bits;
  }
};

class RawFileSource final : public FileSource {
public:
  using FileSource::FileSource;
  std::size_t fill(std::span<std::uint64_t> out) override {
    std::size_t bits = 0;
    std::vector<unsigned char> buf(out.size() * 8);
    in_.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
    const auto got = static_cast<std::size_t>(in_.gcount());
    for (std::size_t i = 0; i < got; ++i) {
      if ((i & 7) == 0) out[i >> 3] = 0;
      out[i >> 3] |= std::uint64_t{buf[i]} << (8 * (7 - (i & 7)));
      bits += 8;
    }
    return bits;
  }
};

}  // namespace
}  // namespace detail

// ---------------------------------------------------------------------------
// SourceSpec

SourceSpec SourceSpec::prng(std::uint64_t seed) {
  SourceSpec s;
  s.kind = SourceKind::prng;
  s.seed = seed;
  return s;
}

SourceSpec SourceSpec::constant(bool bit) {
  SourceSpec s;
  s.kind = SourceKind::constant;
  s.pattern = bit ? "1" : "0";
  return s;
}

SourceSpec SourceSpec::periodic(std::string pattern) {
  SourceSpec s;
  s.kind = SourceKind::periodic;
  s.pattern = std::move(pattern);
  s.validate();
  return s;
}

SourceSpec SourceSpec::champernowne() {
  SourceSpec s;
  s.kind = SourceKind::champernowne;
  return s;
}

SourceSpec SourceSpec::file_ascii(std::string path) {
  SourceSpec s;
  s.kind = SourceKind::file_ascii;
  s.path = std::move(path);
  return s;
}

SourceSpec SourceSpec::file_raw(std::string path) {
  SourceSpec s;
  s.kind = SourceKind::file_raw;
  s.path = std::move(path);
  return s;
}

SourceSpec SourceSpec::parse(std::string_view text) {
  const auto colon = text.find(':');
  const std::string_view kind = text.substr(0, colon);
  const std::string_view rest = colon == std::string_view::npos ? std::string_view{} : text.substr(colon + 1);
  const bool has_rest = colon != std::string_view::npos;

  SourceSpec s;
  if (kind == "prng") {
    std::string_view seed = rest;
    if (seed.starts_with("seed=")) seed.remove_prefix(5);
    if (!has_rest) throw std::invalid_argument("prng source needs a seed: 'prng:seed=N'");
    s = prng(parse_u64(seed, "seed"));
  } else if (kind == "constant") {
    if (rest != "0" && rest != "1") throw std::invalid_argument("constant source must be 'constant:0' or 'constant:1'");
    s = constant(rest == "1");
  } else if (kind == "periodic") {
    s.kind = SourceKind::periodic;
    s.pattern = std::string(rest);
  } else if (kind == "champernowne") {
    if (has_rest) throw std::invalid_argument("champernowne source takes no parameters");
    s = champernowne();
  } else if (kind == "file-ascii") {
    s = file_ascii(std::string(rest));
  } else if (kind == "file-raw") {
    s = file_raw(std::string(rest));
  } else {
    throw std::invalid_argument("unknown source kind '" + std::string(kind) + "'");
  }
  s.validate();
  return s;
}

std::string SourceSpec::to_string() const {
  switch (kind) {
    case SourceKind::prng: return "prng:seed=" + std::to_string(seed);
    case SourceKind::constant: return "constant:" + pattern;
    case SourceKind::periodic: return "periodic:" + pattern;
    case SourceKind::champernowne: return "champernowne";
    case SourceKind::file_ascii: return "file-ascii:" + path;
    case SourceKind::file_raw: return "file-raw:" + path;
  }
  return {};
}

void SourceSpec::validate() const {
  const auto bits_only = [](const std::string& p) {
    return std::all_of(p.begin(), p.end(), [](char c) { return c == '0' || c == '1'; });
  };
  switch (kind) {
    case SourceKind::constant:
      if (pattern != "0" && pattern != "1") throw std::invalid_argument("constant pattern must be a single bit");
      break;
    case SourceKind::periodic:
      if (pattern.empty()) throw std::invalid_argument("periodic pattern must be non-empty");
      if (pattern.size() > kMaxPatternLength) throw std::invalid_argument("periodic pattern too long");
      if (!bits_only(pattern)) throw std::invalid_argument("periodic pattern may only contain '0' and '1'");
      break;
    case SourceKind::file_ascii:
    case SourceKind::file_raw:
      if (path.empty()) throw std::invalid_argument("file source needs a path");
      break;
    case SourceKind::prng:
    case SourceKind::champernowne:
      break;
  }
}

// ---------------------------------------------------------------------------
// SourceExhausted

SourceExhausted::SourceExhausted(std::uint64_t position, std::uint64_t requested, std::uint64_t sample_index)
    : std::runtime_error("bit source exhausted at position " + std::to_string(position) + " (" +
                         std::to_string(requested) + " more bits requested" +
                         (sample_index ? ", sample k=" + std::to_string(sample_index) : std::string{}) + ")"),
      position_(position),
      requested_(requested),
      sample_index_(sample_index) {}

// ---------------------------------------------------------------------------
// BitBlock

std::uint64_t BitBlock::popcount() const noexcept {
  std::uint64_t total = 0;
  for (auto w : words_) total += static_cast<std::uint64_t>(std::popcount(w));
  return total;
}

void BitBlock::append(std::uint64_t bits, unsigned count) {
  if (count == 0) return;
  if (count < 64) bits &= ~std::uint64_t{0} << (64 - count);
  const unsigned offset = static_cast<unsigned>(size_ & 63);
  if (offset == 0) {
    words_.push_back(bits);
  } else {
    words_.back() |= bits >> offset;
    if (offset + count > 64) words_.push_back(bits << (64 - offset));
  }
  size_ += count;
}

std::vector<int> BitBlock::to_vector() const {
  std::vector<int> out(size_);
  for (std::size_t i = 0; i < size_; ++i) out[i] = (*this)[i] ? 1 : 0;
  return out;
}

// ---------------------------------------------------------------------------
// BitStream

namespace {

std::unique_ptr<detail::WordSource> make_source(const SourceSpec& spec) {
  spec.validate();
  switch (spec.kind) {
    case SourceKind::prng: return std::make_unique<detail::PrngSource>(spec.seed);
    case SourceKind::constant:
    case SourceKind::periodic: return std::make_unique<detail::PatternSource>(spec.pattern);
    case SourceKind::champernowne: return std::make_unique<detail::ChampernowneSource>();
    case SourceKind::file_ascii: return std::make_unique<detail::AsciiFileSource>(spec.path);
    case SourceKind::file_raw: return std::make_unique<detail::RawFileSource>(spec.path);
  }
  throw std::invalid_argument("unknown source kind");
}

}  // namespace

BitStream::BitStream(SourceSpec spec) : spec_(std::move(spec)), source_(make_source(spec_)), chunk_(kChunkWords) {}

BitStream::~BitStream() = default;
BitStream::BitStream(BitStream&&) noexcept = default;
BitStream& BitStream::operator=(BitStream&&) noexcept = default;

bool BitStream::load_chunk() {
  chunk_bits_ = source_->fill(chunk_);
  chunk_word_ = 0;
  return chunk_bits_ > 0;
}

std::uint64_t BitStream::popcount_block(std::uint64_t count) {
  std::uint64_t total = 0;
  std::uint64_t remaining = count;
  while (remaining > 0) {
    if (avail_ == 0) {
      // Whole words straight from the chunk.
      std::size_t full_words = chunk_bits_ / 64;
      while (remaining >= 64 && chunk_word_ < full_words) {
        const std::size_t n = std::min<std::size_t>(full_words - chunk_word_, remaining / 64);
        const std::uint64_t* p = chunk_.data() + chunk_word_;
        for (std::size_t i = 0; i < n; ++i) total += static_cast<std::uint64_t>(std::popcount(p[i]));
        chunk_word_ += n;
        remaining -= 64 * n;
        position_ += 64 * n;
        if (chunk_word_ == full_words && chunk_bits_ == chunk_.size() * 64 && remaining >= 64) {
          if (!load_chunk()) throw SourceExhausted(position_, remaining);
          full_words = chunk_bits_ / 64;
        }
      }
      if (remaining == 0) break;
      if (chunk_word_ * 64 >= chunk_bits_ && !load_chunk()) throw SourceExhausted(position_, remaining);
      word_ = chunk_[chunk_word_];
      avail_ = static_cast<unsigned>(std::min<std::size_t>(64, chunk_bits_ - chunk_word_ * 64));
      ++chunk_word_;
      continue;
    }
    const unsigned take = static_cast<unsigned>(std::min<std::uint64_t>(avail_, remaining));
    total += static_cast<std::uint64_t>(std::popcount(shr(word_, 64 - take)));
    word_ = shl(word_, take);
    avail_ -= take;
    remaining -= take;
    position_ += take;
  }
  return total;
}

BitBlock BitStream::next_bits(std::uint64_t count) {
  BitBlock block;
  std::uint64_t remaining = count;
  while (remaining > 0) {
    if (avail_ == 0) {
      if (chunk_word_ * 64 >= chunk_bits_ && !load_chunk()) throw SourceExhausted(position_, remaining);
      word_ = chunk_[chunk_word_];
      avail_ = static_cast<unsigned>(std::min<std::size_t>(64, chunk_bits_ - chunk_word_ * 64));
      ++chunk_word_;
    }
    const unsigned take = static_cast<unsigned>(std::min<std::uint64_t>(avail_, remaining));
    block.append(word_, take);
    word_ = shl(word_, take);
    avail_ -= take;
    remaining -= take;
    position_ += take;
  }
  return block;
}

void BitStream::reset() {
  source_->reset();
  chunk_bits_ = 0;
  chunk_word_ = 0;
  word_ = 0;
  avail_ = 0;
  position_ = 0;
}

}  // namespace seqclt
