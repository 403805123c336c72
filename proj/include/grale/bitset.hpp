#pragma once

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace grale {

/// Fixed-capacity set of dense indices in [0, size()).
class Bitset {
 public:
  using Word = std::uint64_t;
  static constexpr std::size_t kWordBits = 64;

  Bitset() = default;
  explicit Bitset(std::size_t size, bool filled = false)
      : size_(size), words_((size + kWordBits - 1) / kWordBits, filled ? ~Word{0} : Word{0}) {
    trim();
  }

  std::size_t size() const noexcept { return size_; }

  void set(std::size_t i) {
    check(i);
    words_[i / kWordBits] |= Word{1} << (i % kWordBits);
  }
  void reset(std::size_t i) {
    check(i);
    words_[i / kWordBits] &= ~(Word{1} << (i % kWordBits));
  }
  bool test(std::size_t i) const {
    check(i);
    return (words_[i / kWordBits] >> (i % kWordBits)) & Word{1};
  }

  std::size_t count() const noexcept {
    std::size_t n = 0;
    for (Word w : words_) n += static_cast<std::size_t>(std::popcount(w));
    return n;
  }
  bool none() const noexcept {
    return std::all_of(words_.begin(), words_.end(), [](Word w) { return w == 0; });
  }
  bool any() const noexcept { return !none(); }

  /// |*this ∩ other| without materializing the intersection.
  std::size_t intersect_count(const Bitset& other) const {
    same_size(other);
    std::size_t n = 0;
    for (std::size_t i = 0; i < words_.size(); ++i)
      n += static_cast<std::size_t>(std::popcount(words_[i] & other.words_[i]));
    return n;
  }

  bool is_subset_of(const Bitset& other) const {
    same_size(other);
    for (std::size_t i = 0; i < words_.size(); ++i)
      if (words_[i] & ~other.words_[i]) return false;
    return true;
  }

  Bitset& operator&=(const Bitset& other) {
    same_size(other);
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= other.words_[i];
    return *this;
  }
  Bitset& operator|=(const Bitset& other) {
    same_size(other);
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= other.words_[i];
    return *this;
  }
  friend Bitset operator&(Bitset lhs, const Bitset& rhs) { return lhs &= rhs; }
  friend Bitset operator|(Bitset lhs, const Bitset& rhs) { return lhs |= rhs; }

  template <typename Fn>
  void for_each(Fn&& fn) const {
    for (std::size_t w = 0; w < words_.size(); ++w) {
      Word bits = words_[w];
      while (bits) {
        const int tz = std::countr_zero(bits);
        fn(w * kWordBits + static_cast<std::size_t>(tz));
        bits &= bits - 1;
      }
    }
  }

  std::vector<std::uint32_t> to_indices() const {
    std::vector<std::uint32_t> out;
    out.reserve(count());
    for_each([&](std::size_t i) { out.push_back(static_cast<std::uint32_t>(i)); });
    return out;
  }

  bool operator==(const Bitset&) const = default;

 private:
  void check(std::size_t i) const {
    if (i >= size_) throw std::out_of_range("bitset index out of range");
  }
  void same_size(const Bitset& other) const {
    if (other.size_ != size_) throw std::invalid_argument("bitset size mismatch");
  }
  void trim() {
    if (size_ % kWordBits != 0 && !words_.empty())
      words_.back() &= (Word{1} << (size_ % kWordBits)) - 1;
  }

  std::size_t size_ = 0;
  std::vector<Word> words_;
};

}  // namespace grale
