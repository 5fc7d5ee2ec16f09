#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

namespace dsbn {

/// Fixed-length bit vector used as the membership layout of configuration sets.
class Bitset {
 public:
  Bitset() = default;
  explicit Bitset(std::size_t size);

  static Bitset full(std::size_t size);

  std::size_t size() const noexcept { return size_; }

  bool test(std::size_t i) const noexcept { return (words_[i >> 6] >> (i & 63)) & 1u; }
  void set(std::size_t i) noexcept { words_[i >> 6] |= std::uint64_t{1} << (i & 63); }
  void reset(std::size_t i) noexcept { words_[i >> 6] &= ~(std::uint64_t{1} << (i & 63)); }

  std::size_t count() const noexcept;
  bool none() const noexcept;
  bool any() const noexcept { return !none(); }
  bool all() const noexcept;
  bool is_subset_of(const Bitset& other) const noexcept;
  bool intersects(const Bitset& other) const noexcept;

  Bitset& operator&=(const Bitset& other) noexcept;
  Bitset& operator|=(const Bitset& other) noexcept;
  friend Bitset operator&(Bitset a, const Bitset& b) noexcept { return a &= b; }
  friend Bitset operator|(Bitset a, const Bitset& b) noexcept { return a |= b; }

  /// Calls `fn(i)` for every set bit in increasing order.
  template <typename Fn>
  void for_each(Fn&& fn) const {
    for (std::size_t w = 0; w < words_.size(); ++w) {
      std::uint64_t word = words_[w];
      while (word != 0) {
        const int bit = __builtin_ctzll(word);
        fn(w * 64 + static_cast<std::size_t>(bit));
        word &= word - 1;
      }
    }
  }

  /// Low 64 bits; meaningful when size() <= 64.
  std::uint64_t low_word() const noexcept { return words_.empty() ? 0 : words_[0]; }
  static Bitset from_word(std::size_t size, std::uint64_t word);

  const std::vector<std::uint64_t>& words() const noexcept { return words_; }
  std::size_t hash() const noexcept;

  friend bool operator==(const Bitset&, const Bitset&) = default;
  friend std::strong_ordering operator<=>(const Bitset& a, const Bitset& b) noexcept;

 private:
  void clear_tail() noexcept;

  std::size_t size_ = 0;
  std::vector<std::uint64_t> words_;
};

struct BitsetHash {
  std::size_t operator()(const Bitset& b) const noexcept { return b.hash(); }
};

}  // namespace dsbn
