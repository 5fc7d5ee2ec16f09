#include "dsbn/bitset.hpp"

#include <algorithm>
#include <bit>

namespace dsbn {

Bitset::Bitset(std::size_t size) : size_(size), words_((size + 63) / 64, 0) {}

Bitset Bitset::full(std::size_t size) {
  Bitset b(size);
  std::fill(b.words_.begin(), b.words_.end(), ~std::uint64_t{0});
  b.clear_tail();
  return b;
}

Bitset Bitset::from_word(std::size_t size, std::uint64_t word) {
  Bitset b(size);
  if (!b.words_.empty()) b.words_[0] = word;
  b.clear_tail();
  return b;
}

void Bitset::clear_tail() noexcept {
  const std::size_t tail = size_ & 63;
  if (tail != 0 && !words_.empty()) words_.back() &= (std::uint64_t{1} << tail) - 1;
}

std::size_t Bitset::count() const noexcept {
  std::size_t n = 0;
  for (auto w : words_) n += static_cast<std::size_t>(std::popcount(w));
  return n;
}

bool Bitset::none() const noexcept {
  return std::all_of(words_.begin(), words_.end(), [](std::uint64_t w) { return w == 0; });
}

bool Bitset::all() const noexcept { return count() == size_; }

bool Bitset::is_subset_of(const Bitset& other) const noexcept {
  for (std::size_t i = 0; i < words_.size(); ++i)
    if ((words_[i] & ~other.words_[i]) != 0) return false;
  return true;
}

bool Bitset::intersects(const Bitset& other) const noexcept {
  for (std::size_t i = 0; i < words_.size(); ++i)
    if ((words_[i] & other.words_[i]) != 0) return true;
  return false;
}

Bitset& Bitset::operator&=(const Bitset& other) noexcept {
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= other.words_[i];
  return *this;
}

Bitset& Bitset::operator|=(const Bitset& other) noexcept {
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= other.words_[i];
  return *this;
}

std::size_t Bitset::hash() const noexcept {
  // splitmix-style mixing over the words
  std::uint64_t h = 0x9e3779b97f4a7c15ULL ^ size_;
  for (auto w : words_) {
    h ^= w + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    h ^= h >> 31;
    h *= 0xbf58476d1ce4e5b9ULL;
  }
  return static_cast<std::size_t>(h ^ (h >> 29));
}

std::strong_ordering operator<=>(const Bitset& a, const Bitset& b) noexcept {
  if (auto c = a.size_ <=> b.size_; c != 0) return c;
  // most significant word first so that ordering matches the numeric value
  for (std::size_t i = a.words_.size(); i-- > 0;) {
    if (auto c = a.words_[i] <=> b.words_[i]; c != 0) return c;
  }
  return std::strong_ordering::equal;
}

}  // namespace dsbn
