#pragma once

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "nomaidnc/errors.hpp"

namespace nomaidnc {

/// Runtime-sized bitset used for Wants sets, packet combinations and graph
/// adjacency rows. Index bounds are not checked on the hot accessors.
class DynamicBitset {
 public:
  DynamicBitset() = default;
  explicit DynamicBitset(std::size_t size, bool value = false)
      : size_(size), words_((size + 63) / 64, value ? ~std::uint64_t{0} : 0) {
    trim();
  }

  std::size_t size() const { return size_; }

  bool test(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1u; }
  void set(std::size_t i) { words_[i >> 6] |= std::uint64_t{1} << (i & 63); }
  void reset(std::size_t i) { words_[i >> 6] &= ~(std::uint64_t{1} << (i & 63)); }
  void clear() { std::fill(words_.begin(), words_.end(), 0); }

  std::size_t count() const {
    std::size_t total = 0;
    for (std::uint64_t w : words_) total += static_cast<std::size_t>(std::popcount(w));
    return total;
  }

  bool any() const {
    for (std::uint64_t w : words_)
      if (w != 0) return true;
    return false;
  }
  bool none() const { return !any(); }

  DynamicBitset& operator&=(const DynamicBitset& other) {
    require(size_ == other.size_, "DynamicBitset: size mismatch");
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= other.words_[i];
    return *this;
  }

  DynamicBitset& operator|=(const DynamicBitset& other) {
    require(size_ == other.size_, "DynamicBitset: size mismatch");
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= other.words_[i];
    return *this;
  }

  /// *this &= ~other
  void and_not(const DynamicBitset& other) {
    require(size_ == other.size_, "DynamicBitset: size mismatch");
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= ~other.words_[i];
  }

  /// Index of the lowest set bit, or -1.
  int find_first() const {
    for (std::size_t w = 0; w < words_.size(); ++w)
      if (words_[w] != 0) return static_cast<int>(w * 64 + std::countr_zero(words_[w]));
    return -1;
  }

  template <typename Fn>
  void for_each_set(Fn&& fn) const {
    for (std::size_t w = 0; w < words_.size(); ++w) {
      std::uint64_t bits = words_[w];
      while (bits != 0) {
        fn(static_cast<int>(w * 64 + std::countr_zero(bits)));
        bits &= bits - 1;
      }
    }
  }

  static std::size_t and_count(const DynamicBitset& a, const DynamicBitset& b) {
    require(a.size_ == b.size_, "DynamicBitset: size mismatch");
    std::size_t total = 0;
    for (std::size_t i = 0; i < a.words_.size(); ++i)
      total += static_cast<std::size_t>(std::popcount(a.words_[i] & b.words_[i]));
    return total;
  }

  friend bool operator==(const DynamicBitset&, const DynamicBitset&) = default;

 private:
  void trim() {
    if ((size_ & 63) != 0 && !words_.empty())
      words_.back() &= ~std::uint64_t{0} >> (64 - (size_ & 63));
  }

  std::size_t size_ = 0;
  std::vector<std::uint64_t> words_;
};

}  // namespace nomaidnc
