#pragma once

#include <bit>
#include <cstdint>
#include <vector>

namespace midlayer {

/// Fixed-universe dynamic bitset over dense vertex ids. Word count is set at
/// construction; all binary operations assume matching universes.
class BitVec {
public:
  BitVec() = default;
  explicit BitVec(int nbits) : nbits_(nbits), w_((nbits + 63) / 64, 0) {}

  int universe() const { return nbits_; }
  bool empty() const {
    for (uint64_t x : w_)
      if (x) return false;
    return true;
  }
  int count() const {
    int c = 0;
    for (uint64_t x : w_) c += std::popcount(x);
    return c;
  }
  bool test(int i) const { return (w_[i >> 6] >> (i & 63)) & 1; }
  void set(int i) { w_[i >> 6] |= 1ull << (i & 63); }
  void reset(int i) { w_[i >> 6] &= ~(1ull << (i & 63)); }
  void clear() { std::fill(w_.begin(), w_.end(), 0); }

  BitVec& operator|=(const BitVec& o) {
    for (size_t i = 0; i < w_.size(); i++) w_[i] |= o.w_[i];
    return *this;
  }
  BitVec& operator&=(const BitVec& o) {
    for (size_t i = 0; i < w_.size(); i++) w_[i] &= o.w_[i];
    return *this;
  }
  BitVec& subtract(const BitVec& o) {
    for (size_t i = 0; i < w_.size(); i++) w_[i] &= ~o.w_[i];
    return *this;
  }

  bool intersects(const BitVec& o) const {
    for (size_t i = 0; i < w_.size(); i++)
      if (w_[i] & o.w_[i]) return true;
    return false;
  }
  bool is_subset_of(const BitVec& o) const {
    for (size_t i = 0; i < w_.size(); i++)
      if (w_[i] & ~o.w_[i]) return false;
    return true;
  }
  bool operator==(const BitVec& o) const { return nbits_ == o.nbits_ && w_ == o.w_; }
  bool operator!=(const BitVec& o) const { return !(*this == o); }

  int lowest() const {
    for (size_t i = 0; i < w_.size(); i++)
      if (w_[i]) return static_cast<int>(i) * 64 + std::countr_zero(w_[i]);
    return -1;
  }

  template <typename F>
  void for_each(F&& f) const {
    for (size_t i = 0; i < w_.size(); i++) {
      uint64_t x = w_[i];
      while (x) {
        f(static_cast<int>(i) * 64 + std::countr_zero(x));
        x &= x - 1;
      }
    }
  }

  std::vector<int> to_ids() const {
    std::vector<int> ids;
    ids.reserve(count());
    for_each([&](int v) { ids.push_back(v); });
    return ids;
  }

  const std::vector<uint64_t>& words() const { return w_; }
  std::vector<uint64_t>& words() { return w_; }

  // lexicographic on words, used only for canonical ordering of outputs
  bool operator<(const BitVec& o) const {
    for (size_t i = w_.size(); i-- > 0;)
      if (w_[i] != o.w_[i]) return w_[i] < o.w_[i];
    return false;
  }

private:
  int nbits_ = 0;
  std::vector<uint64_t> w_;
};

inline BitVec operator|(BitVec a, const BitVec& b) { return a |= b; }
inline BitVec operator&(BitVec a, const BitVec& b) { return a &= b; }

}  // namespace midlayer
