#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <vector>

namespace hdc {

// (k, i_1, ..., i_n): founder index k >= 1 followed by one digit in {1, 2}
// per division. Shared by tumour cells and sprout tips.
class LineageId {
 public:
  LineageId() = default;
  explicit LineageId(int root);

  /// Daughter id; digit must be 1 or 2.
  LineageId child(int digit) const;

  int root() const noexcept { return root_; }
  const std::vector<std::uint8_t>& path() const noexcept { return path_; }
  std::size_t generation() const noexcept { return path_.size(); }

  /// True when this id is a strict ancestor of `other`.
  bool is_ancestor_of(const LineageId& other) const;

  /// "k.i1.i2..." form used in every CSV and log.
  std::string str() const;
  static LineageId parse(const std::string& text);

  friend bool operator==(const LineageId&, const LineageId&) = default;
  friend std::strong_ordering operator<=>(const LineageId& a, const LineageId& b) {
    if (auto c = a.root_ <=> b.root_; c != 0) return c;
    return std::lexicographical_compare_three_way(a.path_.begin(), a.path_.end(), b.path_.begin(),
                                                  b.path_.end());
  }

 private:
  int root_ = 0;
  std::vector<std::uint8_t> path_;
};

}  // namespace hdc
