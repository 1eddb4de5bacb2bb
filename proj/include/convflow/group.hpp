#pragma once

#include <string>
#include <vector>

namespace convflow {

// A finite abelian group given as a product of cyclic factors Z_{n1} x ... x Z_{nk}.
// Elements are flat indices 0..order-1 in mixed radix with the first factor
// fastest: index = r0 + n0*(r1 + n1*(r2 + ...)). Index 0 is the identity.
class GroupSpec {
 public:
  explicit GroupSpec(std::vector<int> cyclic_orders);

  int order() const { return order_; }
  const std::vector<int>& cyclic_orders() const { return cyclic_orders_; }

  static constexpr int identity = 0;
  int mul(int a, int b) const;
  int inverse(int a) const;

  std::vector<int> residues(int index) const;
  int index_of(const std::vector<int>& residues) const;

  // "r0_r1_..." label, used for CSV column names and element serialization.
  std::string element_name(int index) const;

  bool operator==(const GroupSpec& other) const {
    return cyclic_orders_ == other.cyclic_orders_;
  }
  bool operator!=(const GroupSpec& other) const { return !(*this == other); }

 private:
  void check_index(int a) const;

  std::vector<int> cyclic_orders_;
  std::vector<int> strides_;
  int order_ = 1;
};

// A subgroup as a sorted list of element indices. Construction verifies the
// subgroup axioms exhaustively, so a Subgroup value is always consistent.
class Subgroup {
 public:
  Subgroup(GroupSpec group, std::vector<int> elements);

  const GroupSpec& group() const { return group_; }
  const std::vector<int>& elements() const { return elements_; }
  int order() const { return static_cast<int>(elements_.size()); }
  bool contains(int element) const;

  bool operator==(const Subgroup& other) const {
    return group_ == other.group_ && elements_ == other.elements_;
  }

 private:
  GroupSpec group_;
  std::vector<int> elements_;  // sorted, unique
};

// Smallest subgroup containing the given generators (closure under the
// group operation; inverses follow from finiteness).
Subgroup generated_subgroup(const GroupSpec& group, const std::vector<int>& generators);

inline constexpr int kSubgroupEnumerationBound = 64;

// Every subgroup, sorted by (order, elements). Throws capacity_error when
// the group order exceeds the bound.
std::vector<Subgroup> enumerate_subgroups(const GroupSpec& group,
                                          int capacity_bound = kSubgroupEnumerationBound);

}  // namespace convflow
