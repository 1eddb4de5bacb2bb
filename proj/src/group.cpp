#include "convflow/group.hpp"

#include <algorithm>
#include <queue>
#include <set>
#include <stdexcept>

#include "convflow/errors.hpp"

namespace convflow {

GroupSpec::GroupSpec(std::vector<int> cyclic_orders)
    : cyclic_orders_(std::move(cyclic_orders)) {
  if (cyclic_orders_.empty())
    throw std::invalid_argument("GroupSpec: factor list must be nonempty");
  strides_.reserve(cyclic_orders_.size());
  for (int n : cyclic_orders_) {
    if (n < 1) throw std::invalid_argument("GroupSpec: every cyclic order must be >= 1");
    strides_.push_back(order_);
    order_ *= n;
  }
}

void GroupSpec::check_index(int a) const {
  if (a < 0 || a >= order_)
    throw std::out_of_range("GroupSpec: element index out of range");
}

int GroupSpec::mul(int a, int b) const {
  check_index(a);
  check_index(b);
  int out = 0;
  for (std::size_t i = 0; i < cyclic_orders_.size(); ++i) {
    const int n = cyclic_orders_[i];
    const int ra = (a / strides_[i]) % n;
    const int rb = (b / strides_[i]) % n;
    out += ((ra + rb) % n) * strides_[i];
  }
  return out;
}

int GroupSpec::inverse(int a) const {
  check_index(a);
  int out = 0;
  for (std::size_t i = 0; i < cyclic_orders_.size(); ++i) {
    const int n = cyclic_orders_[i];
    const int ra = (a / strides_[i]) % n;
    out += ((n - ra) % n) * strides_[i];
  }
  return out;
}

std::vector<int> GroupSpec::residues(int index) const {
  check_index(index);
  std::vector<int> out(cyclic_orders_.size());
  for (std::size_t i = 0; i < cyclic_orders_.size(); ++i)
    out[i] = (index / strides_[i]) % cyclic_orders_[i];
  return out;
}

int GroupSpec::index_of(const std::vector<int>& residues) const {
  if (residues.size() != cyclic_orders_.size())
    throw std::invalid_argument("GroupSpec: residue tuple has wrong length");
  int out = 0;
  for (std::size_t i = 0; i < cyclic_orders_.size(); ++i) {
    const int r = residues[i];
    if (r < 0 || r >= cyclic_orders_[i])
      throw std::out_of_range("GroupSpec: residue out of range");
    out += r * strides_[i];
  }
  return out;
}

std::string GroupSpec::element_name(int index) const {
  const auto rs = residues(index);
  std::string out;
  for (std::size_t i = 0; i < rs.size(); ++i) {
    if (i) out += '_';
    out += std::to_string(rs[i]);
  }
  return out;
}

Subgroup::Subgroup(GroupSpec group, std::vector<int> elements)
    : group_(std::move(group)), elements_(std::move(elements)) {
  std::sort(elements_.begin(), elements_.end());
  elements_.erase(std::unique(elements_.begin(), elements_.end()), elements_.end());
  if (elements_.empty())
    throw std::invalid_argument("Subgroup: element list must be nonempty");
  for (int e : elements_)
    if (e < 0 || e >= group_.order())
      throw std::out_of_range("Subgroup: element index out of range");
  if (!contains(GroupSpec::identity))
    throw std::invalid_argument("Subgroup: identity missing");
  for (int a : elements_) {
    if (!contains(group_.inverse(a)))
      throw std::invalid_argument("Subgroup: not closed under inversion");
    for (int b : elements_)
      if (!contains(group_.mul(a, b)))
        throw std::invalid_argument("Subgroup: not closed under the group operation");
  }
}

bool Subgroup::contains(int element) const {
  return std::binary_search(elements_.begin(), elements_.end(), element);
}

namespace {

// Closure of a seed set under multiplication, as a sorted element list.
std::vector<int> closure_of(const GroupSpec& g, std::vector<int> seed) {
  std::vector<char> member(g.order(), 0);
  std::vector<int> result;
  std::queue<int> work;
  auto add = [&](int e) {
    if (!member[e]) {
      member[e] = 1;
      result.push_back(e);
      work.push(e);
    }
  };
  add(GroupSpec::identity);
  for (int e : seed) {
    if (e < 0 || e >= g.order())
      throw std::out_of_range("generated_subgroup: generator index out of range");
    add(e);
  }
  while (!work.empty()) {
    const int x = work.front();
    work.pop();
    // snapshot by index: elements appended during the loop pair with x when
    // they are popped later
    const std::size_t upto = result.size();
    for (std::size_t i = 0; i < upto; ++i) add(g.mul(x, result[i]));
  }
  std::sort(result.begin(), result.end());
  return result;
}

}  // namespace

Subgroup generated_subgroup(const GroupSpec& group, const std::vector<int>& generators) {
  return Subgroup(group, closure_of(group, generators));
}

std::vector<Subgroup> enumerate_subgroups(const GroupSpec& group, int capacity_bound) {
  if (group.order() > capacity_bound)
    throw capacity_error("enumerate_subgroups: group order exceeds the enumeration bound");

  std::set<std::vector<int>> found;
  std::queue<std::vector<int>> work;
  std::vector<int> trivial{GroupSpec::identity};
  found.insert(trivial);
  work.push(trivial);

  // Every subgroup arises by repeatedly adjoining one generator, so a
  // breadth-first sweep over extensions reaches all of them.
  while (!work.empty()) {
    const std::vector<int> h = std::move(work.front());
    work.pop();
    std::vector<char> in_h(group.order(), 0);
    for (int e : h) in_h[e] = 1;
    for (int g = 0; g < group.order(); ++g) {
      if (in_h[g]) continue;
      std::vector<int> seed = h;
      seed.push_back(g);
      std::vector<int> k = closure_of(group, std::move(seed));
      if (found.insert(k).second) work.push(k);
    }
  }

  std::vector<Subgroup> out;
  out.reserve(found.size());
  for (const auto& elems : found) out.emplace_back(group, elems);
  std::sort(out.begin(), out.end(), [](const Subgroup& a, const Subgroup& b) {
    if (a.order() != b.order()) return a.order() < b.order();
    return a.elements() < b.elements();
  });
  return out;
}

}  // namespace convflow
