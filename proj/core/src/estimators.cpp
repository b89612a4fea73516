#include "cbai/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cbai {
namespace {

std::uint64_t next_priority(std::uint64_t& state) {
  state += 0x9E3779B97F4A7C15ull;
  std::uint64_t z = state;
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ull;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBull;
  z ^= z >> 31;
  return z;
}

}  // namespace

ArmStatistics::ArmStatistics() : prio_state_(0x853C49E6748FEA9Bull) {}

void ArmStatistics::pull(std::int32_t n) {
  Node& node = nodes_[static_cast<std::size_t>(n)];
  node.size = 1;
  node.subtree_sum = node.value;
  if (node.left >= 0) {
    node.size += nodes_[static_cast<std::size_t>(node.left)].size;
    node.subtree_sum += nodes_[static_cast<std::size_t>(node.left)].subtree_sum;
  }
  if (node.right >= 0) {
    node.size += nodes_[static_cast<std::size_t>(node.right)].size;
    node.subtree_sum += nodes_[static_cast<std::size_t>(node.right)].subtree_sum;
  }
}

std::int32_t ArmStatistics::merge(std::int32_t a, std::int32_t b) {
  if (a < 0) return b;
  if (b < 0) return a;
  if (nodes_[static_cast<std::size_t>(a)].priority >=
      nodes_[static_cast<std::size_t>(b)].priority) {
    nodes_[static_cast<std::size_t>(a)].right =
        merge(nodes_[static_cast<std::size_t>(a)].right, b);
    pull(a);
    return a;
  }
  nodes_[static_cast<std::size_t>(b)].left =
      merge(a, nodes_[static_cast<std::size_t>(b)].left);
  pull(b);
  return b;
}

void ArmStatistics::split(std::int32_t node, double key, std::int32_t& lo,
                          std::int32_t& hi) {
  if (node < 0) {
    lo = hi = -1;
    return;
  }
  Node& n = nodes_[static_cast<std::size_t>(node)];
  if (n.value <= key) {
    split(n.right, key, n.right, hi);
    lo = node;
  } else {
    split(n.left, key, lo, n.left);
    hi = node;
  }
  pull(node);
}

void ArmStatistics::insert(double x) {
  if (!std::isfinite(x)) {
    throw std::invalid_argument("ArmStatistics::insert: sample must be finite");
  }
  Node node;
  node.value = x;
  node.subtree_sum = x;
  node.priority = next_priority(prio_state_);
  nodes_.push_back(node);
  const auto fresh = static_cast<std::int32_t>(nodes_.size() - 1);
  std::int32_t lo = -1, hi = -1;
  split(root_, x, lo, hi);
  root_ = merge(merge(lo, fresh), hi);
}

double ArmStatistics::kth(std::size_t k) const {
  if (k >= count()) throw std::out_of_range("ArmStatistics::kth: rank out of range");
  std::int32_t node = root_;
  while (true) {
    const Node& n = nodes_[static_cast<std::size_t>(node)];
    const std::size_t left_size =
        n.left >= 0 ? static_cast<std::size_t>(nodes_[static_cast<std::size_t>(n.left)].size)
                    : 0;
    if (k < left_size) {
      node = n.left;
    } else if (k == left_size) {
      return n.value;
    } else {
      k -= left_size + 1;
      node = n.right;
    }
  }
}

double ArmStatistics::prefix_sum(std::size_t k) const {
  if (k > count()) throw std::out_of_range("ArmStatistics::prefix_sum: k out of range");
  double sum = 0.0;
  std::int32_t node = root_;
  while (k > 0) {
    const Node& n = nodes_[static_cast<std::size_t>(node)];
    const std::size_t left_size =
        n.left >= 0 ? static_cast<std::size_t>(nodes_[static_cast<std::size_t>(n.left)].size)
                    : 0;
    if (k <= left_size) {
      node = n.left;
      continue;
    }
    if (n.left >= 0) sum += nodes_[static_cast<std::size_t>(n.left)].subtree_sum;
    sum += n.value;
    k -= left_size + 1;
    node = n.right;
  }
  return sum;
}

double ArmStatistics::total_sum() const {
  return root_ >= 0 ? nodes_[static_cast<std::size_t>(root_)].subtree_sum : 0.0;
}

double ArmStatistics::min() const { return kth(0); }

double ArmStatistics::max() const { return kth(count() - 1); }

double trimmed_mean(const ArmStatistics& stats, double alpha) {
  if (!(alpha >= 0.0) || alpha >= 0.5) {
    throw std::invalid_argument("trimmed_mean: alpha must lie in [0, 0.5)");
  }
  const std::size_t n = stats.count();
  if (n == 0) throw std::invalid_argument("trimmed_mean: empty sample");
  const auto k = static_cast<std::size_t>(std::floor(alpha * static_cast<double>(n)));
  const std::size_t retained = n - 2 * k;
  const double sum = stats.prefix_sum(n - k) - stats.prefix_sum(k);
  return sum / static_cast<double>(retained);
}

double empirical_median(const ArmStatistics& stats) {
  const std::size_t n = stats.count();
  if (n == 0) throw std::invalid_argument("empirical_median: empty sample");
  if (n % 2 == 1) return stats.kth(n / 2);
  return 0.5 * (stats.kth(n / 2 - 1) + stats.kth(n / 2));
}

double sample_mean(const ArmStatistics& stats) {
  const std::size_t n = stats.count();
  if (n == 0) throw std::invalid_argument("sample_mean: empty sample");
  return stats.total_sum() / static_cast<double>(n);
}

double policy_trim_fraction(double alpha) {
  return std::min(2.0 * alpha, 0.499);
}

}  // namespace cbai
