#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace cbai {

// Order-maintaining multiset of rewards with O(log N) insert, rank and
// prefix-sum queries. Backed by a treap whose priorities come from a fixed
// per-instance generator, so identical insert sequences build identical trees.
class ArmStatistics {
 public:
  ArmStatistics();

  void insert(double x);  // throws std::invalid_argument on NaN/inf
  std::size_t count() const { return nodes_.size(); }

  double kth(std::size_t k) const;         // 0-based k-th smallest
  double prefix_sum(std::size_t k) const;  // sum of the k smallest, k in [0, count]
  double total_sum() const;
  double min() const;
  double max() const;

 private:
  struct Node {
    double value;
    double subtree_sum;
    std::uint64_t priority;
    std::int32_t left = -1;
    std::int32_t right = -1;
    std::int32_t size = 1;
  };

  std::int32_t merge(std::int32_t a, std::int32_t b);
  void split(std::int32_t node, double key, std::int32_t& lo, std::int32_t& hi);
  void pull(std::int32_t n);

  std::vector<Node> nodes_;
  std::int32_t root_ = -1;
  std::uint64_t prio_state_;
};

// Mean of the central count - 2k samples, k = floor(alpha * count).
// alpha in [0, 0.5); alpha = 0 gives the plain sample mean.
double trimmed_mean(const ArmStatistics& stats, double alpha);

// Middle sample (odd count) or midpoint of the two middle samples (even).
double empirical_median(const ArmStatistics& stats);

double sample_mean(const ArmStatistics& stats);

// Per-side trim fraction the policies feed to trimmed_mean for a given
// exploration parameter alpha (= epsilon/2 by default). The budget covers the
// full contamination rate: an adversary can park every corrupted point in one
// tail, and a per-side trim of alpha would leave half of them in the window.
double policy_trim_fraction(double alpha);

}  // namespace cbai
