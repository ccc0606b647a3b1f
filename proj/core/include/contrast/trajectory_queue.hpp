#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "contrast/types.hpp"

namespace contrast {

/// Keeps the K highest-reward trajectories seen so far.
///
/// Among equal rewards the earlier insertion ranks higher, so a newcomer
/// that only ties the current minimum of a full queue is rejected.
class TrajectoryQueue {
 public:
  explicit TrajectoryQueue(std::size_t capacity);

  /// Returns true if the trajectory is now held by the queue.
  bool insert(Trajectory trajectory);
  /// Removes the current minimum. InvalidState on an empty queue.
  Trajectory pop_min();

  std::size_t size() const { return entries_.size(); }
  std::size_t capacity() const { return capacity_; }
  bool empty() const { return entries_.empty(); }

  /// Contents ordered by descending reward, earlier insertion first on ties.
  std::vector<Trajectory> sorted() const;

 private:
  struct Entry {
    Trajectory trajectory;
    std::uint64_t order = 0;
  };
  // Index of the entry that would be evicted next.
  std::size_t min_index() const;

  std::size_t capacity_;
  std::uint64_t next_order_ = 0;
  std::vector<Entry> entries_;
};

}  // namespace contrast
