#include "contrast/trajectory_queue.hpp"

#include <algorithm>
#include <cmath>

#include "contrast/errors.hpp"

namespace contrast {

TrajectoryQueue::TrajectoryQueue(std::size_t capacity) : capacity_(capacity) {
  if (capacity_ == 0) throw InvalidInput("queue capacity must be >= 1");
  entries_.reserve(capacity_ + 1);
}

std::size_t TrajectoryQueue::min_index() const {
  std::size_t worst = 0;
  for (std::size_t i = 1; i < entries_.size(); ++i) {
    const double r = entries_[i].trajectory.total_reward;
    const double w = entries_[worst].trajectory.total_reward;
    if (r < w || (r == w && entries_[i].order > entries_[worst].order)) worst = i;
  }
  return worst;
}

bool TrajectoryQueue::insert(Trajectory trajectory) {
  if (!std::isfinite(trajectory.total_reward)) throw InvalidInput("trajectory reward is not finite");
  const std::uint64_t order = next_order_++;
  if (entries_.size() < capacity_) {
    entries_.push_back({std::move(trajectory), order});
    return true;
  }
  const std::size_t worst = min_index();
  if (!(trajectory.total_reward > entries_[worst].trajectory.total_reward)) return false;
  entries_[worst] = {std::move(trajectory), order};
  return true;
}

Trajectory TrajectoryQueue::pop_min() {
  if (entries_.empty()) throw InvalidState("pop_min on an empty queue");
  const std::size_t worst = min_index();
  Trajectory out = std::move(entries_[worst].trajectory);
  entries_.erase(entries_.begin() + static_cast<std::ptrdiff_t>(worst));
  return out;
}

std::vector<Trajectory> TrajectoryQueue::sorted() const {
  std::vector<const Entry*> order;
  order.reserve(entries_.size());
  for (const auto& e : entries_) order.push_back(&e);
  std::sort(order.begin(), order.end(), [](const Entry* a, const Entry* b) {
    if (a->trajectory.total_reward != b->trajectory.total_reward) {
      return a->trajectory.total_reward > b->trajectory.total_reward;
    }
    return a->order < b->order;
  });
  std::vector<Trajectory> out;
  out.reserve(order.size());
  for (const Entry* e : order) out.push_back(e->trajectory);
  return out;
}

}  // namespace contrast
