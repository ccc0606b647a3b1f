#include "contrast/coupled_sim.hpp"

#include <atomic>

namespace contrast {

std::uint64_t next_simulator_id() {
  static std::atomic<std::uint64_t> counter{0};
  return ++counter;
}

}  // namespace contrast
