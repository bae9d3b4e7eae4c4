#include "selfsim/parallel.hpp"

namespace selfsim {

namespace {
std::atomic<int> configured_jobs{0};
}

void set_jobs(int jobs) { configured_jobs = jobs < 0 ? 0 : jobs; }

int jobs() {
  const int j = configured_jobs;
  if (j > 0) return j;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

}  // namespace selfsim
