#include "cltlab/parallel.hpp"

#include <cstdlib>
#include <string>

namespace cltlab {

unsigned worker_count() {
  if (const char* env = std::getenv("CLTLAB_THREADS")) {
    try {
      const long v = std::stol(env);
      if (v >= 1) return static_cast<unsigned>(v);
    } catch (...) {
    }
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

}  // namespace cltlab
