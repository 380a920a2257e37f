#include "isummary/parallel.hpp"

#include <cstdlib>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace isummary {

namespace {

int threadsFromEnvironment() {
  const char* value = std::getenv("ISUMMARY_THREADS");
  if (value == nullptr) return 0;
  try {
    int n = std::stoi(value);
    return n > 0 ? n : 0;
  } catch (const std::exception&) {
    return 0;
  }
}

}  // namespace

int threadCount() {
#ifdef _OPENMP
  int fromEnv = threadsFromEnvironment();
  return fromEnv > 0 ? fromEnv : omp_get_max_threads();
#else
  return 1;
#endif
}

void applyThreadLimitFromEnvironment() {
#ifdef _OPENMP
  if (int n = threadsFromEnvironment(); n > 0) omp_set_num_threads(n);
#endif
}

}  // namespace isummary
