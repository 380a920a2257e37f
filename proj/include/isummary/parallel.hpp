#pragma once

namespace isummary {

/// Selects between the OpenMP kernel and its serial reference.
enum class Execution { Serial, Parallel };

/// Thread count used by parallel kernels: `ISUMMARY_THREADS` when set to a
/// positive integer, otherwise the OpenMP default. Always 1 without OpenMP.
int threadCount();

/// Applies `ISUMMARY_THREADS` to the OpenMP runtime.
void applyThreadLimitFromEnvironment();

}  // namespace isummary
