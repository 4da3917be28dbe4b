#pragma once

namespace betsim {

// Batch kernels (per-date snapshot builds, per-row posterior batches) come in
// two flavors: the OpenMP path used in production and a plain serial loop
// kept as the reference for testing. Each output slot is computed
// independently, so both flavors produce bit-identical results.
enum class ExecMode { serial, parallel };

// Worker count the parallel path would use (1 when built without OpenMP).
int hardware_threads();

}  // namespace betsim
