#pragma once

namespace ctcr {

/// Execution policy for the grid/slice kernels. Serial is the reference
/// implementation; Parallel must produce bit-identical results (every work
/// item is independent and written to a preallocated slot).
enum class Exec { Serial, Parallel };

/// Worker count for Exec::Parallel: min(OpenMP default, CTCR_THREADS if set).
int worker_count();

/// Applies the CTCR_THREADS cap to the OpenMP runtime. Called once by the CLI;
/// harmless to call again.
void apply_thread_cap();

} // namespace ctcr
