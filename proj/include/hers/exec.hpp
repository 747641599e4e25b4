#pragma once

namespace hers {

/// Selects the kernel variant. `Serial` is the reference implementation;
/// `Parallel` uses OpenMP and must produce bit-identical results.
enum class Exec { Serial, Parallel };

/// Number of OpenMP threads available to `Exec::Parallel` kernels (1 without OpenMP).
int max_threads();

/// Sets the OpenMP thread count; no-op without OpenMP.
void set_threads(int n);

}  // namespace hers
