#pragma once

namespace qgs {

/// Execution mode for grid kernels. Serial is the reference implementation;
/// Parallel uses OpenMP when compiled in and must produce identical results.
enum class ExecMode { Serial, Parallel };

} // namespace qgs
