#pragma once

namespace patentmap {

/// Selects the OpenMP kernel or the plain serial reference loop. Both paths
/// produce bit-identical results; the serial one is kept for testing and
/// benchmarking.
enum class Execution { Serial, Parallel };

}  // namespace patentmap
