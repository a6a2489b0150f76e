#pragma once

namespace flex {

// Selects the serial reference loop or the OpenMP kernel for data-parallel
// operations. Both produce the same values up to floating-point reassociation.
enum class Exec { Serial, Parallel };

}  // namespace flex
