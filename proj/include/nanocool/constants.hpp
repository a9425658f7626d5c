#pragma once

// Physical constants (SI). CODATA 2018 / exact SI definitions.
namespace nanocool::consts {

inline constexpr double hbar = 1.054571817e-34;      // J s
inline constexpr double k_boltzmann = 1.380649e-23;  // J/K
inline constexpr double c_light = 299792458.0;       // m/s

}  // namespace nanocool::consts
