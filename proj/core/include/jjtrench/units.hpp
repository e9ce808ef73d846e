#pragma once

// Unit conversions shared across modules. Energies given in micro-eV are
// divided by the electron charge and handled as micro-volts.

#include <numbers>

namespace jjtrench::units {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// current
inline constexpr double kMicroAmpToNanoAmp = 1e3;
// 1 uA/um^2 = 1e-6 A / 1e-8 cm^2
inline constexpr double kMicroAmpPerUm2ToAmpPerCm2 = 100.0;
// frequency
inline constexpr double kKiloHertz = 1e3;
inline constexpr double kMegaHertz = 1e6;
// time
inline constexpr double kMicroSecond = 1e-6;
// area
inline constexpr double kNm2ToUm2 = 1e-6;

}  // namespace jjtrench::units
