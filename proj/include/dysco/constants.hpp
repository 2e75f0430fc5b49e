#pragma once

namespace dysco {

inline constexpr double pi = 3.14159265358979323846;
inline constexpr double two_pi = 2.0 * pi;

// NV electron gyromagnetic ratio, rad/s per tesla (approx -2*pi*28 GHz/T).
inline constexpr double gamma_nv_default = -two_pi * 28.0e9;

// 13C nuclear gyromagnetic ratio, Hz per tesla.
inline constexpr double gamma_c13_hz_per_t = 10.705e6;

inline constexpr const char* tool_version = "dysco 0.1.0";

}  // namespace dysco
