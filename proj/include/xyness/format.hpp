#pragma once

#include <charconv>
#include <string>
#include <system_error>

#include <Eigen/Core>

namespace xyness {

inline constexpr const char* kVersion = "0.1.0";

inline std::string eigen_version() {
  return std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
         std::to_string(EIGEN_MINOR_VERSION);
}

// 17 significant digits, scientific, independent of the C locale.
inline std::string fmt_real(double v) {
  char buf[40];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::scientific, 16);
  if (ec != std::errc()) return "nan";
  return std::string(buf, end);
}

inline std::string fmt_bool(bool b) { return b ? "true" : "false"; }

}  // namespace xyness
