#include <charconv>
#include <cmath>

#include "robench/render.hpp"

namespace robench {

std::string format_number(double v) {
  if (v == 0.0) return "0";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::fixed);
  return std::string(buf, res.ptr);
}

}  // namespace robench
