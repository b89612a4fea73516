#pragma once

#include <cstdarg>
#include <cstdio>
#include <string>

namespace cbai {

inline std::string fmt_msg(const char* format, ...) {
  va_list args;
  va_start(args, format);
  char buffer[512];
  std::vsnprintf(buffer, sizeof(buffer), format, args);
  va_end(args);
  return std::string(buffer);
}

}  // namespace cbai
