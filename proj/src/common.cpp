#include "spie/common.hpp"

#include <cstdio>
#include <cstdlib>

#ifndef SPIE_DEFAULT_DATA_DIR
#define SPIE_DEFAULT_DATA_DIR "data"
#endif

namespace spie {

std::filesystem::path data_dir() {
  if (const char* env = std::getenv("SPIE_DATA_DIR"); env != nullptr && *env != '\0') {
    return std::filesystem::path(env);
  }
  return std::filesystem::path(SPIE_DEFAULT_DATA_DIR);
}

std::filesystem::path data_path(const std::string& relative) {
  return data_dir() / relative;
}

std::uint64_t fnv1a(const std::string& text) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

std::string hex64(std::uint64_t value) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(value));
  return buf;
}

}  // namespace spie
