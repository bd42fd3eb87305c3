#include "porous/log.hpp"

#include <cstdio>
#include <cstdlib>
#include <cstring>

namespace porous::log {

Level threshold() {
  static const Level cached = [] {
    const char* env = std::getenv("POROUS_ADJOINT_LOG");
    if (env == nullptr) return Level::Error;
    if (std::strcmp(env, "debug") == 0) return Level::Debug;
    if (std::strcmp(env, "info") == 0) return Level::Info;
    return Level::Error;
  }();
  return cached;
}

void write(Level level, const std::string& msg) {
  if (level > threshold()) return;
  const char* tag = level == Level::Error  ? "error"
                    : level == Level::Info ? "info"
                                           : "debug";
  std::fprintf(stderr, "[porous:%s] %s\n", tag, msg.c_str());
}

}  // namespace porous::log
