#include "scmpc/log.hpp"

#include <cstdlib>
#include <iostream>

namespace scmpc::log {

Level level() {
  static const Level cached = [] {
    const char* env = std::getenv("SCMPC_LOG");
    if (!env) return Level::off;
    const std::string v(env);
    if (v == "debug") return Level::debug;
    if (v == "info") return Level::info;
    return Level::off;
  }();
  return cached;
}

void info(const std::string& message) {
  if (level() >= Level::info) std::cerr << "[scmpc] " << message << '\n';
}

void debug(const std::string& message) {
  if (level() >= Level::debug) std::cerr << "[scmpc:debug] " << message << '\n';
}

}  // namespace scmpc::log
