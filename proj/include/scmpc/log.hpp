#pragma once

#include <string>

// Minimal stderr logger. Verbosity comes from the SCMPC_LOG environment
// variable: "off" (default), "info", or "debug".
namespace scmpc::log {

enum class Level { off = 0, info = 1, debug = 2 };

Level level();
void info(const std::string& message);
void debug(const std::string& message);

}  // namespace scmpc::log
