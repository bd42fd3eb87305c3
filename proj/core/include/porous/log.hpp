#pragma once

#include <string>

namespace porous::log {

enum class Level { Error = 0, Info = 1, Debug = 2 };

/// Threshold from POROUS_ADJOINT_LOG in {error, info, debug}; default error.
Level threshold();

void write(Level level, const std::string& msg);

inline void error(const std::string& msg) { write(Level::Error, msg); }
inline void info(const std::string& msg) { write(Level::Info, msg); }
inline void debug(const std::string& msg) { write(Level::Debug, msg); }

}  // namespace porous::log
