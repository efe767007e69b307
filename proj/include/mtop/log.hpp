#pragma once

#include <string>

namespace mtop::log {

enum class Level { Error = 0, Warn = 1, Info = 2, Debug = 3 };

// Threshold comes from MTOP_LOG_LEVEL (error|warn|info|debug), default warn.
Level threshold();

void message(Level level, const std::string& text);

inline void error(const std::string& text) { message(Level::Error, text); }
inline void warn(const std::string& text) { message(Level::Warn, text); }
inline void info(const std::string& text) { message(Level::Info, text); }
inline void debug(const std::string& text) { message(Level::Debug, text); }

}  // namespace mtop::log
