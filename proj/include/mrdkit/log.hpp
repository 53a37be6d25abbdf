#pragma once

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <string>

namespace mrdkit::log {

enum class Level { Error = 0, Warn = 1, Info = 2, Debug = 3 };

// Threshold comes from MRDKIT_LOG={error,warn,info,debug}; default warn.
inline Level threshold() {
  static Level lvl = [] {
    const char* env = std::getenv("MRDKIT_LOG");
    if (!env) return Level::Warn;
    if (!std::strcmp(env, "error")) return Level::Error;
    if (!std::strcmp(env, "info")) return Level::Info;
    if (!std::strcmp(env, "debug")) return Level::Debug;
    return Level::Warn;
  }();
  return lvl;
}

inline void emit(Level lvl, const char* tag, const std::string& msg) {
  if (lvl > threshold()) return;
  std::fprintf(stderr, "[mrdkit %s] %s\n", tag, msg.c_str());
}

inline void error(const std::string& msg) { emit(Level::Error, "error", msg); }
inline void warn(const std::string& msg) { emit(Level::Warn, "warn", msg); }
inline void info(const std::string& msg) { emit(Level::Info, "info", msg); }
inline void debug(const std::string& msg) { emit(Level::Debug, "debug", msg); }

}  // namespace mrdkit::log
