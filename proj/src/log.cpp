#include "mtop/log.hpp"

#include <cstdlib>
#include <iostream>
#include <mutex>

namespace mtop::log {

namespace {

Level parse_level() {
    const char* env = std::getenv("MTOP_LOG_LEVEL");
    if (env == nullptr) {
        return Level::Warn;
    }
    const std::string value(env);
    if (value == "error") {
        return Level::Error;
    }
    if (value == "warn") {
        return Level::Warn;
    }
    if (value == "info") {
        return Level::Info;
    }
    if (value == "debug") {
        return Level::Debug;
    }
    return Level::Warn;
}

const char* level_name(Level level) {
    switch (level) {
        case Level::Error:
            return "error";
        case Level::Warn:
            return "warn";
        case Level::Info:
            return "info";
        case Level::Debug:
            return "debug";
    }
    return "?";
}

std::mutex g_mutex;

}  // namespace

Level threshold() {
    static const Level level = parse_level();
    return level;
}

void message(Level level, const std::string& text) {
    if (static_cast<int>(level) > static_cast<int>(threshold())) {
        return;
    }
    std::lock_guard<std::mutex> lock(g_mutex);
    std::cerr << "[" << level_name(level) << "] " << text << "\n";
}

}  // namespace mtop::log
