#include "lingstat/log.hpp"

#include <atomic>
#include <iostream>
#include <mutex>

namespace lingstat::log {

namespace {
std::atomic<Level> g_level{Level::warn};
std::mutex g_mutex;
}  // namespace

void set_level(Level level) { g_level = level; }
Level level() { return g_level; }

void warn(std::string_view msg) {
  if (g_level == Level::quiet) return;
  std::lock_guard lock(g_mutex);
  std::cerr << "warning: " << msg << '\n';
}

void info(std::string_view msg) {
  if (g_level != Level::info) return;
  std::lock_guard lock(g_mutex);
  std::cerr << msg << '\n';
}

}  // namespace lingstat::log
