#include "lscale/log.hpp"

#include <atomic>
#include <iostream>

namespace lscale {

namespace {
std::atomic<int> g_level{1};
}

void set_log_level(int level) { g_level.store(level); }
int log_level() { return g_level.load(); }

void log_note(const std::string& msg) {
  if (g_level.load() > 0) std::cerr << "[lscale] " << msg << "\n";
}

}  // namespace lscale
