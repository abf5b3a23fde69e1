#pragma once

#include <string>

namespace lscale {

// 0 = silent, 1 = notes (default). Diagnostics go to stderr.
void set_log_level(int level);
int log_level();
void log_note(const std::string& msg);

}  // namespace lscale
