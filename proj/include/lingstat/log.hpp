#pragma once

#include <string_view>

namespace lingstat::log {

enum class Level { quiet, warn, info };

void set_level(Level level);
Level level();

void warn(std::string_view msg);
void info(std::string_view msg);

}  // namespace lingstat::log
