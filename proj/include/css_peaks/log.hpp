#pragma once

#include <string>
#include <string_view>

namespace css::log {

enum class Level { Error = 0, Warn = 1, Info = 2, Debug = 3 };

/// Verbosity from CSS_PEAKS_LOG (error|warn|info|debug or 0..3), read once;
/// defaults to warn.
Level level();
void set_level(Level level);

void error(std::string_view msg);
void warn(std::string_view msg);
void info(std::string_view msg);
void debug(std::string_view msg);

/// 17 significant digits, as used in every CSV writer.
std::string fmt(double x);

}  // namespace css::log
