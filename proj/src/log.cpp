#include "css_peaks/log.hpp"

#include <atomic>
#include <cstdlib>
#include <iostream>
#include <mutex>
#include <sstream>

namespace css::log {

namespace {

Level parse(const char* s) {
  if (s == nullptr) return Level::Warn;
  const std::string v(s);
  if (v == "error" || v == "0") return Level::Error;
  if (v == "warn" || v == "1") return Level::Warn;
  if (v == "info" || v == "2") return Level::Info;
  if (v == "debug" || v == "3") return Level::Debug;
  return Level::Warn;
}

std::atomic<int>& current() {
  static std::atomic<int> value{static_cast<int>(parse(std::getenv("CSS_PEAKS_LOG")))};
  return value;
}

std::mutex& sink_mutex() {
  static std::mutex m;
  return m;
}

void emit(Level at, const char* tag, std::string_view msg) {
  if (static_cast<int>(at) > current().load()) return;
  std::lock_guard lock(sink_mutex());
  std::cerr << "[css_peaks " << tag << "] " << msg << '\n';
}

}  // namespace

Level level() { return static_cast<Level>(current().load()); }
void set_level(Level l) { current().store(static_cast<int>(l)); }

void error(std::string_view msg) { emit(Level::Error, "error", msg); }
void warn(std::string_view msg) { emit(Level::Warn, "warn", msg); }
void info(std::string_view msg) { emit(Level::Info, "info", msg); }
void debug(std::string_view msg) { emit(Level::Debug, "debug", msg); }

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

}  // namespace css::log
