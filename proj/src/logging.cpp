#include "srrt/logging.hpp"

#include <cstdlib>
#include <string>

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

namespace srrt {

void configure_logging_from_env() {
  static const bool once = [] {
    auto logger = spdlog::stderr_color_mt("srrt");
    spdlog::set_default_logger(logger);
    return true;
  }();
  (void)once;
  spdlog::level::level_enum level = spdlog::level::warn;
  if (const char* env = std::getenv("SRRT_LOG"); env != nullptr && *env != '\0') {
    level = spdlog::level::from_str(env);
  }
  spdlog::set_level(level);
}

}  // namespace srrt
