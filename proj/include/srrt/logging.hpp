#pragma once

namespace srrt {

/// Applies the SRRT_LOG environment variable (trace, debug, info, warn,
/// error, off) to the default logger. Unset leaves the level at warn.
void configure_logging_from_env();

}  // namespace srrt
