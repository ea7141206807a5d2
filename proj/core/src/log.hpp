#pragma once

#include <spdlog/spdlog.h>

#include <memory>

namespace pnsubd::detail {

/// Library logger, writing to stderr. The level comes from PNSUBD_LOG
/// (error|info|debug), defaulting to warn.
std::shared_ptr<spdlog::logger> logger();

}  // namespace pnsubd::detail
