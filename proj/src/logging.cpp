#include "cesrank/common.hpp"

#include <spdlog/sinks/stdout_sinks.h>
#include <spdlog/spdlog.h>

#include <cstdlib>
#include <mutex>
#include <string>

namespace cesrank {

namespace {

spdlog::level::level_enum level_from_env() {
  const char* raw = std::getenv("RANK_LOG");
  if (raw == nullptr) return spdlog::level::warn;
  const std::string value(raw);
  if (value == "off" || value == "0") return spdlog::level::off;
  if (value == "error") return spdlog::level::err;
  if (value == "info") return spdlog::level::info;
  if (value == "debug") return spdlog::level::debug;
  return spdlog::level::warn;
}

}  // namespace

std::shared_ptr<spdlog::logger> logger() {
  static std::once_flag once;
  static std::shared_ptr<spdlog::logger> instance;
  std::call_once(once, [] {
    auto sink = std::make_shared<spdlog::sinks::stderr_sink_mt>();
    instance = std::make_shared<spdlog::logger>("cesrank", std::move(sink));
    instance->set_pattern("cesrank [%l] %v");
    instance->set_level(level_from_env());
  });
  return instance;
}

}  // namespace cesrank
