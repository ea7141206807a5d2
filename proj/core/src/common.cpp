#include "log.hpp"

#include <pnsubd/error.hpp>
#include <pnsubd/types.hpp>

#include <spdlog/sinks/stdout_color_sinks.h>

#include <algorithm>
#include <cstdlib>
#include <mutex>
#include <string>

namespace pnsubd {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::TooFewPoints: return "TooFewPoints";
    case ErrorCode::NotDivisible: return "NotDivisible";
    case ErrorCode::DegenerateAverage: return "DegenerateAverage";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::NonManifold: return "NonManifold";
    case ErrorCode::TopologyMismatch: return "TopologyMismatch";
    case ErrorCode::UnknownScheme: return "UnknownScheme";
    case ErrorCode::WrongFaceArity: return "WrongFaceArity";
    case ErrorCode::UnsupportedVariant: return "UnsupportedVariant";
    case ErrorCode::UnsupportedScheme: return "UnsupportedScheme";
    case ErrorCode::LayoutMismatch: return "LayoutMismatch";
    case ErrorCode::NotDiagonalizable: return "NotDiagonalizable";
    case ErrorCode::ComplexClampFailure: return "ComplexClampFailure";
    case ErrorCode::DegenerateTangents: return "DegenerateTangents";
    case ErrorCode::FitDiverged: return "FitDiverged";
    case ErrorCode::NonPositiveEntry: return "NonPositiveEntry";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

ErrorCategory category(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument:
    case ErrorCode::TooFewPoints:
    case ErrorCode::ParseError:
    case ErrorCode::IndexOutOfRange:
    case ErrorCode::NonManifold:
    case ErrorCode::TopologyMismatch:
    case ErrorCode::NonPositiveEntry:
    case ErrorCode::Io:
      return ErrorCategory::Input;
    case ErrorCode::UnknownScheme:
    case ErrorCode::WrongFaceArity:
    case ErrorCode::UnsupportedVariant:
    case ErrorCode::UnsupportedScheme:
    case ErrorCode::LayoutMismatch:
      return ErrorCategory::Scheme;
    case ErrorCode::NotDivisible:
    case ErrorCode::DegenerateAverage:
    case ErrorCode::NotDiagonalizable:
    case ErrorCode::ComplexClampFailure:
    case ErrorCode::DegenerateTangents:
    case ErrorCode::FitDiverged:
      return ErrorCategory::Numeric;
  }
  return ErrorCategory::Numeric;
}

double weight_sum(std::span<const StencilTerm> stencil) {
  double s = 0.0;
  for (const auto& t : stencil) s += t.weight;
  return s;
}

StencilBuilder& StencilBuilder::add(int index, double weight) {
  terms_.push_back({index, weight});
  return *this;
}

StencilBuilder& StencilBuilder::add(std::span<const StencilTerm> other, double scale) {
  for (const auto& t : other) terms_.push_back({t.index, t.weight * scale});
  return *this;
}

Stencil StencilBuilder::build() && {
  std::stable_sort(terms_.begin(), terms_.end(),
                   [](const StencilTerm& a, const StencilTerm& b) { return a.index < b.index; });
  Stencil out;
  out.reserve(terms_.size());
  for (const auto& t : terms_) {
    if (!out.empty() && out.back().index == t.index) {
      out.back().weight += t.weight;
    } else {
      out.push_back(t);
    }
  }
  std::erase_if(out, [](const StencilTerm& t) { return t.weight == 0.0; });
  return out;
}

namespace detail {

std::shared_ptr<spdlog::logger> logger() {
  static std::once_flag once;
  static std::shared_ptr<spdlog::logger> log;
  std::call_once(once, [] {
    log = spdlog::stderr_color_mt("pnsubd");
    log->set_pattern("[%n] %l: %v");
    auto level = spdlog::level::warn;
    if (const char* env = std::getenv("PNSUBD_LOG")) {
      const std::string value = env;
      if (value == "error") level = spdlog::level::err;
      else if (value == "info") level = spdlog::level::info;
      else if (value == "debug") level = spdlog::level::debug;
    }
    log->set_level(level);
  });
  return log;
}

}  // namespace detail
}  // namespace pnsubd
