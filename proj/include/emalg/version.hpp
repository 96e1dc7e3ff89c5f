#pragma once

namespace emalg {

inline constexpr const char* kToolName = "emalg";
inline constexpr const char* kToolVersion = "1.0.0";
inline constexpr const char* kReportSchema = "emalg-report/1";
inline constexpr const char* kConfigSchema = "emalg-config/1";

}  // namespace emalg
