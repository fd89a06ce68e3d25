#pragma once

namespace ecl {

inline constexpr const char* kCodeVersion = "1.0.0";
// Bumped whenever cached enumeration output could change.
inline constexpr int kCacheFormatVersion = 1;
inline constexpr int kReportSchemaVersion = 1;

}  // namespace ecl
