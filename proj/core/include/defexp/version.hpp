#pragma once

namespace defexp {

inline constexpr const char* kVersion = "0.1.0";
// Version of the JSON model/result schemas emitted and accepted by the CLI.
inline constexpr int kSchemaVersion = 1;

}  // namespace defexp
