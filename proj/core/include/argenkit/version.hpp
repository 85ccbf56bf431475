#pragma once

#include <string_view>

namespace argenkit {

inline constexpr std::string_view kVersion = "0.1.0";
// Bumped whenever the on-disk layout changes.
inline constexpr int kTokenizerFormatVersion = 1;
inline constexpr int kRunRecordFormatVersion = 1;

}  // namespace argenkit
