#pragma once

namespace deepspread {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace deepspread
