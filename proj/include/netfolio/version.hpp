#pragma once

namespace netfolio {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace netfolio
