#pragma once

namespace riskonly {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace riskonly
