#pragma once

namespace uaviov {

inline constexpr const char* kVersionString = "0.1.0";

}  // namespace uaviov
