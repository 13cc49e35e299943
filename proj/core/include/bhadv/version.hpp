#pragma once

namespace bhadv {

inline constexpr const char* kVersion = "1.0.0";

}  // namespace bhadv
