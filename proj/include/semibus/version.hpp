#pragma once

namespace semibus {

inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace semibus
