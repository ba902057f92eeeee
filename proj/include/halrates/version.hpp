#pragma once

namespace halrates {

inline constexpr const char* kToolVersion = "0.1.0";

} // namespace halrates
