#pragma once

namespace stokeskit {

inline constexpr const char* kVersion = "0.1.0";

} // namespace stokeskit
