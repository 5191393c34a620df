#pragma once

namespace zzbwave {

inline constexpr const char* kToolVersion = "1.0.0";

// Exit codes: 0 success/converged, 1 invalid arguments or unreadable input,
// 2 iteration budget exhausted (outputs still written), 3 numerical failure.
int run_cli(int argc, const char* const* argv);

} // namespace zzbwave
