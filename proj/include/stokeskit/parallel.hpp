#pragma once

namespace stokeskit {

// Applies the STOKESKIT_THREADS cap to the OpenMP runtime; returns the
// effective thread count. Call once at program start.
int apply_thread_cap_from_env();

} // namespace stokeskit
