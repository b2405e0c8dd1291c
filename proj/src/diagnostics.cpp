#include "ndim/precision.hpp"

namespace ndim {

// One record per thread: series routines on different threads never share
// counters, which keeps the pure-function concurrency contract.
Diagnostics& diagnostics() {
    thread_local Diagnostics d;
    return d;
}

void reset_diagnostics() {
    Diagnostics& d = diagnostics();
    d.terms_used = 0;
    d.tail_bound = 0;
    d.warnings.clear();
}

} // namespace ndim
