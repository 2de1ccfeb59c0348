#pragma once

#include <cstddef>
#include <cstdlib>
#include <vector>

#include <omp.h>

namespace fanomom {

/// Execution policy for the sweep kernels.  Every parallel kernel in this
/// library is a pure map into preallocated slots followed by a serial
/// reduction, so Serial and OpenMP produce bit-identical results; the serial
/// path is kept as the reference implementation for tests and as the
/// baseline for the benchmark tool.
enum class Exec { Serial, OpenMP };

/// Thread budget: FANOMOM_THREADS caps the OpenMP team size (unset or 0
/// means "whatever OpenMP would use").
inline int max_threads() {
    static const int cached = [] {
        int hw = omp_get_max_threads();
        if (const char* env = std::getenv("FANOMOM_THREADS")) {
            char* end = nullptr;
            long v = std::strtol(env, &end, 10);
            if (end != env && v > 0 && v < hw) hw = static_cast<int>(v);
        }
        return hw;
    }();
    return cached;
}

/// Apply f(i) for i in [0, n).  f must only write state owned by index i.
template <class F>
void for_indexed(std::size_t n, Exec exec, F&& f) {
    if (exec == Exec::OpenMP) {
        const long long nn = static_cast<long long>(n);
#pragma omp parallel for schedule(static) num_threads(max_threads())
        for (long long i = 0; i < nn; ++i) f(static_cast<std::size_t>(i));
    } else {
        for (std::size_t i = 0; i < n; ++i) f(i);
    }
}

/// Map g over [0, n) into a fresh vector (slot-per-index, deterministic).
template <class G>
std::vector<double> map_indexed(std::size_t n, Exec exec, G&& g) {
    std::vector<double> out(n);
    for_indexed(n, exec, [&](std::size_t i) { out[i] = g(i); });
    return out;
}

/// Serial left-to-right sum of a slot vector.  Keeping the reduction serial
/// (and the map slot-based) is what makes results independent of the thread
/// count, which the CLI's determinism contract relies on.
inline double reduce_sum(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
}

}  // namespace fanomom
