#pragma once

#include <cstddef>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace dbp::par {

enum class Mode { serial, openmp };

inline Mode default_mode() {
#ifdef _OPENMP
  return Mode::openmp;
#else
  return Mode::serial;
#endif
}

// Evaluates fn(i) for i in [0, n) into a vector. Each slot is written
// independently, so serial and OpenMP execution produce bit-identical
// results; the serial path is the reference the parallel one is tested
// against. fn must not throw for the OpenMP path (table cells and Monte
// Carlo draws catch their own failures and encode them in the result).
template <class T, class F>
std::vector<T> map(std::size_t n, F&& fn, Mode mode = default_mode()) {
  std::vector<T> out(n);
#ifdef _OPENMP
  if (mode == Mode::openmp) {
#pragma omp parallel for schedule(dynamic)
    for (long long i = 0; i < static_cast<long long>(n); ++i)
      out[static_cast<std::size_t>(i)] = fn(static_cast<std::size_t>(i));
    return out;
  }
#else
  (void)mode;
#endif
  for (std::size_t i = 0; i < n; ++i) out[i] = fn(i);
  return out;
}

template <class F>
std::vector<double> map_double(std::size_t n, F&& fn,
                               Mode mode = default_mode()) {
  return map<double>(n, std::forward<F>(fn), mode);
}

// Deterministic reduction: always sums in index order regardless of how the
// values were produced.
inline double sum(const std::vector<double>& v) {
  double acc = 0.0;
  for (double x : v) acc += x;
  return acc;
}

}  // namespace dbp::par
