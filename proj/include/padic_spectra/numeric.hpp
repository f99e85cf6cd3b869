#ifndef PADIC_SPECTRA_NUMERIC_HPP
#define PADIC_SPECTRA_NUMERIC_HPP

// Small numerical utilities shared by the series and scan code.

#include <algorithm>
#include <complex>
#include <cstdlib>
#include <exception>
#include <functional>
#include <limits>
#include <string>
#include <thread>
#include <type_traits>
#include <vector>

namespace padic_spectra {

using complex = std::complex<double>;

inline constexpr double machine_eps = std::numeric_limits<double>::epsilon();

/// Kahan-Babuska (Neumaier) compensated accumulator.
template <typename T>
class CompensatedSum {
public:
  void add(T x) {
    if constexpr (std::is_same_v<T, complex>) {
      re_.add(x.real());
      im_.add(x.imag());
    } else {
      const T t = sum_ + x;
      if (std::abs(sum_) >= std::abs(x))
        comp_ += (sum_ - t) + x;
      else
        comp_ += (x - t) + sum_;
      sum_ = t;
    }
  }
  T value() const {
    if constexpr (std::is_same_v<T, complex>)
      return {re_.value(), im_.value()};
    else
      return sum_ + comp_;
  }

private:
  struct Empty {};
  using Part = std::conditional_t<std::is_same_v<T, complex>, CompensatedSum<double>, Empty>;
  T sum_{};
  T comp_{};
  [[no_unique_address]] Part re_{};
  [[no_unique_address]] Part im_{};
};

/// Worker count: PADIC_SPECTRA_THREADS if set and positive, otherwise the
/// hardware concurrency.
inline unsigned worker_count() {
  if (const char* env = std::getenv("PADIC_SPECTRA_THREADS")) {
    char* end = nullptr;
    const long n = std::strtol(env, &end, 10);
    if (end != env && n > 0)
      return static_cast<unsigned>(n);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

/// Evaluates fn(0..count-1) on up to worker_count() threads. Results are
/// returned by index, so the output does not depend on scheduling. The first
/// exception (by index) is rethrown.
template <typename R>
std::vector<R> parallel_map(std::size_t count, const std::function<R(std::size_t)>& fn) {
  std::vector<R> results(count);
  std::vector<std::exception_ptr> errors(count);
  const std::size_t workers = std::min<std::size_t>(worker_count(), count);
  auto run = [&](std::size_t first) {
    for (std::size_t i = first; i < count; i += std::max<std::size_t>(workers, 1)) {
      try {
        results[i] = fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (workers <= 1) {
    run(0);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w)
      pool.emplace_back(run, w);
    for (auto& t : pool)
      t.join();
  }
  for (auto& e : errors)
    if (e)
      std::rethrow_exception(e);
  return results;
}

} // namespace padic_spectra

#endif // PADIC_SPECTRA_NUMERIC_HPP
