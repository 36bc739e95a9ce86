#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <future>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace beltrami {

using cd = std::complex<double>;

inline constexpr double pi = 3.14159265358979323846;

class Error : public std::runtime_error {
  public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Bad sizes, invalid parameters, malformed configuration.
class ConfigError : public Error {
  public:
    explicit ConfigError(const std::string& msg) : Error(msg) {}
};

/// Iteration did not reach the requested tolerance.
class SolveError : public Error {
  public:
    explicit SolveError(const std::string& msg) : Error(msg) {}
};

/// Worker cap shared by all parallel loops. 0 means "pick hardware".
inline int& thread_cap() {
    static int cap = 1;
    return cap;
}

inline int effective_threads() {
    int cap = thread_cap();
    if (cap <= 0) {
        unsigned hw = std::thread::hardware_concurrency();
        cap = hw == 0 ? 1 : static_cast<int>(hw);
    }
    return cap;
}

/// Chunked parallel loop over [begin, end). Each index must touch disjoint
/// state; results are deterministic regardless of the worker count.
inline void parallel_for(std::size_t begin, std::size_t end,
                         const std::function<void(std::size_t)>& body) {
    const std::size_t n = end > begin ? end - begin : 0;
    const int workers = effective_threads();
    if (n == 0) return;
    if (workers <= 1 || n == 1) {
        for (std::size_t i = begin; i < end; ++i) body(i);
        return;
    }
    const std::size_t chunk = (n + workers - 1) / workers;
    std::vector<std::future<void>> futs;
    for (int w = 0; w < workers; ++w) {
        std::size_t lo = begin + chunk * w;
        std::size_t hi = lo + chunk < end ? lo + chunk : end;
        if (lo >= hi) break;
        futs.push_back(std::async(std::launch::async, [lo, hi, &body] {
            for (std::size_t i = lo; i < hi; ++i) body(i);
        }));
    }
    for (auto& f : futs) f.get();
}

/// SplitMix64; used everywhere randomness is needed so that runs are
/// reproducible bit-for-bit from a 64-bit seed across platforms.
class Rng {
  public:
    explicit Rng(std::uint64_t seed = 0) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, 1).
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform in [-1, 1).
    double sym() { return 2.0 * uniform() - 1.0; }

    cd complex_sym() { return cd(sym(), sym()); }

  private:
    std::uint64_t state_;
};

}  // namespace beltrami
