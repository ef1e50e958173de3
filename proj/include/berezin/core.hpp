#ifndef BEREZIN_CORE_HPP
#define BEREZIN_CORE_HPP

#include <algorithm>
#include <atomic>
#include <complex>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace berezin {

using cplx = std::complex<double>;

inline constexpr double pi = std::numbers::pi;
inline constexpr cplx I{0.0, 1.0};

enum class Model { half_plane, disk };

inline const char* model_name(Model m) {
    return m == Model::half_plane ? "half-plane" : "disk";
}

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ModelMismatch : Error {
    ModelMismatch() : Error("points belong to different models") {}
    explicit ModelMismatch(const std::string& m) : Error(m) {}
};

// Evaluation requested where a truncated expansion is not certified.
struct PrecisionError : Error {
    using Error::Error;
};

struct DomainError : Error {
    using Error::Error;
};

struct PreconditionError : Error {
    using Error::Error;
};

struct ConventionError : Error {
    using Error::Error;
};

// Thrown when an adaptive rule stops short of its tolerance. Carries the
// partial estimate so callers can report it.
struct AccuracyError : Error {
    cplx partial;
    double error_estimate;
    long long evaluations;
    AccuracyError(const std::string& what, cplx v, double e, long long n)
        : Error(what), partial(v), error_estimate(e), evaluations(n) {}
};

struct BudgetError : Error {
    long long evaluations;
    BudgetError(const std::string& what, long long n) : Error(what), evaluations(n) {}
};

// Number of worker threads used for panel evaluation. BEREZIN_WORKERS
// overrides the hardware default.
inline unsigned worker_count() {
    if (const char* env = std::getenv("BEREZIN_WORKERS")) {
        int n = std::atoi(env);
        if (n > 0) return static_cast<unsigned>(n);
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1u : hw;
}

// Evaluates body(i) for i in [0, n). Each index writes its own slot, so the
// caller's reduction order does not depend on scheduling.
inline thread_local bool inside_parallel_region = false;

template <class Body>
void parallel_for(std::size_t n, Body&& body) {
    unsigned workers = static_cast<unsigned>(std::min<std::size_t>(worker_count(), n));
    if (workers <= 1 || n < 2 || inside_parallel_region) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            inside_parallel_region = true;
            try {
                for (std::size_t i = next++; i < n; i = next++) body(i);
            } catch (...) {
                errors[w] = std::current_exception();
                next = n;
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

// Principal power w^r = exp(r log w).
inline cplx cpow(cplx w, double r) { return std::exp(r * std::log(w)); }

inline double rel_err(cplx a, cplx b) {
    double s = std::max(std::abs(a), std::abs(b));
    return s == 0.0 ? 0.0 : std::abs(a - b) / s;
}

}  // namespace berezin

#endif
