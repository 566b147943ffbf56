#include "nvc/fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <map>
#include <mutex>

namespace nvc::fft {

namespace {

// FFTW's planner is not re-entrant; execution with distinct plans is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

enum class Kind { r2c, c2r };

// Plans are cached per thread and reused through the new-array execute API;
// FFTW_UNALIGNED makes that valid for any buffers.
class PlanCache {
public:
    PlanCache() = default;
    PlanCache(const PlanCache&) = delete;
    PlanCache& operator=(const PlanCache&) = delete;
    ~PlanCache() {
        std::lock_guard lock(planner_mutex());
        for (auto& [key, plan] : plans_) {
            fftw_destroy_plan(plan);
        }
    }

    fftw_plan get(Kind kind, std::size_t n) {
        const auto key = std::make_pair(kind, n);
        if (auto it = plans_.find(key); it != plans_.end()) {
            return it->second;
        }
        std::vector<double> real(n);
        std::vector<std::complex<double>> cplx(n / 2 + 1);
        auto* c = reinterpret_cast<fftw_complex*>(cplx.data());
        fftw_plan plan = nullptr;
        {
            std::lock_guard lock(planner_mutex());
            plan = kind == Kind::r2c
                       ? fftw_plan_dft_r2c_1d(static_cast<int>(n), real.data(), c,
                                              FFTW_ESTIMATE | FFTW_UNALIGNED)
                       : fftw_plan_dft_c2r_1d(static_cast<int>(n), c, real.data(),
                                              FFTW_ESTIMATE | FFTW_UNALIGNED);
        }
        plans_.emplace(key, plan);
        return plan;
    }

private:
    std::map<std::pair<Kind, std::size_t>, fftw_plan> plans_;
};

fftw_plan cached_plan(Kind kind, std::size_t n) {
    thread_local PlanCache cache;
    return cache.get(kind, n);
}

} // namespace

std::vector<std::complex<double>> forward_real(std::span<const double> input) {
    const auto n = input.size();
    std::vector<double> in(input.begin(), input.end());
    std::vector<std::complex<double>> out(n / 2 + 1);
    if (n == 0) {
        return {};
    }
    fftw_execute_dft_r2c(cached_plan(Kind::r2c, n), in.data(),
                         reinterpret_cast<fftw_complex*>(out.data()));
    return out;
}

std::vector<double> inverse_real(std::span<const std::complex<double>> bins, std::size_t n) {
    std::vector<std::complex<double>> in(n / 2 + 1);
    std::copy_n(bins.begin(), std::min(bins.size(), in.size()), in.begin());
    std::vector<double> out(n);
    if (n == 0) {
        return out;
    }
    fftw_execute_dft_c2r(cached_plan(Kind::c2r, n), reinterpret_cast<fftw_complex*>(in.data()),
                         out.data());
    return out;
}

std::size_t good_size(std::size_t n) {
    if (n <= 1) {
        return 1;
    }
    for (std::size_t m = n;; ++m) {
        std::size_t r = m;
        for (std::size_t p : {2U, 3U, 5U, 7U}) {
            while (r % p == 0) {
                r /= p;
            }
        }
        if (r == 1) {
            return m;
        }
    }
}

} // namespace nvc::fft
