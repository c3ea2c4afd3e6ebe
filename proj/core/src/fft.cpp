#include "fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <utility>

namespace horizonwave::detail {
namespace {

struct PlanPair {
    fftw_plan forward = nullptr;
    fftw_plan backward = nullptr;
};

class PlanCache {
public:
    ~PlanCache() {
        std::lock_guard lock(mutex_);
        for (auto& [shape, plans] : plans_) {
            fftw_destroy_plan(plans.forward);
            fftw_destroy_plan(plans.backward);
        }
    }

    PlanPair get(const std::vector<int>& shape) {
        std::lock_guard lock(mutex_);
        if (auto it = plans_.find(shape); it != plans_.end()) return it->second;

        std::size_t n = 1;
        for (int s : shape) n *= static_cast<std::size_t>(s);
        // Scratch buffer only used to build the plans; execution goes through
        // fftw_execute_dft on caller-owned (possibly unaligned) storage.
        auto* scratch = fftw_alloc_complex(n);
        const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
        PlanPair pair;
        pair.forward = fftw_plan_dft(static_cast<int>(shape.size()), shape.data(), scratch, scratch,
                                     FFTW_FORWARD, flags);
        pair.backward = fftw_plan_dft(static_cast<int>(shape.size()), shape.data(), scratch,
                                      scratch, FFTW_BACKWARD, flags);
        fftw_free(scratch);
        plans_.emplace(shape, pair);
        return pair;
    }

private:
    std::mutex mutex_;
    std::map<std::vector<int>, PlanPair> plans_;
};

PlanCache& cache() {
    static PlanCache instance;
    return instance;
}

fftw_complex* as_fftw(std::vector<std::complex<double>>& data) {
    return reinterpret_cast<fftw_complex*>(data.data());
}

}  // namespace

void fft_forward(std::vector<std::complex<double>>& data, const std::vector<int>& shape) {
    const auto plans = cache().get(shape);
    fftw_execute_dft(plans.forward, as_fftw(data), as_fftw(data));
}

void fft_backward(std::vector<std::complex<double>>& data, const std::vector<int>& shape) {
    const auto plans = cache().get(shape);
    fftw_execute_dft(plans.backward, as_fftw(data), as_fftw(data));
}

}  // namespace horizonwave::detail
