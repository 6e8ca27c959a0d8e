#include "fracns/fft.hpp"

#include <fftw3.h>

#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <vector>

namespace fracns {

namespace {
std::mutex& plan_mutex() {
    static std::mutex m;
    return m;
}
}  // namespace

SpectralTransform::SpectralTransform(int n) : n_(n) {
    if (n < 2) throw std::invalid_argument("SpectralTransform: n < 2");
    const std::size_t total = static_cast<std::size_t>(n) * n * n;
    // Scratch buffers used only for planning; FFTW_UNALIGNED lets the plans
    // execute later on arbitrary caller-owned storage.
    std::vector<std::complex<double>> a(total), b(total);
    auto* pa = reinterpret_cast<fftw_complex*>(a.data());
    auto* pb = reinterpret_cast<fftw_complex*>(b.data());
    forward_ = fftw_plan_dft_3d(n, n, n, pa, pb, FFTW_FORWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
    backward_ = fftw_plan_dft_3d(n, n, n, pa, pb, FFTW_BACKWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (!forward_ || !backward_) throw std::runtime_error("SpectralTransform: planning failed");
}

SpectralTransform::~SpectralTransform() {
    fftw_destroy_plan(static_cast<fftw_plan>(forward_));
    fftw_destroy_plan(static_cast<fftw_plan>(backward_));
}

const SpectralTransform& SpectralTransform::for_size(int n) {
    std::lock_guard<std::mutex> lock(plan_mutex());
    static std::map<int, std::unique_ptr<SpectralTransform>> registry;
    auto& slot = registry[n];
    if (!slot) slot.reset(new SpectralTransform(n));
    return *slot;
}

void SpectralTransform::to_physical(const std::complex<double>* spec,
                                    std::complex<double>* phys) const {
    fftw_execute_dft(static_cast<fftw_plan>(backward_),
                     reinterpret_cast<fftw_complex*>(const_cast<std::complex<double>*>(spec)),
                     reinterpret_cast<fftw_complex*>(phys));
}

void SpectralTransform::to_spectral(const std::complex<double>* phys,
                                    std::complex<double>* spec) const {
    fftw_execute_dft(static_cast<fftw_plan>(forward_),
                     reinterpret_cast<fftw_complex*>(const_cast<std::complex<double>*>(phys)),
                     reinterpret_cast<fftw_complex*>(spec));
    const double scale = 1.0 / (static_cast<double>(n_) * n_ * n_);
    const std::size_t total = static_cast<std::size_t>(n_) * n_ * n_;
    for (std::size_t i = 0; i < total; ++i) spec[i] *= scale;
}

}  // namespace fracns
