#include <atomic>

#include "boseq/kernels.hpp"

namespace boseq::kernels {

namespace {
std::atomic<Isa> g_isa{detail::avx2_supported() ? Isa::avx2 : Isa::scalar};
}

Isa active_isa() { return g_isa.load(std::memory_order_relaxed); }

void force_isa(Isa isa) {
    if (isa == Isa::avx2 && !detail::avx2_supported()) return;
    g_isa.store(isa, std::memory_order_relaxed);
}

void cmul_inplace(cplx* y, const cplx* x, std::size_t n) {
    if (active_isa() == Isa::avx2)
        detail::cmul_inplace_avx2(y, x, n);
    else
        detail::cmul_inplace_scalar(y, x, n);
}

cplx cdot(const cplx* x, const cplx* y, std::size_t n) {
    return active_isa() == Isa::avx2 ? detail::cdot_avx2(x, y, n) : detail::cdot_scalar(x, y, n);
}

double sqnorm(const cplx* x, std::size_t n) {
    return active_isa() == Isa::avx2 ? detail::sqnorm_avx2(x, n) : detail::sqnorm_scalar(x, n);
}

void scale_inplace(cplx* y, cplx s, std::size_t n) {
    if (active_isa() == Isa::avx2)
        detail::scale_inplace_avx2(y, s, n);
    else
        detail::scale_inplace_scalar(y, s, n);
}

}  // namespace boseq::kernels
