#include "boseq/kernels.hpp"

namespace boseq::kernels::detail {

void cmul_inplace_scalar(cplx* y, const cplx* x, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] *= x[i];
}

cplx cdot_scalar(const cplx* x, const cplx* y, std::size_t n) {
    double re = 0.0, im = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double xr = x[i].real(), xi = x[i].imag();
        const double yr = y[i].real(), yi = y[i].imag();
        re += xr * yr + xi * yi;
        im += xr * yi - xi * yr;
    }
    return {re, im};
}

double sqnorm_scalar(const cplx* x, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += x[i].real() * x[i].real() + x[i].imag() * x[i].imag();
    return s;
}

void scale_inplace_scalar(cplx* y, cplx s, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] *= s;
}

}  // namespace boseq::kernels::detail
