#include "boseq/kernels.hpp"

#ifdef __AVX2__
#include <immintrin.h>

namespace boseq::kernels::detail {

bool avx2_supported() { return __builtin_cpu_supports("avx2") != 0; }

namespace {
// packed complex<double> multiply: two complexes per __m256d lane pair
inline __m256d cmul_pd(__m256d a, __m256d b) {
    __m256d br = _mm256_movedup_pd(b);       // [br0 br0 br1 br1]
    __m256d bi = _mm256_permute_pd(b, 0xF);  // [bi0 bi0 bi1 bi1]
    __m256d as = _mm256_permute_pd(a, 0x5);  // [ai0 ar0 ai1 ar1]
    return _mm256_addsub_pd(_mm256_mul_pd(a, br), _mm256_mul_pd(as, bi));
}
}  // namespace

void cmul_inplace_avx2(cplx* y, const cplx* x, std::size_t n) {
    std::size_t i = 0;
    auto* yd = reinterpret_cast<double*>(y);
    const auto* xd = reinterpret_cast<const double*>(x);
    for (; i + 2 <= n; i += 2) {
        __m256d a = _mm256_loadu_pd(yd + 2 * i);
        __m256d b = _mm256_loadu_pd(xd + 2 * i);
        _mm256_storeu_pd(yd + 2 * i, cmul_pd(a, b));
    }
    for (; i < n; ++i) y[i] *= x[i];
}

cplx cdot_avx2(const cplx* x, const cplx* y, std::size_t n) {
    const auto* xd = reinterpret_cast<const double*>(x);
    const auto* yd = reinterpret_cast<const double*>(y);
    __m256d accp = _mm256_setzero_pd();  // xr*yr, xi*yi pairs
    __m256d accq = _mm256_setzero_pd();  // xi*yr, xr*yi pairs
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        __m256d a = _mm256_loadu_pd(xd + 2 * i);
        __m256d b = _mm256_loadu_pd(yd + 2 * i);
        __m256d as = _mm256_permute_pd(a, 0x5);
        accp = _mm256_add_pd(accp, _mm256_mul_pd(a, b));
        accq = _mm256_add_pd(accq, _mm256_mul_pd(as, b));
    }
    alignas(32) double p[4], q[4];
    _mm256_store_pd(p, accp);
    _mm256_store_pd(q, accq);
    double re = p[0] + p[1] + p[2] + p[3];
    double im = (q[1] - q[0]) + (q[3] - q[2]);
    for (; i < n; ++i) {
        const double xr = x[i].real(), xi = x[i].imag();
        const double yr = y[i].real(), yi = y[i].imag();
        re += xr * yr + xi * yi;
        im += xr * yi - xi * yr;
    }
    return {re, im};
}

double sqnorm_avx2(const cplx* x, std::size_t n) {
    const auto* xd = reinterpret_cast<const double*>(x);
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        __m256d a = _mm256_loadu_pd(xd + 2 * i);
        acc = _mm256_add_pd(acc, _mm256_mul_pd(a, a));
    }
    alignas(32) double p[4];
    _mm256_store_pd(p, acc);
    double s = p[0] + p[1] + p[2] + p[3];
    for (; i < n; ++i) s += x[i].real() * x[i].real() + x[i].imag() * x[i].imag();
    return s;
}

void scale_inplace_avx2(cplx* y, cplx s, std::size_t n) {
    auto* yd = reinterpret_cast<double*>(y);
    const __m256d sv = _mm256_setr_pd(s.real(), s.imag(), s.real(), s.imag());
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        __m256d a = _mm256_loadu_pd(yd + 2 * i);
        _mm256_storeu_pd(yd + 2 * i, cmul_pd(a, sv));
    }
    for (; i < n; ++i) y[i] *= s;
}

}  // namespace boseq::kernels::detail

#else  // non-AVX2 build: keep the symbols, route to scalar

namespace boseq::kernels::detail {
bool avx2_supported() { return false; }
void cmul_inplace_avx2(cplx* y, const cplx* x, std::size_t n) { cmul_inplace_scalar(y, x, n); }
cplx cdot_avx2(const cplx* x, const cplx* y, std::size_t n) { return cdot_scalar(x, y, n); }
double sqnorm_avx2(const cplx* x, std::size_t n) { return sqnorm_scalar(x, n); }
void scale_inplace_avx2(cplx* y, cplx s, std::size_t n) { scale_inplace_scalar(y, s, n); }
}  // namespace boseq::kernels::detail

#endif
