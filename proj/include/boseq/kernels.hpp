#pragma once

#include <complex>
#include <cstddef>

#include "boseq/types.hpp"

// Runtime-dispatched statevector kernels. Scalar reference implementations are
// always available; on x86-64 with AVX2 the dispatcher selects the vectorized
// variants at first use. Both variants are equivalence-tested against each other.
namespace boseq::kernels {

enum class Isa { scalar, avx2 };

/// Instruction set the dispatcher currently routes to.
Isa active_isa();

/// Override dispatch (tests). Requesting avx2 on a CPU without it is ignored.
void force_isa(Isa isa);

/// y[i] *= x[i]
void cmul_inplace(cplx* y, const cplx* x, std::size_t n);

/// sum_i conj(x[i]) * y[i]
cplx cdot(const cplx* x, const cplx* y, std::size_t n);

/// sum_i |x[i]|^2
double sqnorm(const cplx* x, std::size_t n);

/// y[i] *= s
void scale_inplace(cplx* y, cplx s, std::size_t n);

namespace detail {
void cmul_inplace_scalar(cplx* y, const cplx* x, std::size_t n);
cplx cdot_scalar(const cplx* x, const cplx* y, std::size_t n);
double sqnorm_scalar(const cplx* x, std::size_t n);
void scale_inplace_scalar(cplx* y, cplx s, std::size_t n);

void cmul_inplace_avx2(cplx* y, const cplx* x, std::size_t n);
cplx cdot_avx2(const cplx* x, const cplx* y, std::size_t n);
double sqnorm_avx2(const cplx* x, std::size_t n);
void scale_inplace_avx2(cplx* y, cplx s, std::size_t n);

bool avx2_supported();
}  // namespace detail

}  // namespace boseq::kernels
