#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <vector>

#include "boseq/kernels.hpp"

using namespace boseq;
using namespace boseq::kernels;

namespace {

std::vector<cplx> random_vec(std::size_t n, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    std::vector<cplx> v(n);
    for (auto& x : v) x = cplx(dist(rng), dist(rng));
    return v;
}

}  // namespace

TEST_CASE("scalar and vector variants agree") {
    if (!detail::avx2_supported()) return;
    for (std::size_t n : {0ul, 1ul, 2ul, 3ul, 7ul, 64ul, 1001ul}) {
        auto x = random_vec(n, 11 + unsigned(n));
        auto y = random_vec(n, 37 + unsigned(n));

        auto y1 = y;
        detail::cmul_inplace_scalar(y1.data(), x.data(), n);
        auto y2 = y;
        detail::cmul_inplace_avx2(y2.data(), x.data(), n);
        for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(y1[i] - y2[i]) < 1e-14);

        const cplx d1 = detail::cdot_scalar(x.data(), y.data(), n);
        const cplx d2 = detail::cdot_avx2(x.data(), y.data(), n);
        CHECK(std::abs(d1 - d2) <= 1e-12 * (1.0 + std::abs(d1)));

        CHECK(detail::sqnorm_scalar(x.data(), n) ==
              doctest::Approx(detail::sqnorm_avx2(x.data(), n)).epsilon(1e-12));

        const cplx s(0.3, -0.7);
        auto z1 = y;
        detail::scale_inplace_scalar(z1.data(), s, n);
        auto z2 = y;
        detail::scale_inplace_avx2(z2.data(), s, n);
        for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(z1[i] - z2[i]) < 1e-14);
    }
}

TEST_CASE("dispatch override") {
    const Isa initial = active_isa();
    force_isa(Isa::scalar);
    CHECK(active_isa() == Isa::scalar);

    auto x = random_vec(33, 5);
    auto y = random_vec(33, 6);
    const cplx d_scalar = cdot(x.data(), y.data(), x.size());

    force_isa(Isa::avx2);
    if (detail::avx2_supported()) CHECK(active_isa() == Isa::avx2);
    const cplx d_active = cdot(x.data(), y.data(), x.size());
    CHECK(std::abs(d_scalar - d_active) < 1e-12);

    force_isa(initial);
}

TEST_CASE("kernel identities") {
    auto x = random_vec(50, 99);
    const double n2 = sqnorm(x.data(), x.size());
    const cplx self = cdot(x.data(), x.data(), x.size());
    CHECK(self.real() == doctest::Approx(n2).epsilon(1e-13));
    CHECK(std::abs(self.imag()) < 1e-13);

    auto y = x;
    scale_inplace(y.data(), cplx(2.0, 0.0), y.size());
    CHECK(sqnorm(y.data(), y.size()) == doctest::Approx(4.0 * n2).epsilon(1e-13));
}
