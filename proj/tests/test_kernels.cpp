#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "ftc/kernels.hpp"
#include "ftc/rng.hpp"

using namespace ftc;
namespace k = ftc::kernels;

namespace {

std::vector<double> random_vec(std::size_t len, StreamRng& rng, double scale = 1.0) {
  std::vector<double> v(len);
  for (double& e : v) e = scale * rng.next_gaussian();
  return v;
}

const std::size_t kLens[] = {0, 1, 2, 3, 4, 5, 7, 8, 15, 16, 17, 63, 64, 257, 1000};

}  // namespace

TEST_CASE("scalar dot and axpy basics") {
  const double a[] = {1.0, 2.0, 3.0};
  const double b[] = {4.0, -5.0, 6.0};
  CHECK(k::detail::dot_scalar(a, b, 3) == doctest::Approx(4.0 - 10.0 + 18.0));
  double y[] = {1.0, 1.0, 1.0};
  k::detail::axpy_scalar(2.0, a, y, 3);
  CHECK(y[0] == 3.0);
  CHECK(y[1] == 5.0);
  CHECK(y[2] == 7.0);
  CHECK(k::detail::dot_scalar(a, b, 0) == 0.0);
}

TEST_CASE("active backend is supported") {
  CHECK(k::supported(k::Backend::Scalar));
  CHECK(k::supported(k::active()));
}

TEST_CASE("SIMD variants agree with the scalar reference") {
  for (k::Backend b : {k::Backend::Avx2, k::Backend::Neon}) {
    if (!k::supported(b)) continue;
    CAPTURE(k::name(b));
    k::force(b);
    StreamRng rng(0xD07);
    for (std::size_t len : kLens) {
      const auto x = random_vec(len, rng, 3.0);
      const auto yv = random_vec(len, rng, 2.0);

      const double got = k::dot(x.data(), yv.data(), len);
      const double want = k::detail::dot_scalar(x.data(), yv.data(), len);
      double mag = 0.0;
      for (std::size_t i = 0; i < len; ++i) mag += std::abs(x[i] * yv[i]);
      CHECK(std::abs(got - want) <= 1e-13 * std::max(mag, 1.0));

      auto y_simd = yv;
      auto y_ref = yv;
      k::axpy(1.7, x.data(), y_simd.data(), len);
      k::detail::axpy_scalar(1.7, x.data(), y_ref.data(), len);
      for (std::size_t i = 0; i < len; ++i) {
        const double scale = std::abs(y_ref[i]) + std::abs(1.7 * x[i]) + 1.0;
        CHECK(std::abs(y_simd[i] - y_ref[i]) <= 4e-16 * scale);
      }
    }
    k::force(k::Backend::Scalar);
    CHECK(k::active() == k::Backend::Scalar);
  }
  // restore auto selection for other binaries sharing the process (none) and
  // leave the best backend active
  for (k::Backend b : {k::Backend::Avx2, k::Backend::Neon})
    if (k::supported(b)) k::force(b);
}

TEST_CASE("dot against a compensated high-precision reference") {
  StreamRng rng(0xD08);
  for (std::size_t len : {16u, 255u, 1024u}) {
    const auto x = random_vec(len, rng);
    const auto y = random_vec(len, rng);
    long double acc = 0.0L;
    for (std::size_t i = 0; i < len; ++i)
      acc += static_cast<long double>(x[i]) * static_cast<long double>(y[i]);
    const double got = k::dot(x.data(), y.data(), len);
    CHECK(std::abs(got - static_cast<double>(acc)) <= 1e-12 * (std::abs(static_cast<double>(acc)) + 1.0));
  }
}
