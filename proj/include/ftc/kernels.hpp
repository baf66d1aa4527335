#pragma once

#include <cstddef>
#include <string_view>

namespace ftc::kernels {

// Dense inner-loop primitives with a scalar reference implementation and
// SIMD variants selected at runtime. The scalar path is the semantic
// reference; SIMD paths must agree within a few ulp (see tests).
enum class Backend { Scalar, Avx2, Neon };

// Backend chosen for this process. Defaults to the best supported tier;
// the FTC_KERNEL_BACKEND environment variable (scalar|avx2|neon|auto)
// overrides detection.
Backend active();
bool supported(Backend b);
void force(Backend b);  // test hook; throws if b is unsupported here
std::string_view name(Backend b);

// acc = sum_i a[i] * b[i]
double dot(const double* a, const double* b, std::size_t len);
// y[i] += alpha * x[i]
void axpy(double alpha, const double* x, double* y, std::size_t len);

namespace detail {
double dot_scalar(const double* a, const double* b, std::size_t len);
void axpy_scalar(double alpha, const double* x, double* y, std::size_t len);
#if defined(__x86_64__) || defined(_M_X64)
double dot_avx2(const double* a, const double* b, std::size_t len);
void axpy_avx2(double alpha, const double* x, double* y, std::size_t len);
#endif
#if defined(__aarch64__)
double dot_neon(const double* a, const double* b, std::size_t len);
void axpy_neon(double alpha, const double* x, double* y, std::size_t len);
#endif
}  // namespace detail

}  // namespace ftc::kernels
