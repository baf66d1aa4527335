#include "ftc/kernels.hpp"

#include <cstdlib>
#include <stdexcept>
#include <string>

namespace ftc::kernels {

namespace detail {

double dot_scalar(const double* a, const double* b, std::size_t len) {
  double acc = 0.0;
  for (std::size_t i = 0; i < len; ++i) acc += a[i] * b[i];
  return acc;
}

void axpy_scalar(double alpha, const double* x, double* y, std::size_t len) {
  for (std::size_t i = 0; i < len; ++i) y[i] += alpha * x[i];
}

}  // namespace detail

namespace {

using DotFn = double (*)(const double*, const double*, std::size_t);
using AxpyFn = void (*)(double, const double*, double*, std::size_t);

struct Table {
  Backend backend;
  DotFn dot;
  AxpyFn axpy;
};

Table make_table(Backend b) {
  switch (b) {
#if defined(__x86_64__) || defined(_M_X64)
    case Backend::Avx2:
      return {Backend::Avx2, detail::dot_avx2, detail::axpy_avx2};
#endif
#if defined(__aarch64__)
    case Backend::Neon:
      return {Backend::Neon, detail::dot_neon, detail::axpy_neon};
#endif
    default:
      return {Backend::Scalar, detail::dot_scalar, detail::axpy_scalar};
  }
}

Backend best_supported() {
#if defined(__x86_64__) || defined(_M_X64)
  if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma"))
    return Backend::Avx2;
#elif defined(__aarch64__)
  return Backend::Neon;
#endif
  return Backend::Scalar;
}

Backend detect() {
  if (const char* env = std::getenv("FTC_KERNEL_BACKEND")) {
    std::string v(env);
    if (v == "scalar") return Backend::Scalar;
    if (v == "avx2" && supported(Backend::Avx2)) return Backend::Avx2;
    if (v == "neon" && supported(Backend::Neon)) return Backend::Neon;
    // unknown or unsupported value falls through to auto detection
  }
  return best_supported();
}

Table& table() {
  static Table t = make_table(detect());
  return t;
}

}  // namespace

bool supported(Backend b) {
  switch (b) {
    case Backend::Scalar:
      return true;
    case Backend::Avx2:
#if defined(__x86_64__) || defined(_M_X64)
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
    case Backend::Neon:
#if defined(__aarch64__)
      return true;
#else
      return false;
#endif
  }
  return false;
}

Backend active() { return table().backend; }

void force(Backend b) {
  if (!supported(b)) throw std::runtime_error("kernel backend not supported on this host");
  table() = make_table(b);
}

std::string_view name(Backend b) {
  switch (b) {
    case Backend::Scalar: return "scalar";
    case Backend::Avx2: return "avx2";
    case Backend::Neon: return "neon";
  }
  return "?";
}

double dot(const double* a, const double* b, std::size_t len) {
  return table().dot(a, b, len);
}

void axpy(double alpha, const double* x, double* y, std::size_t len) {
  table().axpy(alpha, x, y, len);
}

}  // namespace ftc::kernels
