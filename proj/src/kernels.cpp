#include "lrqr/kernels.hpp"

#include <cstdlib>
#include <cstring>

#if defined(__x86_64__) || defined(_M_X64)
#define LRQR_X86_64 1
#include <immintrin.h>
#elif defined(__aarch64__)
#define LRQR_AARCH64 1
#include <arm_neon.h>
#endif

namespace lrqr::kernels {

namespace {

// ---------------------------------------------------------------- scalar ---

double dot_scalar(const double* a, const double* b, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
    return acc;
}

double sum_scalar(const double* a, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += a[i];
    return acc;
}

double sumsq_scalar(const double* a, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += a[i] * a[i];
    return acc;
}

void axpy_scalar(double a, const double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

double pinball_sum_scalar(const double* c, const double* s, std::size_t n, double alpha) {
    const double hi = 1.0 - alpha;
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = s[i] - c[i];
        acc += d >= 0.0 ? hi * d : alpha * (-d);
    }
    return acc;
}

void pinball_weights_scalar(const double* c, const double* s, std::size_t n, double alpha,
                            double* w) {
    const double q = 1.0 - alpha;
    for (std::size_t i = 0; i < n; ++i) w[i] = (s[i] <= c[i] ? 1.0 : 0.0) - q;
}

} // namespace

namespace detail {

const Backend& scalar_backend() {
    static const Backend b{dot_scalar,         sum_scalar,   sumsq_scalar, axpy_scalar,
                           pinball_sum_scalar, pinball_weights_scalar, "scalar"};
    return b;
}

} // namespace detail

// ------------------------------------------------------------------ avx2 ---

#if LRQR_X86_64

namespace {

__attribute__((target("avx2,fma"))) inline double hsum4(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

__attribute__((target("avx2,fma"))) double dot_avx2(const double* a, const double* b,
                                                    std::size_t n) {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
        acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), acc1);
    }
    if (i + 4 <= n) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
        i += 4;
    }
    double acc = hsum4(_mm256_add_pd(acc0, acc1));
    for (; i < n; ++i) acc += a[i] * b[i];
    return acc;
}

__attribute__((target("avx2,fma"))) double sum_avx2(const double* a, std::size_t n) {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        acc0 = _mm256_add_pd(acc0, _mm256_loadu_pd(a + i));
        acc1 = _mm256_add_pd(acc1, _mm256_loadu_pd(a + i + 4));
    }
    if (i + 4 <= n) {
        acc0 = _mm256_add_pd(acc0, _mm256_loadu_pd(a + i));
        i += 4;
    }
    double acc = hsum4(_mm256_add_pd(acc0, acc1));
    for (; i < n; ++i) acc += a[i];
    return acc;
}

__attribute__((target("avx2,fma"))) double sumsq_avx2(const double* a, std::size_t n) {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        __m256d v0 = _mm256_loadu_pd(a + i);
        __m256d v1 = _mm256_loadu_pd(a + i + 4);
        acc0 = _mm256_fmadd_pd(v0, v0, acc0);
        acc1 = _mm256_fmadd_pd(v1, v1, acc1);
    }
    if (i + 4 <= n) {
        __m256d v = _mm256_loadu_pd(a + i);
        acc0 = _mm256_fmadd_pd(v, v, acc0);
        i += 4;
    }
    double acc = hsum4(_mm256_add_pd(acc0, acc1));
    for (; i < n; ++i) acc += a[i] * a[i];
    return acc;
}

// mul+add instead of fma so results match the scalar path bit for bit
__attribute__((target("avx2"))) void axpy_avx2(double a, const double* x, double* y,
                                               std::size_t n) {
    const __m256d va = _mm256_set1_pd(a);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d prod = _mm256_mul_pd(va, _mm256_loadu_pd(x + i));
        _mm256_storeu_pd(y + i, _mm256_add_pd(_mm256_loadu_pd(y + i), prod));
    }
    for (; i < n; ++i) y[i] += a * x[i];
}

__attribute__((target("avx2,fma"))) double pinball_sum_avx2(const double* c, const double* s,
                                                            std::size_t n, double alpha) {
    const __m256d vhi = _mm256_set1_pd(1.0 - alpha);
    const __m256d vlo = _mm256_set1_pd(alpha);
    const __m256d zero = _mm256_setzero_pd();
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d d = _mm256_sub_pd(_mm256_loadu_pd(s + i), _mm256_loadu_pd(c + i));
        __m256d pos = _mm256_max_pd(d, zero);
        __m256d neg = _mm256_max_pd(_mm256_sub_pd(zero, d), zero);
        acc = _mm256_fmadd_pd(vhi, pos, acc);
        acc = _mm256_fmadd_pd(vlo, neg, acc);
    }
    double out = hsum4(acc);
    const double hi = 1.0 - alpha;
    for (; i < n; ++i) {
        const double d = s[i] - c[i];
        out += d >= 0.0 ? hi * d : alpha * (-d);
    }
    return out;
}

__attribute__((target("avx2"))) void pinball_weights_avx2(const double* c, const double* s,
                                                          std::size_t n, double alpha,
                                                          double* w) {
    const __m256d one = _mm256_set1_pd(1.0);
    const __m256d q = _mm256_set1_pd(1.0 - alpha);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d mask = _mm256_cmp_pd(_mm256_loadu_pd(s + i), _mm256_loadu_pd(c + i), _CMP_LE_OQ);
        __m256d ind = _mm256_and_pd(mask, one);
        _mm256_storeu_pd(w + i, _mm256_sub_pd(ind, q));
    }
    const double qq = 1.0 - alpha;
    for (; i < n; ++i) w[i] = (s[i] <= c[i] ? 1.0 : 0.0) - qq;
}

const detail::Backend avx2_backend_table{dot_avx2,         sum_avx2,
                                         sumsq_avx2,       axpy_avx2,
                                         pinball_sum_avx2, pinball_weights_avx2,
                                         "avx2"};

} // namespace

#endif // LRQR_X86_64

// ------------------------------------------------------------------ neon ---

#if LRQR_AARCH64

namespace {

double dot_neon(const double* a, const double* b, std::size_t n) {
    float64x2_t acc0 = vdupq_n_f64(0.0);
    float64x2_t acc1 = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        acc0 = vfmaq_f64(acc0, vld1q_f64(a + i), vld1q_f64(b + i));
        acc1 = vfmaq_f64(acc1, vld1q_f64(a + i + 2), vld1q_f64(b + i + 2));
    }
    double acc = vaddvq_f64(acc0) + vaddvq_f64(acc1);
    for (; i < n; ++i) acc += a[i] * b[i];
    return acc;
}

double sum_neon(const double* a, std::size_t n) {
    float64x2_t acc = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) acc = vaddq_f64(acc, vld1q_f64(a + i));
    double out = vaddvq_f64(acc);
    for (; i < n; ++i) out += a[i];
    return out;
}

double sumsq_neon(const double* a, std::size_t n) {
    float64x2_t acc = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        float64x2_t v = vld1q_f64(a + i);
        acc = vfmaq_f64(acc, v, v);
    }
    double out = vaddvq_f64(acc);
    for (; i < n; ++i) out += a[i] * a[i];
    return out;
}

void axpy_neon(double a, const double* x, double* y, std::size_t n) {
    const float64x2_t va = vdupq_n_f64(a);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        float64x2_t prod = vmulq_f64(va, vld1q_f64(x + i));
        vst1q_f64(y + i, vaddq_f64(vld1q_f64(y + i), prod));
    }
    for (; i < n; ++i) y[i] += a * x[i];
}

double pinball_sum_neon(const double* c, const double* s, std::size_t n, double alpha) {
    const float64x2_t vhi = vdupq_n_f64(1.0 - alpha);
    const float64x2_t vlo = vdupq_n_f64(alpha);
    const float64x2_t zero = vdupq_n_f64(0.0);
    float64x2_t acc = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        float64x2_t d = vsubq_f64(vld1q_f64(s + i), vld1q_f64(c + i));
        float64x2_t pos = vmaxq_f64(d, zero);
        float64x2_t neg = vmaxq_f64(vnegq_f64(d), zero);
        acc = vfmaq_f64(acc, vhi, pos);
        acc = vfmaq_f64(acc, vlo, neg);
    }
    double out = vaddvq_f64(acc);
    const double hi = 1.0 - alpha;
    for (; i < n; ++i) {
        const double d = s[i] - c[i];
        out += d >= 0.0 ? hi * d : alpha * (-d);
    }
    return out;
}

void pinball_weights_neon(const double* c, const double* s, std::size_t n, double alpha,
                          double* w) {
    const float64x2_t one = vdupq_n_f64(1.0);
    const float64x2_t q = vdupq_n_f64(1.0 - alpha);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        uint64x2_t mask = vcleq_f64(vld1q_f64(s + i), vld1q_f64(c + i));
        float64x2_t ind = vreinterpretq_f64_u64(vandq_u64(mask, vreinterpretq_u64_f64(one)));
        vst1q_f64(w + i, vsubq_f64(ind, q));
    }
    const double qq = 1.0 - alpha;
    for (; i < n; ++i) w[i] = (s[i] <= c[i] ? 1.0 : 0.0) - qq;
}

const detail::Backend neon_backend_table{dot_neon,         sum_neon,
                                         sumsq_neon,       axpy_neon,
                                         pinball_sum_neon, pinball_weights_neon,
                                         "neon"};

} // namespace

#endif // LRQR_AARCH64

// -------------------------------------------------------------- dispatch ---

namespace detail {

const Backend* simd_backend() {
#if LRQR_X86_64
    if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma"))
        return &avx2_backend_table;
    return nullptr;
#elif LRQR_AARCH64
    return &neon_backend_table;
#else
    return nullptr;
#endif
}

} // namespace detail

namespace {

const detail::Backend& active() {
    static const detail::Backend& b = []() -> const detail::Backend& {
        const char* force = std::getenv("LRQR_KERNELS");
        if (force != nullptr && std::strcmp(force, "scalar") == 0)
            return detail::scalar_backend();
        const detail::Backend* simd = detail::simd_backend();
        if (simd != nullptr) {
            if (force == nullptr || simd->name == force) return *simd;
        }
        return detail::scalar_backend();
    }();
    return b;
}

} // namespace

double dot(const double* a, const double* b, std::size_t n) { return active().dot(a, b, n); }
double sum(const double* a, std::size_t n) { return active().sum(a, n); }
double sumsq(const double* a, std::size_t n) { return active().sumsq(a, n); }
void axpy(double a, const double* x, double* y, std::size_t n) { active().axpy(a, x, y, n); }

double pinball_sum(const double* c, const double* s, std::size_t n, double alpha) {
    return active().pinball_sum(c, s, n, alpha);
}

void pinball_weights(const double* c, const double* s, std::size_t n, double alpha, double* w) {
    active().pinball_weights(c, s, n, alpha, w);
}

void matvec(const double* m, std::size_t rows, std::size_t cols, const double* v, double* out) {
    const auto& b = active();
    for (std::size_t r = 0; r < rows; ++r) out[r] = b.dot(m + r * cols, v, cols);
}

void weighted_colsum(const double* m, std::size_t rows, std::size_t cols, const double* w,
                     double* out) {
    const auto& b = active();
    for (std::size_t r = 0; r < rows; ++r) b.axpy(w[r], m + r * cols, out, cols);
}

std::string_view backend_name() { return active().name; }

} // namespace lrqr::kernels
