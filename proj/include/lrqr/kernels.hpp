#pragma once

#include <cstddef>
#include <string_view>

namespace lrqr::kernels {

// Arithmetic primitives behind the solver's inner loops. Every kernel has a
// portable scalar implementation; on x86-64 with AVX2+FMA and on aarch64 with
// NEON a vectorized variant is selected at runtime. Set LRQR_KERNELS=scalar
// in the environment to force the portable path.
//
// Reductions may reassociate, so vectorized results can differ from scalar
// ones by a few ulps; the equivalence tests bound this against the sum of
// absolute contributions. Elementwise kernels (axpy, pinball_weights) are
// exact matches.

double dot(const double* a, const double* b, std::size_t n);
double sum(const double* a, std::size_t n);
double sumsq(const double* a, std::size_t n);

// y := y + a*x
void axpy(double a, const double* x, double* y, std::size_t n);

// sum_i of (1-alpha)*max(s_i - c_i, 0) + alpha*max(c_i - s_i, 0)
double pinball_sum(const double* c, const double* s, std::size_t n, double alpha);

// w_i := 1[s_i <= c_i] - (1 - alpha)
void pinball_weights(const double* c, const double* s, std::size_t n, double alpha, double* w);

// out[r] := <m[r,:], v> for row-major m (rows x cols)
void matvec(const double* m, std::size_t rows, std::size_t cols, const double* v, double* out);

// out := out + m^T w for row-major m (rows x cols), w of length rows
void weighted_colsum(const double* m, std::size_t rows, std::size_t cols,
                     const double* w, double* out);

// Name of the backend serving the calls above ("scalar", "avx2", "neon").
std::string_view backend_name();

namespace detail {

struct Backend {
    double (*dot)(const double*, const double*, std::size_t);
    double (*sum)(const double*, std::size_t);
    double (*sumsq)(const double*, std::size_t);
    void (*axpy)(double, const double*, double*, std::size_t);
    double (*pinball_sum)(const double*, const double*, std::size_t, double);
    void (*pinball_weights)(const double*, const double*, std::size_t, double, double*);
    std::string_view name;
};

const Backend& scalar_backend();
// The vectorized backend compiled for this target, or nullptr when the CPU
// does not support it.
const Backend* simd_backend();

} // namespace detail

} // namespace lrqr::kernels
