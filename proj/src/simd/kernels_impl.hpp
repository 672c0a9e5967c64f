#pragma once

#include <array>

#include "cfsampler/simd/kernels.hpp"

namespace cfsampler::simd::detail {

// Node i of gauss_kronrod_nodes() carries kronrod_weights[i]; gauss_weights
// is zero at the Kronrod-only nodes.
extern const std::array<double, 21> kNodes;
extern const std::array<double, 21> kKronrodWeights;
extern const std::array<double, 21> kGaussWeights;

namespace scalar {
void propose(const ProposalShape&, const double* u1, const double* u2, double* out,
             std::size_t n);
void hat(const HatShape&, const double* x, double* out, std::size_t n);
void rounded_mixture_pf(const ProposalShape&, const double* x, double* out,
                        std::size_t n);
KronrodSums gauss_kronrod21(const double* f);
double chi_square_terms(const double* observed, const double* expected,
                        std::size_t n);
}  // namespace scalar

#if defined(CFSAMPLER_HAVE_AVX2)
namespace avx2 {
void propose(const ProposalShape&, const double* u1, const double* u2, double* out,
             std::size_t n);
void hat(const HatShape&, const double* x, double* out, std::size_t n);
void rounded_mixture_pf(const ProposalShape&, const double* x, double* out,
                        std::size_t n);
KronrodSums gauss_kronrod21(const double* f);
double chi_square_terms(const double* observed, const double* expected,
                        std::size_t n);
}  // namespace avx2
#endif

}  // namespace cfsampler::simd::detail
