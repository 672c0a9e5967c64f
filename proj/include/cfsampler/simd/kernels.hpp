#pragma once

// Data-parallel inner loops with a scalar reference and vector variants
// selected at runtime. Every variant is bit-identical to the scalar
// reference: they use only correctly rounded operations (+ - * / trunc,
// comparisons) in the same order, including the order of reductions.
//
// Set CFSAMPLER_SIMD=scalar in the environment to force the reference path.

#include <array>
#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace cfsampler::simd {

enum class Isa { Scalar, Avx2 };

std::string_view isa_name(Isa isa);
bool isa_supported(Isa isa);
/// Best supported ISA, unless overridden through CFSAMPLER_SIMD.
Isa active_isa();
std::vector<Isa> supported_isas();

/// Proposals whose tail inversion 1/U2 is taken with |U2| below this are
/// discarded.
inline constexpr double kTinyU2 = 1e-13;
/// Proposals farther than this from the anchor are discarded.
inline constexpr double kMaxSpan = 1e12;

struct ProposalShape {
  double m;
  double sigma;
  double alpha;
};

/// out[i] = Round(m + sigma * v) with v = u2 when u1 <= alpha, else 1/u2.
/// Ties round away from zero. Guarded proposals come back as NaN.
void propose(Isa isa, const ProposalShape& shape, std::span<const double> u1,
             std::span<const double> u2, std::span<double> out);

struct HatShape {
  double m;
  double sigma;
  double c;
  double k;
};

/// out[i] = c if |x-m| <= sigma else k / ((x-m)^2 - 1/4).
void hat(Isa isa, const HatShape& shape, std::span<const double> x,
         std::span<double> out);

/// out[i] = alpha/(2 sigma) if |x-m| <= sigma
///          else (1-alpha) sigma / (2 (x-m)^2 - 1/2).
void rounded_mixture_pf(Isa isa, const ProposalShape& shape,
                        std::span<const double> x, std::span<double> out);

struct KronrodSums {
  double kronrod;
  double gauss;
};

/// Gauss-Kronrod (10, 21) nodes on [-1, 1], ascending.
const std::array<double, 21>& gauss_kronrod_nodes();

/// Weighted sums of f at gauss_kronrod_nodes().
KronrodSums gauss_kronrod21(Isa isa, std::span<const double, 21> f);

/// Sum of (observed - expected)^2 / expected.
double chi_square_terms(Isa isa, std::span<const double> observed,
                        std::span<const double> expected);

// Overloads using active_isa().
void propose(const ProposalShape& shape, std::span<const double> u1,
             std::span<const double> u2, std::span<double> out);
void hat(const HatShape& shape, std::span<const double> x, std::span<double> out);
KronrodSums gauss_kronrod21(std::span<const double, 21> f);
double chi_square_terms(std::span<const double> observed,
                        std::span<const double> expected);

}  // namespace cfsampler::simd
