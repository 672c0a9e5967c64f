#include <cstdlib>
#include <stdexcept>
#include <string>

#include "kernels_impl.hpp"

namespace cfsampler::simd {
namespace {

Isa detect() {
  if (const char* env = std::getenv("CFSAMPLER_SIMD")) {
    if (std::string(env) == "scalar") return Isa::Scalar;
  }
  return isa_supported(Isa::Avx2) ? Isa::Avx2 : Isa::Scalar;
}

void check_sizes(std::size_t a, std::size_t b, const char* what) {
  if (a != b) throw std::invalid_argument(std::string(what) + ": span size mismatch");
}

}  // namespace

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::Scalar: return "scalar";
    case Isa::Avx2: return "avx2";
  }
  return "unknown";
}

bool isa_supported(Isa isa) {
  switch (isa) {
    case Isa::Scalar:
      return true;
    case Isa::Avx2:
#if defined(CFSAMPLER_HAVE_AVX2)
      return __builtin_cpu_supports("avx2");
#else
      return false;
#endif
  }
  return false;
}

Isa active_isa() {
  static const Isa isa = detect();
  return isa;
}

std::vector<Isa> supported_isas() {
  std::vector<Isa> out{Isa::Scalar};
  if (isa_supported(Isa::Avx2)) out.push_back(Isa::Avx2);
  return out;
}

const std::array<double, 21>& gauss_kronrod_nodes() { return detail::kNodes; }

#if defined(CFSAMPLER_HAVE_AVX2)
#define CFSAMPLER_DISPATCH(isa, fn, ...)                                  \
  ((isa) == Isa::Avx2 ? detail::avx2::fn(__VA_ARGS__) : detail::scalar::fn(__VA_ARGS__))
#else
#define CFSAMPLER_DISPATCH(isa, fn, ...) detail::scalar::fn(__VA_ARGS__)
#endif

void propose(Isa isa, const ProposalShape& shape, std::span<const double> u1,
             std::span<const double> u2, std::span<double> out) {
  check_sizes(u1.size(), u2.size(), "propose");
  check_sizes(u1.size(), out.size(), "propose");
  CFSAMPLER_DISPATCH(isa, propose, shape, u1.data(), u2.data(), out.data(), out.size());
}

void hat(Isa isa, const HatShape& shape, std::span<const double> x,
         std::span<double> out) {
  check_sizes(x.size(), out.size(), "hat");
  CFSAMPLER_DISPATCH(isa, hat, shape, x.data(), out.data(), out.size());
}

void rounded_mixture_pf(Isa isa, const ProposalShape& shape,
                        std::span<const double> x, std::span<double> out) {
  check_sizes(x.size(), out.size(), "rounded_mixture_pf");
  CFSAMPLER_DISPATCH(isa, rounded_mixture_pf, shape, x.data(), out.data(), out.size());
}

KronrodSums gauss_kronrod21(Isa isa, std::span<const double, 21> f) {
  return CFSAMPLER_DISPATCH(isa, gauss_kronrod21, f.data());
}

double chi_square_terms(Isa isa, std::span<const double> observed,
                        std::span<const double> expected) {
  check_sizes(observed.size(), expected.size(), "chi_square_terms");
  return CFSAMPLER_DISPATCH(isa, chi_square_terms, observed.data(), expected.data(),
                            observed.size());
}

#undef CFSAMPLER_DISPATCH

void propose(const ProposalShape& shape, std::span<const double> u1,
             std::span<const double> u2, std::span<double> out) {
  propose(active_isa(), shape, u1, u2, out);
}

void hat(const HatShape& shape, std::span<const double> x, std::span<double> out) {
  hat(active_isa(), shape, x, out);
}

KronrodSums gauss_kronrod21(std::span<const double, 21> f) {
  return gauss_kronrod21(active_isa(), f);
}

double chi_square_terms(std::span<const double> observed,
                        std::span<const double> expected) {
  return chi_square_terms(active_isa(), observed, expected);
}

}  // namespace cfsampler::simd
