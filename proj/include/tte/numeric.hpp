#pragma once

#include <cstdint>
#include <functional>
#include <string>

namespace tte {

// Standard normal CDF.
double normal_cdf(double x);

// Standard normal quantile, accurate to ~1e-15 (rational approximation with
// one Halley refinement).
double normal_quantile(double p);

// Upper tail of the chi-square distribution with 1 degree of freedom.
double chisq1_sf(double x);

// Adaptive Simpson quadrature of f on [a,b] to absolute tolerance tol.
double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double tol);

// FNV-1a 64-bit hash of a byte string, hex-encoded; used for input digests.
std::string fnv1a_hex(const std::string& bytes);

// Run fn(i) for i in [0,n) over `threads` worker threads (each index is an
// independent task). threads <= 1 runs inline. Results must be written into
// per-index slots so the outcome is independent of scheduling.
void parallel_for(std::size_t n, unsigned threads,
                  const std::function<void(std::size_t)>& fn);

}  // namespace tte
