#include "iwf/rng.hpp"

#include <cmath>
#include <numbers>

namespace iwf {

double Rng::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

std::size_t Rng::below(std::size_t n) {
  auto k = static_cast<std::size_t>(uniform() * static_cast<double>(n));
  return k < n ? k : n - 1;
}

std::complex<double> Rng::complex_gaussian() {
  const double u_mag = uniform();
  const double u_phase = uniform();
  const double radius = std::sqrt(-std::log1p(-u_mag));
  const double phase = 2.0 * std::numbers::pi * u_phase;
  return {radius * std::cos(phase), radius * std::sin(phase)};
}

namespace {
std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}
}  // namespace

std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
  return splitmix64(splitmix64(a) ^ (b + 0x632BE59BD9B4E019ULL + (a << 6) + (a >> 2)));
}

}  // namespace iwf
