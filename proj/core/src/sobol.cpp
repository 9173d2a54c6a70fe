#include <array>
#include <cstdint>
#include <vector>

#include "replan/errors.hpp"
#include "replan/gsa.hpp"

namespace replan {

namespace {

constexpr int kMaxDim = 24;
constexpr int kBits = 32;

// Joe-Kuo primitive polynomials and initial direction numbers, dimensions
// 2..24 (dimension 1 is the van der Corput sequence in base 2).
struct DimData {
  int degree;
  unsigned poly;  // interior coefficient code
  std::array<unsigned, 7> m;
};

const DimData kDims[kMaxDim - 1] = {
    {1, 0, {1}},
    {2, 1, {1, 3}},
    {3, 1, {1, 3, 1}},
    {3, 2, {1, 1, 1}},
    {4, 1, {1, 1, 3, 3}},
    {4, 4, {1, 3, 5, 13}},
    {5, 2, {1, 1, 5, 5, 17}},
    {5, 4, {1, 1, 5, 5, 5}},
    {5, 7, {1, 1, 7, 11, 19}},
    {5, 11, {1, 1, 5, 1, 1}},
    {5, 13, {1, 1, 1, 3, 11}},
    {5, 14, {1, 3, 5, 5, 31}},
    {6, 1, {1, 3, 3, 9, 7, 49}},
    {6, 13, {1, 1, 1, 15, 21, 21}},
    {6, 16, {1, 3, 1, 13, 27, 49}},
    {6, 19, {1, 1, 1, 15, 7, 5}},
    {6, 22, {1, 3, 1, 15, 13, 25}},
    {6, 25, {1, 1, 5, 5, 19, 61}},
    {7, 1, {1, 3, 7, 11, 23, 15, 103}},
    {7, 4, {1, 3, 7, 13, 13, 15, 69}},
    {7, 7, {1, 1, 3, 13, 7, 35, 63}},
    {7, 8, {1, 1, 7, 11, 7, 15, 15}},
    {7, 14, {1, 3, 5, 9, 1, 25, 3}},
};

// Direction numbers v[i] for one dimension, scaled to 32-bit fixed point.
std::array<std::uint32_t, kBits> direction_numbers(int dim) {
  std::array<std::uint32_t, kBits> v{};
  if (dim == 0) {
    for (int i = 0; i < kBits; ++i) v[i] = 1u << (kBits - 1 - i);
    return v;
  }
  const DimData& d = kDims[dim - 1];
  const int s = d.degree;
  std::vector<std::uint64_t> m(kBits);
  for (int i = 0; i < s; ++i) m[i] = d.m[i];
  for (int i = s; i < kBits; ++i) {
    std::uint64_t mi = m[i - s] ^ (m[i - s] << s);
    for (int k = 1; k < s; ++k) {
      if ((d.poly >> (s - 1 - k)) & 1u) mi ^= m[i - k] << k;
    }
    m[i] = mi;
  }
  for (int i = 0; i < kBits; ++i)
    v[i] = static_cast<std::uint32_t>(m[i] << (kBits - 1 - i));
  return v;
}

}  // namespace

int qmc_max_dimension() { return kMaxDim; }

Eigen::MatrixXd qmc_samples(int P, int M) {
  if (P < 1 || M < 1) throw ConfigError("qmc_samples: P and M must be >= 1");
  if (P > kMaxDim)
    throw DimensionTooLarge("qmc_samples: direction numbers implemented up to dimension " +
                            std::to_string(kMaxDim));

  std::vector<std::array<std::uint32_t, kBits>> v(P);
  for (int j = 0; j < P; ++j) v[j] = direction_numbers(j);

  Eigen::MatrixXd out(M, P);
  std::vector<std::uint32_t> x(P, 0);  // Gray-code accumulator; first point is 0
  constexpr double scale = 1.0 / 4294967296.0;  // 2^-32
  for (int k = 0; k < M; ++k) {
    for (int j = 0; j < P; ++j) out(k, j) = 2.0 * (x[j] * scale) - 1.0;
    // lowest zero bit of k selects the direction number to flip
    unsigned c = 0;
    unsigned kk = static_cast<unsigned>(k);
    while (kk & 1u) {
      kk >>= 1;
      ++c;
    }
    for (int j = 0; j < P; ++j) x[j] ^= v[j][c];
  }
  return out;
}

}  // namespace replan
