#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "vague/law.hpp"
#include "vague/rng.hpp"

namespace vague {

/// Where a sample came from.
struct Provenance {
  std::string law;
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
};

/// Nondecreasing vector of observations X_{1,n} <= ... <= X_{n,n}.
class OrderedSample {
 public:
  /// Sorts (stable) the given values.
  explicit OrderedSample(std::vector<double> values, Provenance provenance = {});

  const std::vector<double>& values() const { return values_; }
  std::span<const double> view() const { return values_; }
  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  const Provenance& provenance() const { return provenance_; }

 private:
  std::vector<double> values_;
  Provenance provenance_;
};

/// n draws F^{-1}(U_i) in draw order.
std::vector<double> inverse_transform_draws(const Distribution& law, RngStream& rng,
                                            std::size_t n);

OrderedSample inverse_transform_sample(const Distribution& law, RngStream& rng, std::size_t n);

/// Uniform order statistics and the normalizing sum S_{n+1} they came from.
struct RenyiDraw {
  std::vector<double> ratios;  // S_1/S_{n+1}, ..., S_n/S_{n+1}
  double total;                // S_{n+1}
};

/// Draws n+1 standard exponentials and returns the partial-sum ratios
/// together with S_{n+1}.
RenyiDraw renyi_draw(RngStream& rng, std::size_t n);

/// Uniform order statistics via the ratios S_j / S_{n+1}.
OrderedSample uniform_order_stats_renyi(RngStream& rng, std::size_t n);

/// (n-i+1)(a_i - a_{i-1}) with a_i = -log(1 - U_{i,n}), a_0 = 0.
std::vector<double> exponential_spacings(std::span<const double> u_order);

/// i * log(U_{i+1,n} / U_{i,n}) for i = 1..n with U_{n+1,n} = 1.
std::vector<double> malmquist_ratios(std::span<const double> u_order);

/// Quantile coupling X_n = F_n^{-1}(u) evaluated on a fixed u grid.
struct CouplingTable {
  std::vector<double> u;
  /// values[j][m]: F_m^{-1}(u_j) for the m-th law of the sequence.
  std::vector<std::vector<double>> values;
  std::vector<double> limit;
  /// gaps[j][m] = |values[j][m] - limit[j]|.
  std::vector<std::vector<double>> gaps;
};

CouplingTable skorohod_coupling(std::span<const Distribution> sequence,
                                const Distribution& limit, std::span<const double> u_grid);

}  // namespace vague
