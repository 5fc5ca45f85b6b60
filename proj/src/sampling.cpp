#include "vague/sampling.hpp"

#include <algorithm>
#include <cmath>

#include "vague/errors.hpp"

namespace vague {

OrderedSample::OrderedSample(std::vector<double> values, Provenance provenance)
    : values_(std::move(values)), provenance_(std::move(provenance)) {
  std::stable_sort(values_.begin(), values_.end());
}

namespace {

Provenance provenance_of(const Distribution& law, const RngStream& rng) {
  std::string spec = std::holds_alternative<Law>(law) ? std::get<Law>(law).spec() : "step";
  return {std::move(spec), rng.master_seed(), rng.stream_index()};
}

void check_open_unit_sorted(std::span<const double> u, const char* what) {
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (!(u[i] > 0.0 && u[i] < 1.0)) {
      throw DomainError(std::string(what) + ": order statistics must lie in (0,1)");
    }
    if (i > 0 && u[i] < u[i - 1]) {
      throw DomainError(std::string(what) + ": order statistics must be sorted");
    }
  }
}

}  // namespace

std::vector<double> inverse_transform_draws(const Distribution& law, RngStream& rng,
                                            std::size_t n) {
  std::vector<double> out(n);
  // Discrete catalog laws invert through their tabulated StepCdf.
  if (const Law* l = std::get_if<Law>(&law); l && l->is_discrete()) {
    const StepCdf& F = l->lattice_cdf();
    for (auto& x : out) x = generalized_inverse(F, rng.uniform());
    return out;
  }
  for (auto& x : out) x = quantile(law, rng.uniform());
  return out;
}

OrderedSample inverse_transform_sample(const Distribution& law, RngStream& rng, std::size_t n) {
  if (n == 0) throw DomainError("inverse_transform_sample: n must be >= 1");
  auto prov = provenance_of(law, rng);
  return OrderedSample(inverse_transform_draws(law, rng, n), std::move(prov));
}

RenyiDraw renyi_draw(RngStream& rng, std::size_t n) {
  if (n == 0) throw DomainError("renyi: n must be >= 1");
  std::vector<double> partial(n);
  double s = 0.0;
  for (auto& p : partial) {
    s += rng.exponential();
    p = s;
  }
  const double total = s + rng.exponential();
  for (auto& p : partial) p /= total;
  return {std::move(partial), total};
}

OrderedSample uniform_order_stats_renyi(RngStream& rng, std::size_t n) {
  const std::uint64_t seed = rng.master_seed();
  const std::uint64_t stream = rng.stream_index();
  return OrderedSample(renyi_draw(rng, n).ratios, {"renyi", seed, stream});
}

std::vector<double> exponential_spacings(std::span<const double> u_order) {
  check_open_unit_sorted(u_order, "exponential_spacings");
  const std::size_t n = u_order.size();
  std::vector<double> out(n);
  double prev = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double a = -std::log1p(-u_order[i]);
    out[i] = static_cast<double>(n - i) * (a - prev);
    prev = a;
  }
  return out;
}

std::vector<double> malmquist_ratios(std::span<const double> u_order) {
  check_open_unit_sorted(u_order, "malmquist_ratios");
  const std::size_t n = u_order.size();
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double next = i + 1 < n ? u_order[i + 1] : 1.0;
    out[i] = static_cast<double>(i + 1) * std::log(next / u_order[i]);
  }
  return out;
}

CouplingTable skorohod_coupling(std::span<const Distribution> sequence,
                                const Distribution& limit, std::span<const double> u_grid) {
  CouplingTable table;
  table.u.assign(u_grid.begin(), u_grid.end());
  for (double u : u_grid) {
    if (!(u > 0.0 && u < 1.0)) throw DomainError("skorohod_coupling: u grid must lie in (0,1)");
    const double lim = quantile(limit, u);
    std::vector<double> row;
    std::vector<double> gap;
    row.reserve(sequence.size());
    for (const auto& F : sequence) {
      row.push_back(quantile(F, u));
      gap.push_back(std::abs(row.back() - lim));
    }
    table.values.push_back(std::move(row));
    table.gaps.push_back(std::move(gap));
    table.limit.push_back(lim);
  }
  return table;
}

}  // namespace vague
