#pragma once

#include <random>
#include <vector>

#include "gsepp/diagonal.hpp"
#include "gsepp/graph.hpp"
#include "gsepp/noise.hpp"

namespace testsupport {

inline std::vector<double> random_distribution(std::size_t d, std::mt19937_64& rng) {
  std::exponential_distribution<double> e(1.0);
  std::vector<double> v(d);
  double s = 0.0;
  for (auto& x : v) s += (x = e(rng));
  for (auto& x : v) x /= s;
  return v;
}

inline gsepp::DiagonalState random_state(const gsepp::Graph& g, std::mt19937_64& rng) {
  return {g, random_distribution(std::size_t{1} << g.size(), rng)};
}

/// Random state with lambda_0 = f and the rest random.
inline gsepp::DiagonalState random_state_with_fidelity(const gsepp::Graph& g, double f, std::mt19937_64& rng) {
  auto v = random_distribution((std::size_t{1} << g.size()) - 1, rng);
  std::vector<double> c(std::size_t{1} << g.size());
  c[0] = f;
  for (std::size_t i = 1; i < c.size(); ++i) c[i] = (1.0 - f) * v[i - 1];
  return {g, std::move(c)};
}

inline gsepp::PauliChannel random_channel(std::mt19937_64& rng) {
  auto v = random_distribution(4, rng);
  return gsepp::PauliChannel::from_weights({v[0], v[1], v[2], v[3]});
}

inline gsepp::Graph random_graph(int n, double p_edge, std::mt19937_64& rng) {
  std::bernoulli_distribution b(p_edge);
  gsepp::Graph g(n);
  for (int a = 0; a < n; ++a)
    for (int c = a + 1; c < n; ++c)
      if (b(rng)) g.add_edge(a, c);
  return g;
}

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return a.size() == b.size() ? m : 1e300;
}

}  // namespace testsupport
