#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "hodgefaas/complex.hpp"
#include "hodgefaas/hodge.hpp"

namespace hodgefaas {

/// Synthetic request workload: each edge draws Poisson(base_rate + increment)
/// invocations per observation window.
struct WorkloadSpec {
  double base_rate = 10.0;
  std::map<std::string, double> edge_increments;
  std::uint64_t seed = 0;
  int windows = 1;
};

/// Extra latency (ms) of functions found cold; absent nodes are warm.
struct ColdStartSpec {
  std::map<std::string, double> cold_latency;
};

/// A scalar metric per node (CPU, memory, execution time, ...).
struct NodeMetric {
  Vector values;
  std::string metric;
};

/// Equal-length sample series per node; row v is node v in declaration order.
struct NodeMetricSeries {
  Matrix samples;
  std::string metric;
};

/// Seed of the generator stream used for one window.
std::uint64_t window_seed(std::uint64_t seed, int window);

/// Poisson(mean) variate from a 64-bit Mersenne Twister. The sampler is
/// implemented here so that streams do not depend on the standard library.
class PoissonSampler {
 public:
  explicit PoissonSampler(std::uint64_t seed);
  std::uint64_t operator()(double mean);

 private:
  double uniform();
  std::uint64_t inversion(double mean);
  std::uint64_t ptrs(double mean);

  std::mt19937_64 engine_;
};

/// One flow per window; values are non-negative integers stored as reals.
std::vector<EdgeFlow> poisson_flow(const CellComplex& c, const WorkloadSpec& w);

/// f(i -> j) = (x_i - x_j) / max(x_i, x_j), with 0/0 taken as 0.
EdgeFlow node_diff_flow(const CellComplex& c, const NodeMetric& x);

/// f(i -> j) = unbiased sample covariance of the tail and head series.
/// Covariance is symmetric, so the value is stored on the canonical
/// orientation without a sign flip.
EdgeFlow covariance_flow(const CellComplex& c, const NodeMetricSeries& s);

/// f(i -> j) = y(i -> j) * x_i.
EdgeFlow weighted_flow(const CellComplex& c, const EdgeFlow& y, const NodeMetric& x);

/// f_lat = f_req (.) f_cs, where f_cs(e) is the cold latency of head(e).
EdgeFlow coldstart_flow(const CellComplex& c, const EdgeFlow& f_req, const ColdStartSpec& cs);

}  // namespace hodgefaas
