#include "hodgefaas/flows.hpp"

#include <algorithm>
#include <cmath>

#include "hodgefaas/error.hpp"

namespace hodgefaas {

std::uint64_t window_seed(std::uint64_t seed, int window) {
  // splitmix64 finalizer over seed + window.
  std::uint64_t z = seed + static_cast<std::uint64_t>(window) + 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

PoissonSampler::PoissonSampler(std::uint64_t seed) : engine_(seed) {}

double PoissonSampler::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

std::uint64_t PoissonSampler::operator()(double mean) {
  if (!(mean >= 0.0) || !std::isfinite(mean))
    throw std::invalid_argument("Poisson mean must be finite and non-negative");
  if (mean == 0.0) return 0;
  return mean < 10.0 ? inversion(mean) : ptrs(mean);
}

std::uint64_t PoissonSampler::inversion(double mean) {
  double p = std::exp(-mean);
  double cdf = p;
  const double u = uniform();
  std::uint64_t k = 0;
  while (u > cdf && k < 1000) {
    ++k;
    p *= mean / static_cast<double>(k);
    cdf += p;
  }
  return k;
}

// Transformed rejection with squeeze (Hormann 1993), valid for mean >= 10.
std::uint64_t PoissonSampler::ptrs(double mean) {
  const double slam = std::sqrt(mean);
  const double loglam = std::log(mean);
  const double b = 0.931 + 2.53 * slam;
  const double a = -0.059 + 0.02483 * b;
  const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
  const double vr = 0.9277 - 3.6224 / (b - 2.0);
  for (;;) {
    const double u = uniform() - 0.5;
    const double v = uniform();
    const double us = 0.5 - std::abs(u);
    const double k = std::floor((2.0 * a / us + b) * u + mean + 0.43);
    if (us >= 0.07 && v <= vr) return static_cast<std::uint64_t>(k);
    if (k < 0.0 || (us < 0.013 && v > us)) continue;
    if (std::log(v) + std::log(inv_alpha) - std::log(a / (us * us) + b) <=
        -mean + k * loglam - std::lgamma(k + 1.0)) {
      return static_cast<std::uint64_t>(k);
    }
  }
}

std::vector<EdgeFlow> poisson_flow(const CellComplex& c, const WorkloadSpec& w) {
  std::vector<std::string> problems;
  if (!(w.base_rate > 0.0) || !std::isfinite(w.base_rate))
    problems.push_back("base_rate must be positive and finite");
  if (w.windows < 1) problems.push_back("windows must be at least 1");
  Vector rates = Vector::Constant(c.num_edges(), w.base_rate);
  for (const auto& [id, inc] : w.edge_increments) {
    auto e = c.edge_index(id);
    if (!e) {
      problems.push_back("edge increment references unknown edge '" + id + "'");
      continue;
    }
    if (!(inc >= 0.0) || !std::isfinite(inc)) {
      problems.push_back("edge increment for '" + id + "' must be finite and non-negative");
      continue;
    }
    rates(*e) += inc;
  }
  if (!problems.empty()) throw ValidationError(std::move(problems));

  std::vector<EdgeFlow> out;
  out.reserve(static_cast<std::size_t>(w.windows));
  for (int t = 0; t < w.windows; ++t) {
    PoissonSampler draw(window_seed(w.seed, t));
    EdgeFlow f{Vector(c.num_edges()), "requests/T"};
    for (Eigen::Index e = 0; e < f.values.size(); ++e)
      f.values(e) = static_cast<double>(draw(rates(e)));
    out.push_back(std::move(f));
  }
  return out;
}

namespace {

void check_node_metric(const CellComplex& c, const NodeMetric& x) {
  if (static_cast<std::size_t>(x.values.size()) != c.num_nodes()) {
    throw ValidationError("node metric has " + std::to_string(x.values.size()) +
                          " values but the complex has " + std::to_string(c.num_nodes()) +
                          " nodes");
  }
  for (Eigen::Index v = 0; v < x.values.size(); ++v) {
    if (!std::isfinite(x.values(v)))
      throw ValidationError("metric of node '" + c.nodes()[v].id + "' is not finite");
  }
}

}  // namespace

EdgeFlow node_diff_flow(const CellComplex& c, const NodeMetric& x) {
  check_node_metric(c, x);
  for (Eigen::Index v = 0; v < x.values.size(); ++v) {
    if (x.values(v) < 0.0)
      throw ValidationError("metric of node '" + c.nodes()[v].id + "' is negative");
  }
  EdgeFlow f{Vector::Zero(c.num_edges()), x.metric.empty() ? "relative difference"
                                                          : x.metric + " relative difference"};
  for (std::size_t e = 0; e < c.num_edges(); ++e) {
    const double xi = x.values(c.edge_tail(e));
    const double xj = x.values(c.edge_head(e));
    const double den = std::max(xi, xj);
    f.values(e) = den > 0.0 ? (xi - xj) / den : 0.0;
  }
  return f;
}

EdgeFlow covariance_flow(const CellComplex& c, const NodeMetricSeries& s) {
  if (static_cast<std::size_t>(s.samples.rows()) != c.num_nodes()) {
    throw ValidationError("metric series has " + std::to_string(s.samples.rows()) +
                          " rows but the complex has " + std::to_string(c.num_nodes()) +
                          " nodes");
  }
  const auto n = s.samples.cols();
  if (n < 2) throw ValidationError("covariance needs at least 2 samples per node");
  if (!s.samples.allFinite()) throw ValidationError("metric series has non-finite samples");

  Matrix centered = s.samples.colwise() - s.samples.rowwise().mean();
  EdgeFlow f{Vector::Zero(c.num_edges()),
             s.metric.empty() ? "covariance" : "cov(" + s.metric + ")"};
  for (std::size_t e = 0; e < c.num_edges(); ++e) {
    f.values(e) = centered.row(c.edge_tail(e)).dot(centered.row(c.edge_head(e))) /
                  static_cast<double>(n - 1);
  }
  return f;
}

EdgeFlow weighted_flow(const CellComplex& c, const EdgeFlow& y, const NodeMetric& x) {
  check_flow(c, y);
  check_node_metric(c, x);
  EdgeFlow f{Vector(c.num_edges()), y.metric};
  if (!x.metric.empty()) f.metric = y.metric.empty() ? x.metric : y.metric + "*" + x.metric;
  for (std::size_t e = 0; e < c.num_edges(); ++e)
    f.values(e) = y.values(e) * x.values(c.edge_tail(e));
  return f;
}

EdgeFlow coldstart_flow(const CellComplex& c, const EdgeFlow& f_req, const ColdStartSpec& cs) {
  check_flow(c, f_req);
  std::vector<std::string> problems;
  Vector latency = Vector::Zero(c.num_nodes());
  for (const auto& [id, ms] : cs.cold_latency) {
    auto v = c.node_index(id);
    if (!v) {
      problems.push_back("cold-start spec references unknown node '" + id + "'");
      continue;
    }
    if (!(ms >= 0.0) || !std::isfinite(ms)) {
      problems.push_back("cold latency of '" + id + "' must be finite and non-negative");
      continue;
    }
    latency(*v) = ms;
  }
  if (!problems.empty()) throw ValidationError(std::move(problems));

  EdgeFlow f{Vector(c.num_edges()), "ms·requests/T"};
  for (std::size_t e = 0; e < c.num_edges(); ++e)
    f.values(e) = f_req.values(e) * latency(c.edge_head(e));
  return f;
}

}  // namespace hodgefaas
