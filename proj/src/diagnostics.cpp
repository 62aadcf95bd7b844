#include "hodgefaas/diagnostics.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <set>

#include "hodgefaas/error.hpp"

namespace hodgefaas {

namespace {

bool mentions_retry(std::string label) {
  std::transform(label.begin(), label.end(), label.begin(),
                 [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
  return label.find("retry") != std::string::npos;
}

std::string num(std::size_t v) { return std::to_string(v); }

}  // namespace

KernelFlags KernelFlags::from(const BettiNumbers& b, bool retry_labels) {
  return {b.beta0 > 1, b.beta1 > 0, b.beta2 > 0, retry_labels};
}

std::vector<SupportEntry> harmonic_support(const CellComplex& c, const HodgeDecomposition& d,
                                           double support_fraction) {
  if (!(support_fraction > 0.0 && support_fraction <= 1.0))
    throw ValidationError("support fraction must lie in (0, 1]");
  if (harmonic_negligible(d)) return {};
  const Vector& h = d.harmonic.values;
  const double peak = h.cwiseAbs().maxCoeff();

  std::vector<SupportEntry> out;
  for (Eigen::Index e = 0; e < h.size(); ++e) {
    const double mag = std::abs(h(e));
    if (mag > support_fraction * peak) out.push_back({c.edges()[e].id, mag});
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const auto& a, const auto& b) { return a.magnitude > b.magnitude; });
  return out;
}

std::vector<std::string> classify(const BettiNumbers& b, double stress, const KernelFlags& flags) {
  std::vector<std::string> hints;
  if (flags.l0) {
    hints.push_back("[disconnected-subsystems] beta0 = " + num(b.beta0) +
                    ": the service splits into independent subsystems (isolated functions or "
                    "non-communicating fault domains); changes only when dependencies are "
                    "added or removed");
    if (flags.retry_labels) {
      hints.push_back(
          "[causal-retry] heuristic: isolated components coexist with retry-labeled edges; "
          "check for causal/temporal cycles (cold start + distributed retries, partially "
          "idempotent workflows) that load nodes rather than graph cycles (harmonic on L0); "
          "mitigate with warm pools, backoff, idempotency or compensations");
    }
  }
  if (flags.l1) {
    hints.push_back("[non-reducible-cycle] beta1 = " + num(b.beta1) +
                    ": non-reducible cycle (loop) not bounded by any saga; global feedback, "
                    "convergence or external rate-limiting loops carry harmonic energy on L1 "
                    "and can only be dampened (batching, backoff, circuit breakers), not "
                    "removed by local balancing");
    if (stress > 0.0) {
      hints.push_back("[unorchestrated-cycle] harmonic stress " + std::to_string(stress) +
                      ": observed flow circulates on cycles that no saga governs "
                      "(compensation, asynchronous retry or callback/webhook loops); "
                      "reducing it requires architectural refactoring");
    }
  }
  if (flags.l2) {
    hints.push_back("[closed-surface] beta2 = " + num(b.beta2) +
                    ": sagas enclose a closed surface (saga of sagas, fork-join waiting "
                    "surface or asynchronous cache invalidation); harmonic on L2, reducible "
                    "only partially by fewer compensations or async joins");
  }
  return hints;
}

Reporter::Reporter(const CellComplex& c, const RankTolerance& tol, double support_fraction)
    : complex_(&c),
      decomposer_(c, tol),
      betti_(betti(c, tol)),
      support_fraction_(support_fraction) {
  if (!(support_fraction > 0.0 && support_fraction <= 1.0))
    throw ValidationError("support fraction must lie in (0, 1]");
  gaps_.l0 = spectral_gap(spectrum(c, 0), tol).value;
  gaps_.l1 = spectral_gap(spectrum(c, 1), tol).value;
  gaps_.l2 = spectral_gap(spectrum(c, 2), tol).value;
  bool retry = std::any_of(c.edges().begin(), c.edges().end(),
                           [](const EdgeRecord& e) { return mentions_retry(e.label); });
  flags_ = KernelFlags::from(betti_, retry);
  for (auto v : c.isolated_nodes()) isolated_.push_back(c.nodes()[v].id);
}

DiagnosticReport Reporter::report(const EdgeFlow& f, std::optional<int> window_index) const {
  DiagnosticReport r;
  r.decomposition = decomposer_.decompose(f);
  const auto& d = r.decomposition;
  r.betti = betti_;
  r.energies = {d.energy_grad, d.energy_curl, d.energy_harm, d.energy_total};
  const auto stress = harmonic_stress(d);
  r.harmonic_stress = harmonic_negligible(d) ? 0.0 : stress.value;
  if (stress.zero_flow) r.notes.push_back("zero flow: harmonic stress defined as 0");
  r.support_fraction = support_fraction_;
  r.harmonic_support = harmonic_support(*complex_, d, support_fraction_);
  r.spectral_gaps = gaps_;
  r.classification_hints = classify(betti_, r.harmonic_stress, flags_);
  r.isolated_nodes = isolated_;
  r.window_index = window_index;
  r.metric = f.metric;
  if (f.metric.rfind("cov", 0) == 0) {
    r.notes.push_back(
        "covariance flow: symmetric values stored on canonical orientations; signs follow the "
        "declared edge directions");
  }
  for (const auto& e : complex_->edges()) r.edge_ids.push_back(e.id);
  return r;
}

DiagnosticReport report(const CellComplex& c, const EdgeFlow& f, const RankTolerance& tol,
                        double support_fraction) {
  return Reporter(c, tol, support_fraction).report(f);
}

TrendSummary compare_windows(const std::vector<DiagnosticReport>& reports) {
  if (reports.size() < 2) throw ValidationError("compare_windows needs at least 2 reports");
  for (std::size_t i = 1; i < reports.size(); ++i) {
    if (reports[i].edge_ids != reports[0].edge_ids) {
      throw ValidationError("report " + std::to_string(i) +
                            " was computed on a different complex (edge sets differ)");
    }
  }
  TrendSummary t;
  std::set<std::string> previous;
  for (std::size_t i = 0; i < reports.size(); ++i) {
    const auto& r = reports[i];
    t.energy_grad.push_back(r.energies.grad);
    t.energy_curl.push_back(r.energies.curl);
    t.energy_harm.push_back(r.energies.harm);
    t.energy_total.push_back(r.energies.total);
    t.stress.push_back(r.harmonic_stress);
    std::set<std::string> support;
    for (const auto& s : r.harmonic_support) support.insert(s.edge);
    if (i > 0 && support != previous) t.structure_changes.push_back(i);
    previous = std::move(support);
  }
  return t;
}

}  // namespace hodgefaas
