#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hodgefaas/complex.hpp"
#include "hodgefaas/hodge.hpp"
#include "hodgefaas/topology.hpp"

namespace hodgefaas {

struct Energies {
  double grad = 0.0;
  double curl = 0.0;
  double harm = 0.0;
  double total = 0.0;
};

struct SupportEntry {
  std::string edge;
  double magnitude = 0.0;
};

struct SpectralGaps {
  double l0 = 0.0;
  double l1 = 0.0;
  double l2 = 0.0;
};

/// Which Laplacians carry kernel beyond the trivial baseline, plus the one
/// piece of label metadata the classifier looks at.
struct KernelFlags {
  bool l0 = false;  // beta0 > 1
  bool l1 = false;  // beta1 > 0
  bool l2 = false;  // beta2 > 0
  bool retry_labels = false;  // some edge label mentions "retry"

  static KernelFlags from(const BettiNumbers& b, bool retry_labels = false);
};

struct DiagnosticReport {
  BettiNumbers betti;
  Energies energies;
  double harmonic_stress = 0.0;
  double support_fraction = 0.05;
  std::vector<SupportEntry> harmonic_support;  // sorted by magnitude, descending
  SpectralGaps spectral_gaps;
  std::vector<std::string> classification_hints;
  std::vector<std::string> isolated_nodes;
  std::vector<std::string> notes;
  std::optional<int> window_index;
  std::string metric;

  HodgeDecomposition decomposition;
  std::vector<std::string> edge_ids;
};

/// Edges whose harmonic value exceeds support_fraction * max|h|. A harmonic
/// part no larger than 1e-8 (1 + |f|) in max norm is treated as zero.
std::vector<SupportEntry> harmonic_support(const CellComplex& c, const HodgeDecomposition& d,
                                           double support_fraction);

/// Advisory hints keyed on topological invariants. Pure function of its
/// inputs; hints are stable-prefixed strings, e.g. "[non-reducible-cycle] ...".
std::vector<std::string> classify(const BettiNumbers& b, double stress, const KernelFlags& flags);

/// Reuses topology and factorizations across windows of the same complex.
class Reporter {
 public:
  Reporter(const CellComplex& c, const RankTolerance& tol = {}, double support_fraction = 0.05);

  DiagnosticReport report(const EdgeFlow& f, std::optional<int> window_index = {}) const;

 private:
  const CellComplex* complex_;
  HodgeDecomposer decomposer_;
  BettiNumbers betti_;
  SpectralGaps gaps_;
  KernelFlags flags_;
  std::vector<std::string> isolated_;
  double support_fraction_;
};

DiagnosticReport report(const CellComplex& c, const EdgeFlow& f, const RankTolerance& tol = {},
                        double support_fraction = 0.05);

struct TrendSummary {
  std::vector<double> energy_grad;
  std::vector<double> energy_curl;
  std::vector<double> energy_harm;
  std::vector<double> energy_total;
  std::vector<double> stress;
  /// Positions (0-based, in input order) whose harmonic support edge set
  /// differs from the previous report's.
  std::vector<std::size_t> structure_changes;
};

/// Throws ValidationError for fewer than two reports or mixed edge sets.
TrendSummary compare_windows(const std::vector<DiagnosticReport>& reports);

}  // namespace hodgefaas
