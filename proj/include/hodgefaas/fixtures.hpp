#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "hodgefaas/complex.hpp"
#include "hodgefaas/flows.hpp"

namespace hodgefaas::fixtures {

inline constexpr std::string_view kCatalogVersion = "1";

/// Raw JSON of a bundled fixture file (e.g. "running_example"). Throws
/// std::out_of_range for unknown names.
std::string_view raw_json(std::string_view name);
std::vector<std::string> names();

/// E-commerce service: 32 functions in 10 layers, 38
/// calls, 6 sagas; getOrderStatus and getOrderHistory are isolated.
/// Betti numbers (3, 3, 0), checked on every load.
CellComplex running_example();

/// lambda = 10 per edge, +30 on API->Auth, +15 on
/// processPayment->validatePayment, fixed seed.
WorkloadSpec abnormal_call_flow_workload();

/// processPayment 300 ms, validatePayment 200 ms, syncInventory 400 ms.
ColdStartSpec coldstart_case();

struct CatalogEntry {
  std::string name;
  CellComplex complex;
  std::size_t beta0;
  std::size_t beta1;
  std::size_t beta2;
  std::size_t harmonic_dim;
};

/// Closed-form micro complexes with their expected invariants. Each entry is
/// recomputed at load; a mismatch throws NumericalError.
std::vector<CatalogEntry> micro_fixtures();

}  // namespace hodgefaas::fixtures
