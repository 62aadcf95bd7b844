#include "hodgefaas/fixtures.hpp"

#include <stdexcept>

#include "hodgefaas/error.hpp"
#include "hodgefaas/io.hpp"
#include "hodgefaas/topology.hpp"

namespace hodgefaas::fixtures {

// Defined in the generated fixtures_data.cpp.
namespace detail {
struct Blob {
  std::string_view name;
  std::string_view text;
};
const std::vector<Blob>& blobs();
}  // namespace detail

std::string_view raw_json(std::string_view name) {
  for (const auto& b : detail::blobs())
    if (b.name == name) return b.text;
  throw std::out_of_range("unknown fixture '" + std::string(name) + "'");
}

std::vector<std::string> names() {
  std::vector<std::string> out;
  for (const auto& b : detail::blobs()) out.emplace_back(b.name);
  return out;
}

namespace {

CellComplex load(std::string_view name) {
  const std::string source = "fixture " + std::string(name);
  return CellComplex::build(io::complex_from_json(io::parse_json(raw_json(name), source), source));
}

void verify(const std::string& name, const CellComplex& c, std::size_t b0, std::size_t b1,
            std::size_t b2, std::size_t hdim) {
  const auto b = betti(c);
  const auto h = harmonic_basis(c).size();
  if (b.beta0 != b0 || b.beta1 != b1 || b.beta2 != b2 || h != hdim) {
    throw NumericalError("fixture '" + name + "' no longer matches its recorded invariants");
  }
}

}  // namespace

CellComplex running_example() {
  auto c = load("running_example");
  verify("running_example", c, 3, 3, 0, 3);
  return c;
}

WorkloadSpec abnormal_call_flow_workload() {
  return io::workload_from_json(io::parse_json(raw_json("workload_abnormal_call_flow"), "fixture"));
}

ColdStartSpec coldstart_case() {
  return io::coldstart_from_json(io::parse_json(raw_json("coldstart_case"), "fixture"));
}

std::vector<CatalogEntry> micro_fixtures() {
  struct Expected {
    const char* name;
    std::size_t b0, b1, b2;
  };
  static constexpr Expected kExpected[] = {
      {"filled_triangle", 1, 0, 0},
      {"unfilled_triangle", 1, 1, 0},
      {"theta_graph", 1, 2, 0},
      {"square_saga", 1, 0, 0},
      {"triangle_isolated", 3, 1, 0},
  };
  std::vector<CatalogEntry> out;
  for (const auto& e : kExpected) {
    auto c = load(e.name);
    verify(e.name, c, e.b0, e.b1, e.b2, e.b1);
    out.push_back({e.name, std::move(c), e.b0, e.b1, e.b2, e.b1});
  }
  return out;
}

}  // namespace hodgefaas::fixtures
