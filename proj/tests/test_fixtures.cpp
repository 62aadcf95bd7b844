#include <algorithm>
#include <set>
#include <stdexcept>
#include <string>

#include "doctest.h"

#include "hodgefaas/fixtures.hpp"
#include "hodgefaas/io.hpp"
#include "hodgefaas/topology.hpp"
#include "oracles.hpp"

using namespace hodgefaas;

TEST_CASE("running_example: invariants") {
  auto c = fixtures::running_example();
  CHECK(c.num_nodes() == 32);
  CHECK(c.num_edges() == 38);
  CHECK(c.num_faces() == 6);
  auto b = betti(c);
  CHECK(b.beta0 == 3);
  CHECK(b.beta1 == 3);
  CHECK(b.beta2 == 0);
  CHECK(connected_components(c) == 3);
  CHECK(harmonic_basis(c).size() == 3);
  std::set<std::string> isolated;
  for (auto v : c.isolated_nodes()) isolated.insert(c.nodes()[v].id);
  CHECK(isolated == std::set<std::string>{"getOrderStatus", "getOrderHistory"});
}

TEST_CASE("running_example: Betti by exact elimination") {
  auto c = fixtures::running_example();
  auto r1 = oracle::exact_rank(oracle::b1_by_definition(c));
  auto r2 = oracle::exact_rank(incidence_edge_face(c));
  CHECK(c.num_nodes() - r1 == 3);
  CHECK(c.num_edges() - r1 - r2 == 3);
  CHECK(c.num_faces() - r2 == 0);
}

TEST_CASE("running_example: attested edges are present") {
  auto c = fixtures::running_example();
  for (const char* id :
       {"API->Auth", "processPayment->validatePayment", "processPayment->cancelOrder",
        "cancelOrder->updateInventory", "updateInventory->syncInventory"}) {
    INFO(id);
    CHECK(c.edge_index(id).has_value());
  }
  auto pc = c.edge_index("processPayment->cancelOrder");
  REQUIRE(pc);
  CHECK(c.edges()[*pc].tail == "processPayment");
  CHECK(c.edges()[*pc].head == "cancelOrder");
}

TEST_CASE("workload and cold-start fixtures") {
  auto w = fixtures::abnormal_call_flow_workload();
  CHECK(w.base_rate == 10);
  CHECK(w.edge_increments.at("API->Auth") == 30);
  CHECK(w.edge_increments.at("processPayment->validatePayment") == 15);
  CHECK(w.edge_increments.size() == 2);
  auto cs = fixtures::coldstart_case();
  CHECK(cs.cold_latency == std::map<std::string, double>{
                               {"processPayment", 300}, {"validatePayment", 200}, {"syncInventory", 400}});
}

TEST_CASE("micro fixtures: catalog invariants recompute") {
  auto catalog = fixtures::micro_fixtures();
  std::set<std::string> names;
  for (auto& e : catalog) {
    INFO(e.name);
    names.insert(e.name);
    auto b = betti(e.complex);
    CHECK(b.beta0 == e.beta0);
    CHECK(b.beta1 == e.beta1);
    CHECK(b.beta2 == e.beta2);
    CHECK(harmonic_basis(e.complex).size() == e.harmonic_dim);
    auto r1 = oracle::exact_rank(oracle::b1_by_definition(e.complex));
    auto r2 = oracle::exact_rank(incidence_edge_face(e.complex));
    CHECK(e.complex.num_nodes() - r1 == e.beta0);
    CHECK(e.complex.num_edges() - r1 - r2 == e.beta1);
  }
  CHECK(names.count("theta_graph"));
  CHECK(names.count("square_saga"));
  CHECK(names.count("triangle_isolated"));
  for (auto& e : catalog) {
    if (e.name == "theta_graph") CHECK(e.beta1 == 2);
    if (e.name == "square_saga") CHECK((e.beta1 == 0 && e.beta2 == 0));
    if (e.name == "triangle_isolated") CHECK(e.beta0 == 3);
  }
}

TEST_CASE("raw fixtures parse in the public formats") {
  auto all = fixtures::names();
  CHECK(std::is_sorted(all.begin(), all.end()));
  CHECK(std::find(all.begin(), all.end(), "running_example") != all.end());
  for (auto& name : all) {
    INFO(name);
    auto doc = io::parse_json(fixtures::raw_json(name), name);
    if (doc.contains("nodes")) CHECK_NOTHROW(CellComplex::build(io::complex_from_json(doc, name)));
  }
  CHECK_THROWS_AS(fixtures::raw_json("no_such_fixture"), std::out_of_range);
}
