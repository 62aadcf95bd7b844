#include <cstdlib>
#include <filesystem>
#include <set>
#include <sstream>
#include <string>

#include "doctest.h"

#include "cli.hpp"
#include "hodgefaas/error.hpp"
#include "hodgefaas/fixtures.hpp"
#include "hodgefaas/io.hpp"
#include "shapes.hpp"

using namespace hodgefaas;
using io::Json;

namespace {

const std::string kFixtures = HODGEFAAS_FIXTURE_DIR;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

struct TempDir {
  std::filesystem::path path;
  TempDir() {
    path = std::filesystem::temp_directory_path() /
           ("hodgefaas_cli_" + std::to_string(reinterpret_cast<std::uintptr_t>(this)));
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
  std::string write(const std::string& name, const std::string& text) const {
    auto p = path / name;
    io::write_file(p, text);
    return p.string();
  }
};

std::string fixture(const std::string& name) { return kFixtures + "/" + name + ".json"; }

}  // namespace

TEST_CASE("validate: exit codes and findings") {
  TempDir tmp;
  auto ok = run({"validate", fixture("running_example")});
  CHECK(ok.code == 0);

  auto open_json = io::complex_to_json(shapes::triangle_description(false));
  open_json["faces"] = Json::array({Json{{"id", "open"}, {"boundary", Json::array({Json::array({"ab", 1}), Json::array({"bc", 1}),
                                      Json::array({"ab", -1})})}}});
  auto bad = run({"validate", tmp.write("open.json", io::dump(open_json)), "--format", "text"});
  CHECK(bad.code == 1);
  CHECK((bad.out + bad.err).find("'open'") != std::string::npos);

  auto corrupt = io::complex_to_json(shapes::triangle_description(true));
  corrupt["faces"][0]["boundary"][1][1] = -1;
  auto res = run({"validate", tmp.write("corrupt.json", io::dump(corrupt))});
  CHECK(res.code == 1);
  auto doc = io::parse_json(res.out, "stdout");
  CHECK(doc["valid"] == false);
  bool named = false;
  for (auto& e : doc["errors"]) {
    auto s = e.get<std::string>();
    named |= s.find("B1*B2") != std::string::npos && s.find("'abc'") != std::string::npos &&
             s.find("'bc'") != std::string::npos;
  }
  CHECK(named);
}

TEST_CASE("betti: running example") {
  auto r = run({"betti", fixture("running_example")});
  CHECK(r.code == 0);
  CHECK(r.out == "{\"beta0\":3,\"beta1\":3,\"beta2\":0}\n");
}

TEST_CASE("spectrum: formats and degree check") {
  auto r = run({"spectrum", fixture("unfilled_triangle"), "--laplacian", "0"});
  CHECK(r.code == 0);
  auto j = io::parse_json(r.out, "stdout");
  CHECK(j["eigenvalues"].size() == 3);
  CHECK(j["spectral_gap"].get<double>() == doctest::Approx(3));
  CHECK(run({"spectrum", fixture("unfilled_triangle"), "--laplacian", "3"}).code == 2);
  auto csv = run({"spectrum", fixture("unfilled_triangle"), "--format", "csv"});
  CHECK(csv.code == 0);
}

TEST_CASE("gen-flow, decompose and report agree") {
  TempDir tmp;
  auto gen = run({"gen-flow", fixture("running_example"), fixture("workload_abnormal_call_flow")});
  REQUIRE(gen.code == 0);
  auto flow = tmp.write("flow.json", gen.out);

  auto csv = run({"decompose", fixture("running_example"), flow, "--format", "csv"});
  REQUIRE(csv.code == 0);
  CHECK(csv.out.rfind("edge,f,f_grad,f_curl,h\n", 0) == 0);

  auto rep = run({"report", fixture("running_example"), flow});
  REQUIRE(rep.code == 0);
  auto j = io::parse_json(rep.out, "report");
  std::set<std::string> support;
  double peak = 0;
  for (auto& s : j["harmonic_support"]) {
    support.insert(s["edge"].get<std::string>());
    peak = std::max(peak, s["magnitude"].get<double>());
  }
  // Rows of the CSV whose |h| exceeds the report's threshold.
  std::set<std::string> from_csv;
  std::istringstream in(csv.out);
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    auto last = line.rfind(',');
    double h = std::stod(line.substr(last + 1));
    if (std::abs(h) > j["support_fraction"].get<double>() * peak)
      from_csv.insert(line.substr(0, line.find(',')));
  }
  CHECK(support == from_csv);
  CHECK(support.count("cancelOrder->updateInventory"));
  CHECK(support.count("processPayment->cancelOrder"));
}

TEST_CASE("gen-flow: round trip is bit-identical") {
  TempDir tmp;
  auto out = (tmp.path / "w.json").string();
  auto gen = run({"gen-flow", fixture("running_example"), fixture("workload_abnormal_call_flow"),
                  "--windows", "3", "--seed", "7", "-o", out});
  REQUIRE(gen.code == 0);
  auto c = fixtures::running_example();
  auto parsed = io::load_flows(c, out);
  REQUIRE(parsed.windows.size() == 3);
  WorkloadSpec w = fixtures::abnormal_call_flow_workload();
  w.seed = 7;
  w.windows = 3;
  auto direct = poisson_flow(c, w);
  for (int t = 0; t < 3; ++t) CHECK(parsed.windows[t].values == direct[t].values);
  CHECK(io::dump(io::flows_to_json(c, parsed.windows)) == io::read_file(out));
}

TEST_CASE("report: windowed input yields reports and a trend") {
  TempDir tmp;
  auto gen = run({"gen-flow", fixture("running_example"), fixture("workload_abnormal_call_flow"),
                  "--windows", "3"});
  auto flow = tmp.write("w.json", gen.out);
  auto rep = run({"report", fixture("running_example"), flow});
  REQUIRE(rep.code == 0);
  auto j = io::parse_json(rep.out, "report");
  CHECK(j["reports"].size() == 3);
  CHECK(j["reports"][2]["window_index"] == 2);
  CHECK(j.contains("trend"));

  auto one = run({"decompose", fixture("running_example"), flow, "--window", "1", "--format", "csv"});
  CHECK(one.code == 0);
  auto out_of_range = run({"decompose", fixture("running_example"), flow, "--window", "9"});
  CHECK(out_of_range.code != 0);
}

TEST_CASE("equiv: gradient perturbation") {
  TempDir tmp;
  auto c = shapes::filled_triangle();
  EdgeFlow f{Eigen::Vector3d(2, 1, -1), ""};
  EdgeFlow g{f.values + Eigen::Vector3d(-1, 0, 1), ""};  // + B1^T (1, 0, 0)
  auto cpath = tmp.write("c.json", io::dump(io::complex_to_json(c.description())));
  auto fpath = tmp.write("f.json", io::dump(io::flow_to_json(c, f)));
  auto gpath = tmp.write("g.json", io::dump(io::flow_to_json(c, g)));
  auto text = run({"equiv", cpath, fpath, gpath, "--format", "text"});
  CHECK(text.code == 0);
  CHECK(text.out.rfind("equivalent: true", 0) == 0);
  auto json = run({"equiv", cpath, fpath, gpath});
  CHECK(io::parse_json(json.out, "x")["equivalent"] == true);
}

TEST_CASE("coldstart and derive") {
  TempDir tmp;
  auto gen = run({"gen-flow", fixture("running_example"), fixture("workload_abnormal_call_flow")});
  auto flow = tmp.write("f.json", gen.out);
  auto cold = run({"coldstart", fixture("running_example"), flow, fixture("coldstart_case")});
  REQUIRE(cold.code == 0);
  auto j = io::parse_json(cold.out, "cold");
  for (auto& [edge, v] : j["values"].items()) {
    if (v.get<double>() == 0) continue;
    auto head = edge.substr(edge.find("->") + 2);
    CHECK((head == "processPayment" || head == "validatePayment" || head == "syncInventory"));
  }

  auto metric = tmp.write("x.json", R"({"metric":"cpu","values":{"a":4,"b":2,"c":2}})");
  auto diff = run({"derive", fixture("unfilled_triangle"), "--node-diff", metric});
  REQUIRE(diff.code == 0);
  CHECK(io::parse_json(diff.out, "d")["values"]["ab"] == 0.5);
  CHECK(run({"derive", fixture("unfilled_triangle")}).code == 2);
}

TEST_CASE("fixture subcommand") {
  auto list = run({"fixture", "--list"});
  CHECK(list.code == 0);
  CHECK(list.out.find("running_example") != std::string::npos);
  auto one = run({"fixture", "theta_graph"});
  CHECK(one.code == 0);
  CHECK(one.out == std::string(fixtures::raw_json("theta_graph")));
  CHECK(run({"fixture", "nope"}).code == 2);
}

TEST_CASE("exit codes for input errors") {
  TempDir tmp;
  CHECK(run({"betti", (tmp.path / "missing.json").string()}).code == 2);
  CHECK(run({"betti", tmp.write("bad.json", "{\"nodes\": [")}).code == 2);
  auto unknown = io::complex_to_json(shapes::triangle_description(false));
  unknown["colour"] = "red";
  auto r = run({"betti", tmp.write("u.json", io::dump(unknown))});
  CHECK(r.code == 2);
  CHECK(r.err.find("'colour'") != std::string::npos);
  CHECK(run({"no-such-command"}).code == 2);
  CHECK(run({"betti", fixture("unfilled_triangle"), "--tol", "-1"}).code == 2);

  auto flow = tmp.write("f.json", R"({"values":{"zz":1}})");
  CHECK(run({"decompose", fixture("unfilled_triangle"), flow}).code == 1);
}

TEST_CASE("tolerance from the environment") {
  ::setenv("HODGE_FAAS_TOL", "1e-6", 1);
  auto r = run({"report", fixture("unfilled_triangle"), fixture("unfilled_triangle")});
  ::unsetenv("HODGE_FAAS_TOL");
  // The second argument is not a flow file; only the env handling matters here.
  CHECK(r.code != 0);

  TempDir tmp;
  auto flow = tmp.write("f.json", R"({"values":{"ab":1,"bc":1,"ca":1}})");
  ::setenv("HODGE_FAAS_TOL", "1e-6", 1);
  auto ok = run({"report", fixture("unfilled_triangle"), flow});
  ::setenv("HODGE_FAAS_TOL", "garbage", 1);
  auto bad = run({"report", fixture("unfilled_triangle"), flow});
  ::unsetenv("HODGE_FAAS_TOL");
  REQUIRE(ok.code == 0);
  CHECK(io::parse_json(ok.out, "r")["betti"]["tolerance"]["absolute_floor"] == 1e-6);
  CHECK(bad.code == 2);
}

TEST_CASE("determinism: repeated invocations are byte-identical") {
  TempDir tmp;
  std::vector<std::string> gen{"gen-flow", fixture("running_example"),
                               fixture("workload_abnormal_call_flow"), "--windows", "2"};
  auto a = run(gen), b = run(gen);
  CHECK(a.out == b.out);
  auto flow = tmp.write("f.json", a.out);
  for (auto fmt : {"json", "csv"}) {
    std::vector<std::string> dec{"decompose", fixture("running_example"), flow, "--format", fmt,
                                 "--window", "0"};
    CHECK(run(dec).out == run(dec).out);
  }
  std::vector<std::string> rep{"report", fixture("running_example"), flow};
  CHECK(run(rep).out == run(rep).out);
}
