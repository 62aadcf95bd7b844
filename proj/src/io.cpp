#include "hodgefaas/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "hodgefaas/error.hpp"

namespace hodgefaas::io {

namespace {

std::string position(std::string_view text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

void require_object(const Json& j, const std::string& where) {
  if (!j.is_object()) throw InputError(where + ": expected a JSON object");
}

void allow_fields(const Json& j, std::initializer_list<std::string_view> allowed,
                  const std::string& where) {
  for (const auto& item : j.items()) {
    bool known = false;
    for (auto a : allowed) known = known || item.key() == a;
    if (!known) throw InputError(where + ": unknown field '" + item.key() + "'");
  }
}

std::string get_string(const Json& j, const char* key, const std::string& where, bool required) {
  auto it = j.find(key);
  if (it == j.end()) {
    if (required) throw InputError(where + ": missing field '" + key + "'");
    return {};
  }
  if (!it->is_string()) throw InputError(where + ": field '" + key + "' must be a string");
  return it->get<std::string>();
}

double get_number(const Json& j, const std::string& where) {
  if (!j.is_number()) throw InputError(where + ": expected a number");
  return j.get<double>();
}

const Json& get_array(const Json& j, const char* key, const std::string& where) {
  auto it = j.find(key);
  if (it == j.end()) throw InputError(where + ": missing field '" + key + "'");
  if (!it->is_array()) throw InputError(where + ": field '" + key + "' must be an array");
  return *it;
}

const Json& get_object(const Json& j, const char* key, const std::string& where) {
  auto it = j.find(key);
  if (it == j.end()) throw InputError(where + ": missing field '" + key + "'");
  if (!it->is_object()) throw InputError(where + ": field '" + key + "' must be an object");
  return *it;
}

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

Json number_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

}  // namespace

Json parse_json(std::string_view text, const std::string& source) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    std::string msg = e.what();
    if (auto p = msg.find("parse error"); p != std::string::npos) msg = msg.substr(p);
    throw InputError(source + ": " + position(text, e.byte > 0 ? e.byte - 1 : 0) + ": " + msg);
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Json load_json(const std::filesystem::path& path) {
  return parse_json(read_file(path), path.string());
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write '" + path.string() + "'");
  out << text;
}

ComplexDescription complex_from_json(const Json& doc, const std::string& source) {
  require_object(doc, source);
  allow_fields(doc, {"nodes", "edges", "faces"}, source);
  ComplexDescription d;

  const auto& nodes = get_array(doc, "nodes", source);
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const std::string where = source + ": nodes[" + std::to_string(i) + "]";
    require_object(nodes[i], where);
    allow_fields(nodes[i], {"id", "label"}, where);
    d.nodes.push_back({get_string(nodes[i], "id", where, true),
                       get_string(nodes[i], "label", where, false)});
  }

  if (doc.contains("edges")) {
    const auto& edges = get_array(doc, "edges", source);
    for (std::size_t i = 0; i < edges.size(); ++i) {
      const std::string where = source + ": edges[" + std::to_string(i) + "]";
      require_object(edges[i], where);
      allow_fields(edges[i], {"id", "tail", "head", "label"}, where);
      d.edges.push_back({get_string(edges[i], "id", where, true),
                         get_string(edges[i], "tail", where, true),
                         get_string(edges[i], "head", where, true),
                         get_string(edges[i], "label", where, false)});
    }
  }

  if (doc.contains("faces")) {
    const auto& faces = get_array(doc, "faces", source);
    for (std::size_t i = 0; i < faces.size(); ++i) {
      const std::string where = source + ": faces[" + std::to_string(i) + "]";
      require_object(faces[i], where);
      allow_fields(faces[i], {"id", "boundary", "label"}, where);
      FaceRecord f;
      f.id = get_string(faces[i], "id", where, true);
      f.label = get_string(faces[i], "label", where, false);
      const auto& boundary = get_array(faces[i], "boundary", where);
      for (std::size_t k = 0; k < boundary.size(); ++k) {
        const auto& term = boundary[k];
        const std::string tw = where + ".boundary[" + std::to_string(k) + "]";
        if (!term.is_array() || term.size() != 2 || !term[0].is_string() ||
            !term[1].is_number_integer()) {
          throw InputError(tw + ": expected [edgeId, sign] with an integer sign");
        }
        f.boundary.push_back({term[0].get<std::string>(), term[1].get<int>()});
      }
      d.faces.push_back(std::move(f));
    }
  }
  return d;
}

Json complex_to_json(const ComplexDescription& desc) {
  Json doc = Json::object();
  doc["nodes"] = Json::array();
  for (const auto& n : desc.nodes) {
    Json j = {{"id", n.id}};
    if (!n.label.empty()) j["label"] = n.label;
    doc["nodes"].push_back(std::move(j));
  }
  doc["edges"] = Json::array();
  for (const auto& e : desc.edges) {
    Json j = {{"id", e.id}, {"tail", e.tail}, {"head", e.head}};
    if (!e.label.empty()) j["label"] = e.label;
    doc["edges"].push_back(std::move(j));
  }
  doc["faces"] = Json::array();
  for (const auto& f : desc.faces) {
    Json j = {{"id", f.id}};
    Json b = Json::array();
    for (const auto& t : f.boundary) b.push_back(Json::array({t.edge, t.sign}));
    j["boundary"] = std::move(b);
    if (!f.label.empty()) j["label"] = f.label;
    doc["faces"].push_back(std::move(j));
  }
  return doc;
}

CellComplex load_complex(const std::filesystem::path& path) {
  return CellComplex::build(complex_from_json(load_json(path), path.string()));
}

EdgeFlow flow_from_json(const CellComplex& c, const Json& doc, std::vector<std::string>* warnings) {
  const std::string where = "flow";
  require_object(doc, where);
  allow_fields(doc, {"metric", "values"}, where);
  EdgeFlow f{Vector::Zero(c.num_edges()), get_string(doc, "metric", where, false)};
  const auto& values = get_object(doc, "values", where);

  std::vector<std::string> unknown;
  std::vector<bool> seen(c.num_edges(), false);
  for (const auto& item : values.items()) {
    auto e = c.edge_index(item.key());
    if (!e) {
      unknown.push_back("flow references unknown edge '" + item.key() + "'");
      continue;
    }
    f.values(*e) = get_number(item.value(), where + " value of '" + item.key() + "'");
    seen[*e] = true;
  }
  if (!unknown.empty()) throw ValidationError(std::move(unknown));
  if (warnings) {
    for (std::size_t e = 0; e < c.num_edges(); ++e)
      if (!seen[e]) warnings->push_back("flow has no value for edge '" + c.edges()[e].id + "'; using 0");
  }
  return f;
}

ParsedFlows flows_from_json(const CellComplex& c, const Json& doc) {
  ParsedFlows out;
  require_object(doc, "flow");
  if (doc.contains("windows")) {
    allow_fields(doc, {"windows"}, "window file");
    const auto& windows = get_array(doc, "windows", "window file");
    if (windows.empty()) throw InputError("window file: no windows");
    out.windowed = true;
    for (const auto& w : windows) out.windows.push_back(flow_from_json(c, w, &out.warnings));
  } else {
    out.windows.push_back(flow_from_json(c, doc, &out.warnings));
  }
  return out;
}

ParsedFlows load_flows(const CellComplex& c, const std::filesystem::path& path) {
  try {
    return flows_from_json(c, load_json(path));
  } catch (const InputError& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

Json flow_to_json(const CellComplex& c, const EdgeFlow& f) {
  Json values = Json::object();
  for (std::size_t e = 0; e < c.num_edges(); ++e) values[c.edges()[e].id] = f.values(e);
  return Json{{"metric", f.metric}, {"values", std::move(values)}};
}

Json flows_to_json(const CellComplex& c, const std::vector<EdgeFlow>& flows) {
  if (flows.size() == 1) return flow_to_json(c, flows.front());
  Json arr = Json::array();
  for (const auto& f : flows) arr.push_back(flow_to_json(c, f));
  return Json{{"windows", std::move(arr)}};
}

WorkloadSpec workload_from_json(const Json& doc) {
  const std::string where = "workload";
  require_object(doc, where);
  allow_fields(doc, {"base_rate", "edge_increments", "seed", "windows"}, where);
  WorkloadSpec w;
  if (!doc.contains("base_rate")) throw InputError(where + ": missing field 'base_rate'");
  w.base_rate = get_number(doc["base_rate"], where + ".base_rate");
  if (doc.contains("edge_increments")) {
    for (const auto& item : get_object(doc, "edge_increments", where).items())
      w.edge_increments[item.key()] =
          get_number(item.value(), where + ".edge_increments['" + item.key() + "']");
  }
  if (doc.contains("seed")) {
    if (!doc["seed"].is_number_unsigned())
      throw InputError(where + ".seed: expected a non-negative integer");
    w.seed = doc["seed"].get<std::uint64_t>();
  }
  if (doc.contains("windows")) {
    if (!doc["windows"].is_number_integer())
      throw InputError(where + ".windows: expected an integer");
    w.windows = doc["windows"].get<int>();
  }
  return w;
}

Json workload_to_json(const WorkloadSpec& w) {
  Json inc = Json::object();
  for (const auto& [id, v] : w.edge_increments) inc[id] = v;
  return Json{{"base_rate", w.base_rate}, {"edge_increments", std::move(inc)},
              {"seed", w.seed}, {"windows", w.windows}};
}

ColdStartSpec coldstart_from_json(const Json& doc) {
  const std::string where = "cold-start spec";
  require_object(doc, where);
  allow_fields(doc, {"cold_latency"}, where);
  ColdStartSpec cs;
  for (const auto& item : get_object(doc, "cold_latency", where).items())
    cs.cold_latency[item.key()] = get_number(item.value(), where + " '" + item.key() + "'");
  return cs;
}

NodeMetric node_metric_from_json(const CellComplex& c, const Json& doc,
                                 std::vector<std::string>* warnings) {
  const std::string where = "node metric";
  require_object(doc, where);
  allow_fields(doc, {"metric", "values"}, where);
  NodeMetric x{Vector::Zero(c.num_nodes()), get_string(doc, "metric", where, false)};
  std::vector<bool> seen(c.num_nodes(), false);
  std::vector<std::string> unknown;
  for (const auto& item : get_object(doc, "values", where).items()) {
    auto v = c.node_index(item.key());
    if (!v) {
      unknown.push_back("node metric references unknown node '" + item.key() + "'");
      continue;
    }
    x.values(*v) = get_number(item.value(), where + " '" + item.key() + "'");
    seen[*v] = true;
  }
  if (!unknown.empty()) throw ValidationError(std::move(unknown));
  if (warnings) {
    for (std::size_t v = 0; v < c.num_nodes(); ++v)
      if (!seen[v]) warnings->push_back("node metric has no value for '" + c.nodes()[v].id + "'; using 0");
  }
  return x;
}

NodeMetricSeries node_series_from_json(const CellComplex& c, const Json& doc) {
  const std::string where = "metric series";
  require_object(doc, where);
  allow_fields(doc, {"metric", "series"}, where);
  const auto& series = get_object(doc, "series", where);

  std::vector<std::vector<double>> rows(c.num_nodes());
  std::vector<bool> seen(c.num_nodes(), false);
  std::vector<std::string> problems;
  long length = -1;
  for (const auto& item : series.items()) {
    auto v = c.node_index(item.key());
    if (!v) {
      problems.push_back("metric series references unknown node '" + item.key() + "'");
      continue;
    }
    if (!item.value().is_array())
      throw InputError(where + " '" + item.key() + "': expected an array of numbers");
    for (const auto& s : item.value())
      rows[*v].push_back(get_number(s, where + " '" + item.key() + "'"));
    seen[*v] = true;
    if (length < 0) length = static_cast<long>(rows[*v].size());
    if (static_cast<long>(rows[*v].size()) != length)
      problems.push_back("metric series for '" + item.key() + "' has a different length");
  }
  std::vector<bool> touched(c.num_nodes(), false);
  for (std::size_t e = 0; e < c.num_edges(); ++e) touched[c.edge_tail(e)] = touched[c.edge_head(e)] = true;
  for (std::size_t v = 0; v < c.num_nodes(); ++v)
    if (touched[v] && !seen[v]) problems.push_back("metric series missing for node '" + c.nodes()[v].id + "'");
  if (!problems.empty()) throw ValidationError(std::move(problems));

  NodeMetricSeries s{Matrix::Zero(c.num_nodes(), std::max(length, 0L)),
                     get_string(doc, "metric", where, false)};
  for (std::size_t v = 0; v < c.num_nodes(); ++v)
    for (std::size_t t = 0; t < rows[v].size(); ++t) s.samples(v, t) = rows[v][t];
  return s;
}

Json betti_to_json(const BettiNumbers& b) {
  return Json{{"beta0", b.beta0}, {"beta1", b.beta1}, {"beta2", b.beta2}};
}

Json spectrum_to_json(int degree, const std::vector<double>& eigs, const SpectralGap& gap) {
  Json j{{"laplacian", degree}, {"eigenvalues", eigs}, {"spectral_gap", gap.value}};
  if (!gap.note.empty()) j["note"] = gap.note;
  return j;
}

Json decomposition_to_json(const CellComplex& c, const EdgeFlow& f, const HodgeDecomposition& d) {
  Json edges = Json::array();
  for (std::size_t e = 0; e < c.num_edges(); ++e) {
    edges.push_back(Json{{"id", c.edges()[e].id},
                         {"f", f.values(e)},
                         {"f_grad", d.gradient.values(e)},
                         {"f_curl", d.curl.values(e)},
                         {"h", d.harmonic.values(e)}});
  }
  Json phi = Json::object();
  for (std::size_t v = 0; v < c.num_nodes(); ++v) phi[c.nodes()[v].id] = d.phi.values(v);
  Json psi = Json::object();
  for (std::size_t k = 0; k < c.num_faces(); ++k) psi[c.faces()[k].id] = d.psi.values(k);
  return Json{{"metric", f.metric},
              {"edges", std::move(edges)},
              {"phi", std::move(phi)},
              {"psi", std::move(psi)},
              {"energies",
               {{"grad", d.energy_grad},
                {"curl", d.energy_curl},
                {"harm", d.energy_harm},
                {"total", d.energy_total}}},
              {"reconstruction_residual", d.reconstruction_residual}};
}

std::string decomposition_to_csv(const CellComplex& c, const EdgeFlow& f,
                                 const HodgeDecomposition& d) {
  std::string out = "edge,f,f_grad,f_curl,h\n";
  for (std::size_t e = 0; e < c.num_edges(); ++e) {
    const auto& id = c.edges()[e].id;
    if (id.find_first_of(",\"\n") != std::string::npos) {
      out += '"';
      for (char ch : id) {
        if (ch == '"') out += '"';
        out += ch;
      }
      out += '"';
    } else {
      out += id;
    }
    for (double v : {f.values(e), d.gradient.values(e), d.curl.values(e), d.harmonic.values(e)}) {
      out += ',';
      out += format_double(v);
    }
    out += '\n';
  }
  return out;
}

Json report_to_json(const DiagnosticReport& r) {
  Json tol{{"absolute_floor", r.betti.tol_used.absolute_floor()}};
  tol["relative_factor"] = r.betti.tol_used.relative_factor()
                               ? Json(*r.betti.tol_used.relative_factor())
                               : Json(nullptr);
  Json betti = betti_to_json(r.betti);
  betti["tolerance"] = std::move(tol);

  Json support = Json::array();
  for (const auto& s : r.harmonic_support) support.push_back(Json{{"edge", s.edge}, {"magnitude", s.magnitude}});

  return Json{{"window_index", r.window_index ? Json(*r.window_index) : Json(nullptr)},
              {"metric", r.metric},
              {"betti", std::move(betti)},
              {"energies",
               {{"grad", r.energies.grad},
                {"curl", r.energies.curl},
                {"harm", r.energies.harm},
                {"total", r.energies.total}}},
              {"harmonic_stress", r.harmonic_stress},
              {"support_fraction", r.support_fraction},
              {"harmonic_support", std::move(support)},
              {"spectral_gaps",
               {{"l0", number_or_null(r.spectral_gaps.l0)},
                {"l1", number_or_null(r.spectral_gaps.l1)},
                {"l2", number_or_null(r.spectral_gaps.l2)}}},
              {"classification_hints", r.classification_hints},
              {"isolated_nodes", r.isolated_nodes},
              {"notes", r.notes}};
}

std::string report_to_text(const DiagnosticReport& r) {
  std::ostringstream os;
  if (r.window_index) os << "window " << *r.window_index << "\n";
  if (!r.metric.empty()) os << "metric: " << r.metric << "\n";
  os << "betti: beta0=" << r.betti.beta0 << " beta1=" << r.betti.beta1
     << " beta2=" << r.betti.beta2 << "\n";
  os << "energy: grad=" << format_double(r.energies.grad)
     << " curl=" << format_double(r.energies.curl) << " harm=" << format_double(r.energies.harm)
     << " total=" << format_double(r.energies.total) << "\n";
  os << "harmonic stress: " << format_double(r.harmonic_stress) << "\n";
  os << "spectral gaps: L0=" << format_double(r.spectral_gaps.l0)
     << " L1=" << format_double(r.spectral_gaps.l1) << " L2=" << format_double(r.spectral_gaps.l2)
     << "\n";
  os << "harmonic support (> " << format_double(r.support_fraction) << " of max |h|):";
  if (r.harmonic_support.empty()) os << " none";
  os << "\n";
  for (const auto& s : r.harmonic_support) os << "  " << s.edge << "  " << format_double(s.magnitude) << "\n";
  if (!r.isolated_nodes.empty()) {
    os << "isolated nodes:";
    for (const auto& n : r.isolated_nodes) os << " " << n;
    os << "\n";
  }
  for (const auto& h : r.classification_hints) os << "hint: " << h << "\n";
  for (const auto& n : r.notes) os << "note: " << n << "\n";
  return os.str();
}

Json trend_to_json(const TrendSummary& t) {
  return Json{{"energy_grad", t.energy_grad}, {"energy_curl", t.energy_curl},
              {"energy_harm", t.energy_harm}, {"energy_total", t.energy_total},
              {"stress", t.stress},           {"structure_changes", t.structure_changes}};
}

std::string dump(const Json& doc) { return doc.dump(2) + "\n"; }

}  // namespace hodgefaas::io
