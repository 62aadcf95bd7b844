#include "hodgefaas/complex.hpp"

#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "hodgefaas/error.hpp"

namespace hodgefaas {

namespace {

std::string quote(std::string_view s) { return "'" + std::string(s) + "'"; }

// Start and end node of an edge traversed with the given sign.
std::pair<std::string_view, std::string_view> oriented(const EdgeRecord& e, int sign) {
  if (sign > 0) return {e.tail, e.head};
  return {e.head, e.tail};
}

}  // namespace

ValidationReport validate_description(const ComplexDescription& desc) {
  ValidationReport rep;
  auto& err = rep.errors;

  std::unordered_map<std::string, std::size_t> node_ix;
  for (std::size_t i = 0; i < desc.nodes.size(); ++i) {
    const auto& id = desc.nodes[i].id;
    if (id.empty()) {
      err.push_back("node #" + std::to_string(i) + " has an empty id");
      continue;
    }
    if (!node_ix.emplace(id, i).second) err.push_back("duplicate node id " + quote(id));
  }

  std::unordered_map<std::string, std::size_t> edge_ix;
  std::set<std::pair<std::string, std::string>> endpoints;
  for (std::size_t i = 0; i < desc.edges.size(); ++i) {
    const auto& e = desc.edges[i];
    if (e.id.empty()) {
      err.push_back("edge #" + std::to_string(i) + " has an empty id");
      continue;
    }
    if (!edge_ix.emplace(e.id, i).second) err.push_back("duplicate edge id " + quote(e.id));
    bool dangling = false;
    for (const auto* end : {&e.tail, &e.head}) {
      if (!node_ix.count(*end)) {
        err.push_back("edge " + quote(e.id) + " references unknown node " + quote(*end));
        dangling = true;
      }
    }
    if (e.tail == e.head) {
      err.push_back("edge " + quote(e.id) + " is a self-loop on " + quote(e.tail));
    } else if (!dangling && !endpoints.emplace(e.tail, e.head).second) {
      err.push_back("edge " + quote(e.id) + " duplicates the relation " + quote(e.tail) +
                    " -> " + quote(e.head));
    }
  }

  std::set<std::string> face_ids;
  for (std::size_t fi = 0; fi < desc.faces.size(); ++fi) {
    const auto& f = desc.faces[fi];
    if (f.id.empty()) {
      err.push_back("face #" + std::to_string(fi) + " has an empty id");
      continue;
    }
    if (!face_ids.insert(f.id).second) err.push_back("duplicate face id " + quote(f.id));
    if (f.boundary.size() < 3) {
      err.push_back("face " + quote(f.id) + " has " + std::to_string(f.boundary.size()) +
                    " boundary edges; at least 3 are required");
    }

    bool resolvable = true;
    std::set<std::string> seen;
    for (const auto& t : f.boundary) {
      if (t.sign != 1 && t.sign != -1) {
        err.push_back("face " + quote(f.id) + " uses sign " + std::to_string(t.sign) +
                      " for edge " + quote(t.edge) + "; expected 1 or -1");
        resolvable = false;
      }
      auto it = edge_ix.find(t.edge);
      if (it == edge_ix.end()) {
        err.push_back("face " + quote(f.id) + " references unknown edge " + quote(t.edge));
        resolvable = false;
        continue;
      }
      const auto& e = desc.edges[it->second];
      if (!node_ix.count(e.tail) || !node_ix.count(e.head)) resolvable = false;
      if (!seen.insert(t.edge).second) {
        err.push_back("face " + quote(f.id) + " lists edge " + quote(t.edge) + " more than once");
        resolvable = false;
      }
    }
    if (!resolvable || f.boundary.empty()) continue;

    // Closed walk: each step must start where the previous one ended.
    bool closes = true;
    std::vector<std::string_view> visited;
    for (std::size_t k = 0; k < f.boundary.size(); ++k) {
      const auto& cur = f.boundary[k];
      const auto& nxt = f.boundary[(k + 1) % f.boundary.size()];
      auto [from, to] = oriented(desc.edges[edge_ix.at(cur.edge)], cur.sign);
      auto next_from = oriented(desc.edges[edge_ix.at(nxt.edge)], nxt.sign).first;
      visited.push_back(from);
      if (to != next_from) {
        closes = false;
        err.push_back("face " + quote(f.id) + " does not close: edge " + quote(cur.edge) +
                      " ends at " + quote(to) + " but edge " + quote(nxt.edge) + " starts at " +
                      quote(next_from));
        break;
      }
    }
    if (closes) {
      std::set<std::string_view> distinct(visited.begin(), visited.end());
      if (distinct.size() != visited.size()) {
        rep.warnings.push_back("face " + quote(f.id) + " visits a node more than once");
      }
    }

    // Exact integer boundary-of-boundary check, per node.
    std::map<std::string_view, int> net;
    std::map<std::string_view, std::vector<std::string_view>> touching;
    for (const auto& t : f.boundary) {
      const auto& e = desc.edges[edge_ix.at(t.edge)];
      net[e.head] += t.sign;
      net[e.tail] -= t.sign;
      touching[e.head].push_back(t.edge);
      touching[e.tail].push_back(t.edge);
    }
    for (const auto& [node, value] : net) {
      if (value == 0) continue;
      std::ostringstream os;
      os << "B1*B2 is nonzero (" << value << ") at node " << quote(node) << " for face "
         << quote(f.id) << "; check the signs of edges";
      for (auto e : touching[node]) os << " " << quote(e);
      err.push_back(os.str());
    }
  }
  return rep;
}

CellComplex CellComplex::build(ComplexDescription desc) {
  auto rep = validate_description(desc);
  if (!rep.ok()) throw ValidationError(std::move(rep.errors));

  CellComplex c;
  c.warnings_ = std::move(rep.warnings);
  c.desc_ = std::move(desc);
  for (std::size_t i = 0; i < c.desc_.nodes.size(); ++i) c.node_ix_.emplace(c.desc_.nodes[i].id, i);
  for (std::size_t i = 0; i < c.desc_.edges.size(); ++i) {
    const auto& e = c.desc_.edges[i];
    c.edge_ix_.emplace(e.id, i);
    c.tails_.push_back(c.node_ix_.at(e.tail));
    c.heads_.push_back(c.node_ix_.at(e.head));
  }
  for (std::size_t i = 0; i < c.desc_.faces.size(); ++i) {
    const auto& f = c.desc_.faces[i];
    c.face_ix_.emplace(f.id, i);
    FaceBoundary b;
    for (const auto& t : f.boundary) {
      b.edges.push_back(c.edge_ix_.at(t.edge));
      b.signs.push_back(t.sign);
    }
    c.boundaries_.push_back(std::move(b));
  }
  return c;
}

std::optional<std::size_t> CellComplex::node_index(std::string_view id) const {
  auto it = node_ix_.find(std::string(id));
  if (it == node_ix_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::size_t> CellComplex::edge_index(std::string_view id) const {
  auto it = edge_ix_.find(std::string(id));
  if (it == edge_ix_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::size_t> CellComplex::face_index(std::string_view id) const {
  auto it = face_ix_.find(std::string(id));
  if (it == face_ix_.end()) return std::nullopt;
  return it->second;
}

std::vector<std::size_t> CellComplex::isolated_nodes() const {
  std::vector<bool> touched(num_nodes(), false);
  for (std::size_t e = 0; e < num_edges(); ++e) touched[tails_[e]] = touched[heads_[e]] = true;
  std::vector<std::size_t> out;
  for (std::size_t v = 0; v < num_nodes(); ++v)
    if (!touched[v]) out.push_back(v);
  return out;
}

CellComplex CellComplex::with_reversed_edge(std::size_t e) const {
  if (e >= num_edges()) throw std::out_of_range("edge index out of range");
  ComplexDescription d = desc_;
  std::swap(d.edges[e].tail, d.edges[e].head);
  for (auto& f : d.faces)
    for (auto& t : f.boundary)
      if (t.edge == d.edges[e].id) t.sign = -t.sign;
  return build(std::move(d));
}

Matrix incidence_node_edge(const CellComplex& c) {
  Matrix b1 = Matrix::Zero(c.num_nodes(), c.num_edges());
  for (std::size_t e = 0; e < c.num_edges(); ++e) {
    b1(c.edge_tail(e), e) = -1.0;
    b1(c.edge_head(e), e) = 1.0;
  }
  return b1;
}

Matrix incidence_edge_face(const CellComplex& c) {
  Matrix b2 = Matrix::Zero(c.num_edges(), c.num_faces());
  for (std::size_t f = 0; f < c.num_faces(); ++f) {
    const auto& b = c.face_boundary(f);
    for (std::size_t k = 0; k < b.edges.size(); ++k) b2(b.edges[k], f) = b.signs[k];
  }
  return b2;
}

IncidenceMatrices incidence(const CellComplex& c) {
  return {incidence_node_edge(c), incidence_edge_face(c)};
}

Matrix laplacian(const CellComplex& c, int degree) {
  switch (degree) {
    case 0: {
      Matrix b1 = incidence_node_edge(c);
      return b1 * b1.transpose();
    }
    case 1: {
      Matrix b1 = incidence_node_edge(c);
      Matrix b2 = incidence_edge_face(c);
      return b1.transpose() * b1 + b2 * b2.transpose();
    }
    case 2: {
      Matrix b2 = incidence_edge_face(c);
      return b2.transpose() * b2;
    }
    default:
      throw std::invalid_argument("Laplacian degree must be 0, 1 or 2, got " +
                                  std::to_string(degree));
  }
}

}  // namespace hodgefaas
