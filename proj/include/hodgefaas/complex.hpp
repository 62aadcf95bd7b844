#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>

namespace hodgefaas {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

struct NodeRecord {
  std::string id;
  std::string label;
};

/// A directed call, stored once in its canonical orientation tail -> head.
struct EdgeRecord {
  std::string id;
  std::string tail;
  std::string head;
  std::string label;
};

struct BoundaryTerm {
  std::string edge;
  int sign = 1;  // -1: traversed head -> tail
};

struct FaceRecord {
  std::string id;
  std::vector<BoundaryTerm> boundary;
  std::string label;
};

/// Parsed, not yet validated complex description. Declaration order of
/// each list defines matrix indices downstream.
struct ComplexDescription {
  std::vector<NodeRecord> nodes;
  std::vector<EdgeRecord> edges;
  std::vector<FaceRecord> faces;
};

struct ValidationReport {
  std::vector<std::string> errors;
  std::vector<std::string> warnings;

  bool ok() const { return errors.empty(); }
};

/// Runs every structural check on a description and collects all findings.
/// Includes the exact integer check B1 * B2 = 0.
ValidationReport validate_description(const ComplexDescription& desc);

/// Signed boundary of a face, resolved to edge indices.
struct FaceBoundary {
  std::vector<std::size_t> edges;
  std::vector<int> signs;
};

/// Oriented cellular complex: nodes (0-cells), directed edges (1-cells) and
/// faces (2-cells) glued along closed edge chains. Immutable once built.
class CellComplex {
 public:
  /// Validates and builds. Throws ValidationError listing every violation.
  static CellComplex build(ComplexDescription desc);

  std::size_t num_nodes() const { return desc_.nodes.size(); }
  std::size_t num_edges() const { return desc_.edges.size(); }
  std::size_t num_faces() const { return desc_.faces.size(); }

  const std::vector<NodeRecord>& nodes() const { return desc_.nodes; }
  const std::vector<EdgeRecord>& edges() const { return desc_.edges; }
  const std::vector<FaceRecord>& faces() const { return desc_.faces; }
  const ComplexDescription& description() const { return desc_; }

  std::size_t edge_tail(std::size_t e) const { return tails_[e]; }
  std::size_t edge_head(std::size_t e) const { return heads_[e]; }
  const FaceBoundary& face_boundary(std::size_t f) const { return boundaries_[f]; }

  std::optional<std::size_t> node_index(std::string_view id) const;
  std::optional<std::size_t> edge_index(std::string_view id) const;
  std::optional<std::size_t> face_index(std::string_view id) const;

  /// Warnings produced while building (e.g. non-simple face boundaries).
  const std::vector<std::string>& warnings() const { return warnings_; }

  /// Nodes with no incident edge, in declaration order.
  std::vector<std::size_t> isolated_nodes() const;

  /// Same complex with edge `e` stored in the opposite orientation. Face
  /// boundary signs for `e` are flipped so the faces stay the same cells.
  CellComplex with_reversed_edge(std::size_t e) const;

 private:
  CellComplex() = default;

  ComplexDescription desc_;
  std::vector<std::size_t> tails_;
  std::vector<std::size_t> heads_;
  std::vector<FaceBoundary> boundaries_;
  std::unordered_map<std::string, std::size_t> node_ix_;
  std::unordered_map<std::string, std::size_t> edge_ix_;
  std::unordered_map<std::string, std::size_t> face_ix_;
  std::vector<std::string> warnings_;
};

/// Signed incidence matrices with entries in {-1, 0, +1}.
struct IncidenceMatrices {
  Matrix b1;  // |K0| x |K1|
  Matrix b2;  // |K1| x |K2|
};

/// (B1)[v][e] = +1 if v is the head of e, -1 if v is the tail, else 0.
Matrix incidence_node_edge(const CellComplex& c);

/// (B2)[e][f] = sign of e in the boundary of f, 0 if e is not on it.
Matrix incidence_edge_face(const CellComplex& c);

IncidenceMatrices incidence(const CellComplex& c);

/// Hodge Laplacian of degree k in {0, 1, 2}:
///   L0 = B1 B1^T,  L1 = B1^T B1 + B2 B2^T,  L2 = B2^T B2.
/// Throws std::invalid_argument for any other k.
Matrix laplacian(const CellComplex& c, int degree);

}  // namespace hodgefaas
