#pragma once

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ninf/discretization.hpp"
#include "ninf/operators.hpp"

namespace ninf {

class NegativeInput : public std::invalid_argument {
 public:
  explicit NegativeInput(std::vector<int> nodes);
  const std::vector<int>& nodes() const { return nodes_; }

 private:
  std::vector<int> nodes_;
};

/// w = -sqrt(u) together with the field it came from.
struct TransformedField {
  ScalarField w;
  ScalarField source;
};

/// Throws NegativeInput listing every node (boundary collar included) where u < 0.
TransformedField transform(const ScalarField& u);
/// w -> w^2.
ScalarField inverse_transform(const ScalarField& w);

struct WitnessPoint {
  int node;
  double lambda;
};

/// Convex-combination representation of the envelope at one inside node.
struct NodeWitness {
  int node;
  std::vector<WitnessPoint> points;  // at most dimension + 1, weights > 0 summing to 1
};

struct EnvelopeWitness {
  std::vector<NodeWitness> nodes;  // one per inside node, in grid order
};

struct Envelope {
  ScalarField values;  // w** on inside nodes, w elsewhere
  EnvelopeWitness witness;
};

/// Largest convex minorant of the lattice data {(x_i, w(x_i))} over the
/// closed domain (inside nodes plus lattice points on the boundary),
/// evaluated at every inside node. Nodes with w - w** <= contact_tol are
/// treated as contact points: their witness is the node itself.
Envelope convex_envelope(const ScalarField& w, double contact_tol = 0.0);

struct InteriorityReport {
  std::vector<bool> interior;      // per entry of EnvelopeWitness::nodes
  std::vector<int> touching_nodes; // nodes with a witness within h of the boundary
  bool all_interior() const { return touching_nodes.empty(); }
};

/// A witness point counts as interior when it is the node itself or sits
/// farther than h from the boundary.
InteriorityReport witness_interiority(const EnvelopeWitness& witness, const Grid& grid);

/// Sidecar: "# witness nx=.. ny=.." then, per inside node in row-major order,
/// "k ix_1 iy_1 lambda_1 ... ix_k iy_k lambda_k".
void write_witness(std::ostream& out, const EnvelopeWitness& witness, const Grid& grid);
void write_witness(const std::string& path, const EnvelopeWitness& witness, const Grid& grid);

/// Least-squares quadratic through the 3^Dim lattice neighbourhood of a node
/// (exact for quadratics). Empty when a neighbour is not an inside node.
template <int Dim>
std::optional<QuadraticProbe<double, Dim>> fit_quadratic(const ScalarField& field, int node);

struct ProbeScan {
  int checked = 0;
  int failed = 0;
  double min_F = 0.0;     // most negative F seen
  int worst_node = -1;
  int critical = 0;       // probes with vanishing gradient
};

/// Fits w at every inside node where u >= u_floor and the neighbourhood is
/// complete, and tests the restricted supersolution conditions with slack `tol`.
ProbeScan scan_restricted_super(const TransformedField& tf, double u_floor, double tol);

}  // namespace ninf
