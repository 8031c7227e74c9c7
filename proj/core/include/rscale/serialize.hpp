#pragma once

#include <iosfwd>
#include <string>

#include "rscale/boundary.hpp"
#include "rscale/bvp.hpp"
#include "rscale/cylinder.hpp"
#include "rscale/hilbert_pair.hpp"
#include "rscale/lattice.hpp"

namespace rscale {

/// Reproducible decimal formatting for report fields.
std::string format_double(double x);

/// Dense matrix, row-major decimal with a "matrix <rows> <cols>" header.
void write_matrix(std::ostream& out, const Eigen::MatrixXd& m);
Eigen::MatrixXd read_matrix(std::istream& in);

/// Hilbert pair as two stacked matrices under a "pair <dim>" header.
void write_pair(std::ostream& out, const HilbertPair& pair);
HilbertPair read_pair(std::istream& in);

/// Lattice element: "spectral d=<d> K=<K>" header, then one line per stored
/// mode: indices, real, imag.
void write_spectral(std::ostream& out, const SpectralElement& u);
SpectralElement read_spectral(std::istream& in, const FrequencyLattice& lattice);

/// Cylinder element: "cylinder K=<K> M=<M> basis=chebyshev-lobatto" header,
/// then lines "xi node re im".
void write_cylinder(std::ostream& out, const CylinderElement& u);
CylinderElement read_cylinder(std::istream& in);

/// Boundary element: "gamma K=<K>" header, then lines "circle xi re im".
void write_boundary(std::ostream& out, const BoundaryElement& g);
BoundaryElement read_boundary(std::istream& in);

/// Right-hand-side tuple: "data q=<q>" header followed by the interior
/// element and the q boundary components in the formats above.
void write_data_tuple(std::ostream& out, const DataTuple& data);
DataTuple read_data_tuple(std::istream& in);

}  // namespace rscale
