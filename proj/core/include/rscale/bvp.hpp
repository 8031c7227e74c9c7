#pragma once

#include <Eigen/Dense>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "rscale/cylinder.hpp"
#include "rscale/lattice.hpp"

namespace rscale {

/// Model regular elliptic problem on the cylinder: interior operator
/// A = (c - Laplace)^q and boundary operators B_j = D_nu^{m_j} applied on both
/// boundary circles. The boundary orders are pairwise distinct and <= 2q - 1;
/// the default is the Dirichlet system m_j = j - 1.
struct BvpSpec {
  int q = 1;
  double c = 1.0;
  std::vector<int> boundary_orders = {0};

  static BvpSpec dirichlet(int q, double c = 1.0);

  void validate() const;
  int order() const { return 2 * q; }

  /// Parse "q=1;c=1;m=0" (m comma-separated).
  static BvpSpec parse(std::string_view text);
  std::string format() const;
};

/// Right-hand side tuple (f, g_1, ..., g_q).
struct DataTuple {
  CylinderElement f;
  std::vector<BoundaryElement> g;

  DataTuple(int truncation, int normal_size, int q)
      : f(truncation, normal_size), g(q, BoundaryElement(truncation)) {}
};

/// (A, B) u = (Au, B_1 u, ..., B_q u), assembled per tangential mode with the
/// exact differentiation matrices.
DataTuple apply_operator(const BvpSpec& spec, const CylinderElement& u, CylinderGeometry& geom);

/// Norm of a data tuple in H^{s-2q,phi,(0)}(Omega) x prod_j
/// H^{s-m_j-1/2,phi}(Gamma).
double data_norm(const DataTuple& data, const BvpSpec& spec, double s,
                 const FunctionParameter& phi, CylinderGeometry& geom);

struct GreenDefect {
  double defect = 0;  // |(Au,v) - (u,A+v) + i sum_k (D_nu^{k-1}u, A^{(k)}v)_Gamma|
  double scale = 0;   // magnitude of the largest participating term
  double relative() const { return scale > 0 ? defect / scale : defect; }
};

/// Green-formula defect for the self-adjoint model operator; the tangential
/// expressions A^{(k)} are assembled per mode from the binomial expansion of
/// (c + xi^2 + D_nu^2)^q.
GreenDefect green_defect(const BvpSpec& spec, const CylinderElement& u, const CylinderElement& v,
                         CylinderGeometry& geom);

/// Kernel bases of the problem and of the formally adjoint problem. For the
/// self-adjoint model the two coincide; they are computed independently from
/// the per-mode collocation systems.
struct KernelData {
  std::vector<CylinderElement> kernel;          // basis of N
  std::vector<CylinderElement> adjoint_kernel;  // basis of N+
  double max_residual = 0;                      // operator residual on the bases

  int dim() const { return static_cast<int>(kernel.size()); }
  int adjoint_dim() const { return static_cast<int>(adjoint_kernel.size()); }
};

KernelData compute_kernels(const BvpSpec& spec, int truncation, CylinderGeometry& geom);

/// Formally adjoint boundary data weight C_j^+ v on Gamma (q = 1 only):
/// for Dirichlet (m=0) C_1^+ = d/dnu, for m=1 C_1^+ = -i trace.
BoundaryElement apply_cplus(const BvpSpec& spec, int j, const CylinderElement& v,
                            CylinderGeometry& geom);

/// Solvability defect of the data against the adjoint kernel basis, one entry
/// per basis element: (f, v)_Omega + sum_j (g_j, C_j^+ v)_Gamma.
Eigen::VectorXcd solvability_defect(const BvpSpec& spec, const DataTuple& data,
                                    const KernelData& kernels, CylinderGeometry& geom);

struct SolveReport {
  bool data_projected = false;   // nonzero component along the defect subspace removed
  double defect_norm = 0;        // size of the removed component
  bool kernel_component_removed = false;
  double max_mode_residual = 0;  // worst per-mode linear-system residual
};

struct SolveResult {
  CylinderElement u;
  SolveReport report;
};

/// Per-mode dense collocation solve. When the adjoint kernel is nontrivial the
/// data is first projected onto the range (the removed component is reported);
/// when the kernel is nontrivial the representative with zero kernel component
/// is returned.
SolveResult solve(const BvpSpec& spec, const DataTuple& data, CylinderGeometry& geom,
                  const KernelData* kernels = nullptr);

/// Generalized solution vector (u_0, u_1, ..., u_{2q}).
struct RoitbergVector {
  CylinderElement u0;
  std::vector<BoundaryElement> traces;  // u_k = D_nu^{k-1} u | Gamma, k = 1..2q

  /// Product-space norm: (0)-branch norm of u0 plus the boundary norms at
  /// s - k + 1/2.
  double k_norm(double s, const FunctionParameter& phi, CylinderGeometry& geom) const;

  /// Largest relative compatibility violation of u_k against trace(u0, k) over
  /// the k with s > k - 1/2.
  double compatibility_defect(double s, CylinderGeometry& geom) const;
};

RoitbergVector roitberg_vector(const CylinderElement& u, int two_q, CylinderGeometry& geom);

struct RatioReport {
  double spectral_min = 0;  // deterministic per-mode extremes over the whole map
  double spectral_max = 0;
  double sample_min = 0;    // extremes over the random sample
  double sample_max = 0;
};

/// Extremes of |(A,B)u| / |u|_{K} with zero-kernel-component u: deterministic
/// per-mode generalized singular extremes plus a seeded random sample sweep.
RatioReport isomorphism_ratio(const BvpSpec& spec, double s, const FunctionParameter& phi,
                              int truncation, int sample, std::uint64_t seed,
                              CylinderGeometry& geom, const KernelData* kernels = nullptr);

struct AprioriReport {
  double c_empirical = 0;      // smallest c covering the sample
  double c_without_sigma = 0;  // same with the sigma term dropped (inf if unbounded)
  bool sigma_term_active = false;
};

AprioriReport apriori_check(const BvpSpec& spec, double s, const FunctionParameter& phi,
                            double sigma, int truncation, int sample, std::uint64_t seed,
                            CylinderGeometry& geom, const KernelData* kernels = nullptr);

/// Oblique projectors of Lemma-5.1 type: P onto the zero-kernel-component
/// subspace, Q+ onto the range along the defect subspace {(v,0,...,0)}.
/// The actions are built from the kernels and the L2 pairing only, so they do
/// not depend on (s, phi); the parameters are accepted to document that.
class Projectors {
 public:
  Projectors(const BvpSpec& spec, const KernelData& kernels, CylinderGeometry& geom);

  CylinderElement apply_p(const CylinderElement& u) const;
  DataTuple apply_qplus(const DataTuple& data) const;

  /// Dense action of P on stacked mode-major coefficients (small truncations).
  Eigen::MatrixXcd p_matrix(int truncation) const;

 private:
  const BvpSpec* spec_;
  const KernelData* kernels_;
  CylinderGeometry* geom_;
  Eigen::MatrixXcd kernel_gram_inv_;          // inverse Gram of N in L2(Omega)
  Eigen::MatrixXcd adjoint_gram_inv_;         // inverse Gram of N+ in L2(Omega)
};

Projectors projectors(const BvpSpec& spec, double s, const FunctionParameter& phi,
                      const KernelData& kernels, CylinderGeometry& geom);

/// Angular sector descriptor: U = {theta in (theta_min, theta_max)} x [0, 1].
struct SectorDescriptor {
  double theta_min = 0;
  double theta_max = 0;
  double width() const { return theta_max - theta_min; }
};

struct LocalReport {
  std::vector<int> truncations;
  std::vector<double> localized_norms;
  std::vector<double> global_norms;
  std::vector<double> commutator_ratios;
  double localized_spread = 0;  // max/min of localized norms
  double global_growth = 0;     // last/first of global norms
  double commutator_spread = 0;
};

/// Refinement sweep of Theorem-6.2 type: solve at each truncation, localize by
/// an interior smooth cutoff of the sector, and measure the cutoff norm at
/// s + eps against the global norm. The commutator (A,B)(chi u) - chi (A,B)u
/// is evaluated numerically and measured one order higher than the data.
LocalReport local_smoothness_experiment(
    const BvpSpec& spec, const std::function<DataTuple(int, CylinderGeometry&)>& data,
    const SectorDescriptor& sector, double s, double eps, const FunctionParameter& phi,
    std::span<const int> truncations, CylinderGeometry& geom);

struct ClassicalReport {
  HoermanderReport hoermander;
  std::vector<int> truncations;
  std::vector<double> data_phi_norms;    // largest refined data norm per truncation
  std::vector<double> data_sigma_norms;  // largest Sobolev-part data norm per truncation
  std::vector<double> sup_norms;         // derivatives to order m, up to the boundary
  std::vector<double> deriv_sup_norms;   // derivatives to order 2q, interior band
  bool data_norms_bounded = false;
  bool sup_bounded = false;        // sup_norms within a 10% band across the sweep
  bool deriv_sup_bounded = false;  // interior derivative sups within 2x
  bool classical_expected = false;
  double sup_growth = 0;  // last/first sup-norm across the sweep
};

/// Sufficient classical-solution criterion: refined data norms finite and
/// stable under refinement plus convergence of the embedding integral;
/// cross-checked against the sup-norms of the solution derivatives (order
/// <= 2q inside, <= max m_j up to the boundary).
ClassicalReport classical_criterion(const BvpSpec& spec,
                                    const std::function<DataTuple(int, CylinderGeometry&)>& data,
                                    double sigma, const FunctionParameter& phi,
                                    std::span<const int> truncations, CylinderGeometry& geom);

/// Random element with per-mode amplitude <xi>^{-decay} and Gaussian nodal
/// profiles; modes below the kernel are not excluded here.
CylinderElement random_element(int truncation, CylinderGeometry& geom, std::mt19937_64& rng,
                               double decay);

}  // namespace rscale
