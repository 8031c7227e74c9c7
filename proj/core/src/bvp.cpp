#include "rscale/bvp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>
#include <stdexcept>

namespace rscale {

namespace {

using Complex = std::complex<double>;

Complex nu_phase(int circle, int order) {
  // D_nu = i d/dnu, inward normal +t at t=0 and -t at t=1.
  const Complex base = circle == 0 ? Complex(0, 1) : Complex(0, -1);
  return std::pow(base, order);
}

double binom(int n, int k) {
  double r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// ((c + xi^2) I - D^2)^q acting on nodal profiles.
Eigen::MatrixXd interior_operator(const BvpSpec& spec, double xi2, const NormalBasis& basis) {
  const int m = basis.size();
  Eigen::MatrixXd p =
      (spec.c + xi2) * Eigen::MatrixXd::Identity(m, m) - basis.diff_power(2);
  Eigen::MatrixXd result = p;
  for (int i = 1; i < spec.q; ++i) result = p * result;
  return result;
}

// Square collocation matrix of the two-point problem for one mode: boundary
// operator rows at the q nodes nearest each endpoint, interior operator rows
// elsewhere.
Eigen::MatrixXcd collocation_matrix(const BvpSpec& spec, double xi2, const NormalBasis& basis) {
  const int m = basis.size();
  const int q = spec.q;
  Eigen::MatrixXcd l = interior_operator(spec, xi2, basis).cast<Complex>();
  for (int j = 0; j < q; ++j) {
    const int mj = spec.boundary_orders[j];
    l.row(j) = (nu_phase(0, mj) * basis.endpoint_derivative_row(0, mj).cast<Complex>());
    l.row(m - 1 - j) = (nu_phase(1, mj) * basis.endpoint_derivative_row(1, mj).cast<Complex>());
  }
  return l;
}

Eigen::VectorXcd collocation_rhs(const BvpSpec& spec, const Eigen::VectorXcd& f_mode,
                                 const std::vector<BoundaryElement>& g, int xi, int m) {
  Eigen::VectorXcd b = f_mode;
  for (int j = 0; j < spec.q; ++j) {
    b[j] = g[j].at(0, xi);
    b[m - 1 - j] = g[j].at(1, xi);
  }
  return b;
}

}  // namespace

BvpSpec BvpSpec::dirichlet(int q, double c) {
  BvpSpec spec;
  spec.q = q;
  spec.c = c;
  spec.boundary_orders.resize(q);
  for (int j = 0; j < q; ++j) spec.boundary_orders[j] = j;
  spec.validate();
  return spec;
}

void BvpSpec::validate() const {
  if (q < 1) throw std::invalid_argument("BvpSpec: q must be >= 1");
  if (static_cast<int>(boundary_orders.size()) != q)
    throw std::invalid_argument("BvpSpec: need exactly q boundary operators");
  std::set<int> seen;
  for (int mj : boundary_orders) {
    if (mj < 0 || mj > 2 * q - 1)
      throw std::invalid_argument("BvpSpec: boundary order outside [0, 2q-1]");
    if (!seen.insert(mj).second)
      throw std::invalid_argument("BvpSpec: boundary orders must be pairwise distinct");
  }
  if (!std::isfinite(c)) throw std::invalid_argument("BvpSpec: c must be finite");
}

BvpSpec BvpSpec::parse(std::string_view text) {
  BvpSpec spec;
  spec.boundary_orders.clear();
  bool saw_m = false;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t semi = text.find(';', pos);
    if (semi == std::string_view::npos) semi = text.size();
    const std::string_view field = text.substr(pos, semi - pos);
    pos = semi + 1;
    if (field.empty()) continue;
    const std::size_t eq = field.find('=');
    if (eq == std::string_view::npos)
      throw std::invalid_argument("BvpSpec::parse: bad field '" + std::string(field) + "'");
    const std::string_view key = field.substr(0, eq);
    const std::string value(field.substr(eq + 1));
    if (key == "q") {
      spec.q = std::stoi(value);
    } else if (key == "c") {
      spec.c = std::stod(value);
    } else if (key == "m") {
      saw_m = true;
      std::size_t p = 0;
      while (p < value.size()) {
        std::size_t comma = value.find(',', p);
        if (comma == std::string::npos) comma = value.size();
        spec.boundary_orders.push_back(std::stoi(value.substr(p, comma - p)));
        p = comma + 1;
      }
    } else {
      throw std::invalid_argument("BvpSpec::parse: unknown key '" + std::string(key) + "'");
    }
  }
  if (!saw_m) {
    spec.boundary_orders.resize(spec.q);
    for (int j = 0; j < spec.q; ++j) spec.boundary_orders[j] = j;
  }
  spec.validate();
  return spec;
}

std::string BvpSpec::format() const {
  std::ostringstream out;
  out.precision(17);
  out << "q=" << q << ";c=" << c << ";m=";
  for (std::size_t j = 0; j < boundary_orders.size(); ++j) {
    if (j) out << ",";
    out << boundary_orders[j];
  }
  return out.str();
}

DataTuple apply_operator(const BvpSpec& spec, const CylinderElement& u, CylinderGeometry& geom) {
  spec.validate();
  const int K = u.truncation();
  DataTuple data(K, u.normal_size(), spec.q);
  for (int xi = -K; xi <= K; ++xi) {
    const double xi2 = static_cast<double>(xi) * xi;
    data.f.mode(xi) = interior_operator(spec, xi2, geom.basis()) * u.mode(xi);
  }
  for (int j = 0; j < spec.q; ++j) data.g[j] = trace(u, spec.boundary_orders[j] + 1, geom);
  return data;
}

double data_norm(const DataTuple& data, const BvpSpec& spec, double s,
                 const FunctionParameter& phi, CylinderGeometry& geom) {
  const SpaceIndex f_idx{s - 2 * spec.q, phi, Domain::Omega, 0};
  double acc = std::pow(norm_zero_branch(data.f, f_idx, geom), 2);
  for (int j = 0; j < spec.q; ++j) {
    const SpaceIndex g_idx{s - spec.boundary_orders[j] - 0.5, phi, Domain::Gamma, 0};
    acc += std::pow(norm_gamma(data.g[j], g_idx), 2);
  }
  return std::sqrt(acc);
}

GreenDefect green_defect(const BvpSpec& spec, const CylinderElement& u, const CylinderElement& v,
                         CylinderGeometry& geom) {
  spec.validate();
  if (u.truncation() != v.truncation() || u.normal_size() != v.normal_size())
    throw std::invalid_argument("green_defect: shape mismatch");
  const int K = u.truncation();
  const int q = spec.q;
  const Eigen::MatrixXd& w = geom.basis().mass();

  Complex a_u_v = 0;   // (Au, v)
  Complex u_a_v = 0;   // (u, A+ v), A+ = A for the model
  Complex gamma_sum = 0;
  for (int xi = -K; xi <= K; ++xi) {
    const double xi2 = static_cast<double>(xi) * xi;
    const Eigen::MatrixXd op = interior_operator(spec, xi2, geom.basis());
    const Eigen::VectorXcd uu = u.mode(xi);
    const Eigen::VectorXcd vv = v.mode(xi);
    a_u_v += vv.dot(w * (op * uu));
    u_a_v += (op * vv).dot(w * uu);

    // Binomial coefficients of A = sum_r a_r(xi) D_nu^r, even r only.
    std::vector<double> a_r(2 * q + 1, 0.0);
    for (int i = 0; i <= q; ++i) a_r[2 * i] = binom(q, i) * std::pow(spec.c + xi2, q - i);

    for (int k = 1; k <= 2 * q; ++k) {
      for (int circle = 0; circle < 2; ++circle) {
        const Complex du =
            nu_phase(circle, k - 1) *
            (geom.basis().endpoint_derivative_row(circle, k - 1).cast<Complex>() * uu)(0);
        Complex av = 0;  // A^{(k)} v at this circle
        for (int r = k; r <= 2 * q; ++r) {
          if (a_r[r] == 0.0) continue;
          av += a_r[r] * nu_phase(circle, r - k) *
                (geom.basis().endpoint_derivative_row(circle, r - k).cast<Complex>() * vv)(0);
        }
        gamma_sum += du * std::conj(av);
      }
    }
  }
  GreenDefect d;
  d.defect = std::abs(a_u_v - u_a_v + Complex(0, 1) * gamma_sum);
  d.scale = std::max({std::abs(a_u_v), std::abs(u_a_v), std::abs(gamma_sum)});
  return d;
}

KernelData compute_kernels(const BvpSpec& spec, int truncation, CylinderGeometry& geom) {
  spec.validate();
  const int m = geom.normal_size();
  KernelData out;

  const auto null_profiles = [&](bool adjoint, int abs_xi) {
    Eigen::MatrixXcd l = collocation_matrix(spec, static_cast<double>(abs_xi) * abs_xi,
                                            geom.basis());
    if (adjoint && spec.q == 1) {
      // Formally adjoint boundary operator for q = 1: trace for the Dirichlet
      // problem, i D_nu for the first-order problem.
      const int mj = spec.boundary_orders[0];
      if (mj == 0) {
        l.row(0) = geom.basis().endpoint_derivative_row(0, 0).cast<Complex>();
        l.row(m - 1) = geom.basis().endpoint_derivative_row(1, 0).cast<Complex>();
      } else {
        l.row(0) = Complex(0, 1) * nu_phase(0, 1) *
                   geom.basis().endpoint_derivative_row(0, 1).cast<Complex>();
        l.row(m - 1) = Complex(0, 1) * nu_phase(1, 1) *
                       geom.basis().endpoint_derivative_row(1, 1).cast<Complex>();
      }
    }
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(l, Eigen::ComputeFullV);
    const Eigen::VectorXd sigma = svd.singularValues();
    std::vector<Eigen::VectorXcd> profiles;
    for (Eigen::Index i = 0; i < sigma.size(); ++i)
      if (sigma[i] < 1e-10 * sigma[0]) profiles.push_back(svd.matrixV().col(i));
    return profiles;
  };

  for (int abs_xi = 0; abs_xi <= truncation; ++abs_xi) {
    for (bool adjoint : {false, true}) {
      if (adjoint && spec.q != 1) break;  // self-adjoint model: N+ = N for q >= 2
      auto& target = adjoint ? out.adjoint_kernel : out.kernel;
      for (const Eigen::VectorXcd& profile : null_profiles(adjoint, abs_xi)) {
        for (int sign : {1, -1}) {
          if (abs_xi == 0 && sign < 0) continue;
          CylinderElement n(truncation, m);
          n.mode(sign * abs_xi) = profile;
          target.push_back(std::move(n));
        }
      }
    }
  }
  if (spec.q != 1) out.adjoint_kernel = out.kernel;

  for (const CylinderElement& n : out.kernel) {
    const DataTuple an = apply_operator(spec, n, geom);
    double res = norm_l2(an.f, geom);
    for (const BoundaryElement& g : an.g)
      res = std::max(res, norm_gamma(g, SpaceIndex{0, FunctionParameter::one(), Domain::Gamma, 0}));
    out.max_residual = std::max(out.max_residual, res / std::max(norm_l2(n, geom), 1e-300));
  }
  return out;
}

BoundaryElement apply_cplus(const BvpSpec& spec, int j, const CylinderElement& v,
                            CylinderGeometry& geom) {
  spec.validate();
  if (spec.q != 1 || j != 0)
    throw std::invalid_argument("apply_cplus: adjoint boundary system implemented for q = 1 only");
  const int K = v.truncation();
  BoundaryElement out(K);
  const int mj = spec.boundary_orders[0];
  if (mj == 0) {
    // C_1^+ = d/dnu: +d/dt at t=0, -d/dt at t=1.
    const Eigen::RowVectorXd d0 = geom.basis().endpoint_derivative_row(0, 1);
    const Eigen::RowVectorXd d1 = geom.basis().endpoint_derivative_row(1, 1);
    for (int xi = -K; xi <= K; ++xi) {
      out.at(0, xi) = (d0.cast<Complex>() * v.mode(xi))(0);
      out.at(1, xi) = -(d1.cast<Complex>() * v.mode(xi))(0);
    }
  } else {
    // C_1^+ = -i trace.
    const Eigen::RowVectorXd e0 = geom.basis().endpoint_derivative_row(0, 0);
    const Eigen::RowVectorXd e1 = geom.basis().endpoint_derivative_row(1, 0);
    for (int xi = -K; xi <= K; ++xi) {
      out.at(0, xi) = Complex(0, -1) * (e0.cast<Complex>() * v.mode(xi))(0);
      out.at(1, xi) = Complex(0, -1) * (e1.cast<Complex>() * v.mode(xi))(0);
    }
  }
  return out;
}

Eigen::VectorXcd solvability_defect(const BvpSpec& spec, const DataTuple& data,
                                    const KernelData& kernels, CylinderGeometry& geom) {
  const int n_plus = kernels.adjoint_dim();
  Eigen::VectorXcd defect(n_plus);
  if (n_plus == 0) return defect;
  if (spec.q != 1)
    throw std::runtime_error(
        "solvability_defect: nontrivial adjoint kernel supported for q = 1 only");
  for (int i = 0; i < n_plus; ++i) {
    const CylinderElement& v = kernels.adjoint_kernel[i];
    Complex d = pairing_omega(data.f, v, geom);
    const BoundaryElement cv = apply_cplus(spec, 0, v, geom);
    d += pairing_gamma(data.g[0], cv);
    defect[i] = d;
  }
  return defect;
}

SolveResult solve(const BvpSpec& spec, const DataTuple& data, CylinderGeometry& geom,
                  const KernelData* kernels) {
  spec.validate();
  const int K = data.f.truncation();
  const int m = data.f.normal_size();
  if (static_cast<int>(data.g.size()) != spec.q)
    throw std::invalid_argument("solve: data carries wrong number of boundary components");

  KernelData local_kernels;
  const KernelData* kern = kernels;
  if (kern && kern->dim() > 0 && kern->kernel.front().truncation() != K)
    throw std::invalid_argument("solve: kernel basis truncation mismatch");

  SolveResult result{CylinderElement(K, m), SolveReport{}};
  DataTuple rhs = data;

  const auto ensure_kernels = [&]() {
    // (c - Laplace)^q with c > 0 and a normal boundary system is positive on
    // the model, so the kernel machinery is skipped unless supplied.
    if (!kern && !(spec.c > 0)) {
      local_kernels = compute_kernels(spec, K, geom);
      kern = &local_kernels;
    }
  };

  // Range projection against the adjoint kernel.
  {
    ensure_kernels();
    if (kern && kern->adjoint_dim() > 0) {
      const Eigen::VectorXcd defect = solvability_defect(spec, rhs, *kern, geom);
      const int n_plus = kern->adjoint_dim();
      Eigen::MatrixXcd gram(n_plus, n_plus);
      for (int i = 0; i < n_plus; ++i)
        for (int j = 0; j < n_plus; ++j)
          gram(i, j) = pairing_omega(kern->adjoint_kernel[j], kern->adjoint_kernel[i], geom);
      const Eigen::VectorXcd coeff = gram.fullPivLu().solve(defect);
      double removed = 0;
      for (int i = 0; i < n_plus; ++i) {
        CylinderElement scaled = kern->adjoint_kernel[i];
        scaled *= coeff[i];
        rhs.f -= scaled;
        removed += std::norm(coeff[i]);
      }
      result.report.defect_norm = defect.norm();
      result.report.data_projected = removed > 0 && defect.norm() > 0;
    }
  }

  for (int xi = -K; xi <= K; ++xi) {
    const double xi2 = static_cast<double>(xi) * xi;
    const Eigen::MatrixXcd l = collocation_matrix(spec, xi2, geom.basis());
    const Eigen::VectorXcd b = collocation_rhs(spec, rhs.f.mode(xi), rhs.g, xi, m);

    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(l, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::VectorXd sigma = svd.singularValues();
    const double cut = 1e-10 * sigma[0];
    const bool singular = sigma.minCoeff() < cut;
    if (singular) {
      ensure_kernels();
      bool expected = false;
      if (kern)
        for (const CylinderElement& n : kern->kernel)
          if (!n.mode(xi).isZero(0)) expected = true;
      if (!expected)
        throw std::runtime_error("solve: mode " + std::to_string(xi) +
                                 " singular beyond kernel accounting");
    }
    // Minimum-norm least-squares solution through the truncated pseudoinverse.
    Eigen::VectorXcd z = svd.matrixU().adjoint() * b;
    for (Eigen::Index i = 0; i < sigma.size(); ++i)
      z[i] = sigma[i] < cut ? Complex(0) : z[i] / sigma[i];
    const Eigen::VectorXcd x = svd.matrixV() * z;
    result.u.mode(xi) = x;
    const double scale = std::max(b.norm(), 1e-300);
    result.report.max_mode_residual =
        std::max(result.report.max_mode_residual, (l * x - b).norm() / scale);
  }

  // Zero-kernel-component representative.
  if (kern && kern->dim() > 0) {
    const int n = kern->dim();
    Eigen::MatrixXcd gram(n, n);
    Eigen::VectorXcd b(n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j)
        gram(i, j) = pairing_omega(kern->kernel[j], kern->kernel[i], geom);
      b[i] = pairing_omega(result.u, kern->kernel[i], geom);
    }
    const Eigen::VectorXcd coeff = gram.fullPivLu().solve(b);
    for (int i = 0; i < n; ++i) {
      CylinderElement scaled = kern->kernel[i];
      scaled *= coeff[i];
      result.u -= scaled;
    }
    result.report.kernel_component_removed = coeff.norm() > 0;
  }
  return result;
}

RoitbergVector roitberg_vector(const CylinderElement& u, int two_q, CylinderGeometry& geom) {
  if (two_q < 1) throw std::invalid_argument("roitberg_vector: order must be >= 1");
  RoitbergVector v{u, {}};
  v.traces.reserve(two_q);
  for (int k = 1; k <= two_q; ++k) v.traces.push_back(trace(u, k, geom));
  return v;
}

double RoitbergVector::k_norm(double s, const FunctionParameter& phi,
                              CylinderGeometry& geom) const {
  double acc = std::pow(norm_zero_branch(u0, SpaceIndex{s, phi, Domain::Omega, 0}, geom), 2);
  for (std::size_t k = 1; k <= traces.size(); ++k) {
    const SpaceIndex idx{s - static_cast<double>(k) + 0.5, phi, Domain::Gamma, 0};
    acc += std::pow(norm_gamma(traces[k - 1], idx), 2);
  }
  return std::sqrt(acc);
}

double RoitbergVector::compatibility_defect(double s, CylinderGeometry& geom) const {
  double worst = 0;
  const SpaceIndex l2{0, FunctionParameter::one(), Domain::Gamma, 0};
  for (std::size_t k = 1; k <= traces.size(); ++k) {
    if (!(s > static_cast<double>(k) - 0.5)) continue;
    BoundaryElement diff = trace(u0, static_cast<int>(k), geom);
    diff *= -1.0;
    diff += traces[k - 1];
    const double denom = std::max(norm_gamma(traces[k - 1], l2), 1e-14);
    worst = std::max(worst, norm_gamma(diff, l2) / denom);
  }
  return worst;
}

CylinderElement random_element(int truncation, CylinderGeometry& geom, std::mt19937_64& rng,
                               double decay) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  CylinderElement u(truncation, geom.normal_size());
  for (int xi = -truncation; xi <= truncation; ++xi) {
    const double scale =
        std::pow(1.0 + static_cast<double>(xi) * xi, -0.5 * decay);
    for (int j = 0; j < geom.normal_size(); ++j)
      u.mode(xi)[j] = scale * Complex(gauss(rng), gauss(rng));
  }
  return u;
}

namespace {

// Per-mode data form: profile -> |(A,B) restricted to the mode|^2, a real
// symmetric matrix (the D_nu phases cancel inside the trace quadratics).
Eigen::MatrixXd mode_data_form(const BvpSpec& spec, int abs_xi, double s,
                               const FunctionParameter& phi, CylinderGeometry& geom) {
  const double xi2 = static_cast<double>(abs_xi) * abs_xi;
  const Eigen::MatrixXd op = interior_operator(spec, xi2, geom.basis());
  const Eigen::MatrixXd& g0 = geom.zero_branch_gram(abs_xi, s - 2 * spec.q, phi);
  Eigen::MatrixXd form = op.transpose() * g0 * op;
  const double h = std::sqrt(1.0 + xi2);
  for (int j = 0; j < spec.q; ++j) {
    const int mj = spec.boundary_orders[j];
    const double w = space_weight(s - mj - 0.5, phi, h);
    for (int circle = 0; circle < 2; ++circle) {
      const Eigen::RowVectorXd row = geom.basis().endpoint_derivative_row(circle, mj);
      form += w * (row.transpose() * row);
    }
  }
  return 0.5 * (form + form.transpose()).eval();
}

const Eigen::MatrixXd& mode_solution_gram(int abs_xi, double s, const FunctionParameter& phi,
                                          int two_q, CylinderGeometry& geom) {
  const SpaceIndex idx{s, phi, Domain::Omega, two_q};
  if (idx.is_critical()) return geom.critical_gram(abs_xi, s, phi, two_q, 0.5);
  return geom.modified_gram(abs_xi, s, phi, two_q);
}

double solution_norm(const CylinderElement& u, double s, const FunctionParameter& phi, int two_q,
                     CylinderGeometry& geom) {
  const SpaceIndex idx{s, phi, Domain::Omega, two_q};
  if (idx.is_critical()) return interp_modified(u, s, phi, two_q, 0.5, geom);
  return norm_modified(u, idx, geom);
}

CylinderElement project_out_kernel(const CylinderElement& u, const KernelData& kernels,
                                   CylinderGeometry& geom) {
  if (kernels.dim() == 0) return u;
  const int n = kernels.dim();
  Eigen::MatrixXcd gram(n, n);
  Eigen::VectorXcd b(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j)
      gram(i, j) = pairing_omega(kernels.kernel[j], kernels.kernel[i], geom);
    b[i] = pairing_omega(u, kernels.kernel[i], geom);
  }
  const Eigen::VectorXcd coeff = gram.fullPivLu().solve(b);
  CylinderElement out = u;
  for (int i = 0; i < n; ++i) {
    CylinderElement scaled = kernels.kernel[i];
    scaled *= coeff[i];
    out -= scaled;
  }
  return out;
}

}  // namespace

RatioReport isomorphism_ratio(const BvpSpec& spec, double s, const FunctionParameter& phi,
                              int truncation, int sample, std::uint64_t seed,
                              CylinderGeometry& geom, const KernelData* kernels) {
  spec.validate();
  KernelData local;
  if (!kernels) {
    if (!(spec.c > 0)) local = compute_kernels(spec, truncation, geom);
    kernels = &local;
  }

  RatioReport rep;
  rep.spectral_min = std::numeric_limits<double>::infinity();
  rep.spectral_max = 0;

  for (int abs_xi = 0; abs_xi <= truncation; ++abs_xi) {
    const Eigen::MatrixXd data_form = mode_data_form(spec, abs_xi, s, phi, geom);
    const Eigen::MatrixXd& sol_gram = mode_solution_gram(abs_xi, s, phi, 2 * spec.q, geom);

    // Deflate kernel profiles of this mode.
    std::vector<Eigen::VectorXcd> null_profiles;
    for (const CylinderElement& n : kernels->kernel)
      if (!n.mode(abs_xi).isZero(0)) null_profiles.push_back(n.mode(abs_xi));

    Eigen::MatrixXd df = data_form;
    Eigen::MatrixXd sg = sol_gram;
    if (!null_profiles.empty()) {
      // Real orthonormal complement of the kernel profiles (model kernels have
      // constant phase per mode, so the real span is two columns at most).
      Eigen::MatrixXd dirs(geom.normal_size(), 2 * null_profiles.size());
      for (std::size_t i = 0; i < null_profiles.size(); ++i) {
        dirs.col(2 * i) = null_profiles[i].real();
        dirs.col(2 * i + 1) = null_profiles[i].imag();
      }
      Eigen::FullPivHouseholderQR<Eigen::MatrixXd> qr(dirs);
      const int rank = static_cast<int>(qr.rank());
      const Eigen::MatrixXd qfull = qr.matrixQ();
      const Eigen::MatrixXd complement = qfull.rightCols(geom.normal_size() - rank);
      df = complement.transpose() * data_form * complement;
      sg = complement.transpose() * sol_gram * complement;
    }
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> ges(df, sg,
                                                                  Eigen::EigenvaluesOnly);
    if (ges.info() != Eigen::Success)
      throw std::runtime_error("isomorphism_ratio: eigensolver failure");
    rep.spectral_min = std::min(rep.spectral_min, std::sqrt(std::max(0.0, ges.eigenvalues().minCoeff())));
    rep.spectral_max = std::max(rep.spectral_max, std::sqrt(ges.eigenvalues().maxCoeff()));
  }

  rep.sample_min = std::numeric_limits<double>::infinity();
  rep.sample_max = 0;
  std::mt19937_64 rng(seed);
  for (int i = 0; i < sample; ++i) {
    CylinderElement u = random_element(truncation, geom, rng, std::max(s, 1.0) + 1.0);
    u = project_out_kernel(u, *kernels, geom);
    const double denom = solution_norm(u, s, phi, 2 * spec.q, geom);
    if (denom < 1e-12) continue;
    const double num = data_norm(apply_operator(spec, u, geom), spec, s, phi, geom);
    const double ratio = num / denom;
    rep.sample_min = std::min(rep.sample_min, ratio);
    rep.sample_max = std::max(rep.sample_max, ratio);
  }
  return rep;
}

AprioriReport apriori_check(const BvpSpec& spec, double s, const FunctionParameter& phi,
                            double sigma, int truncation, int sample, std::uint64_t seed,
                            CylinderGeometry& geom, const KernelData* kernels) {
  spec.validate();
  if (!(sigma < s)) throw std::invalid_argument("apriori_check: sigma must be < s");
  KernelData local;
  if (!kernels) {
    if (!(spec.c > 0)) local = compute_kernels(spec, truncation, geom);
    kernels = &local;
  }
  const FunctionParameter one = FunctionParameter::one();

  AprioriReport rep;
  std::mt19937_64 rng(seed);
  std::vector<CylinderElement> pool;
  for (int i = 0; i < sample; ++i)
    pool.push_back(random_element(truncation, geom, rng, std::max(s, 1.0) + 1.0));
  for (const CylinderElement& n : kernels->kernel) pool.push_back(n);

  for (const CylinderElement& u : pool) {
    const double lhs = solution_norm(u, s, phi, 2 * spec.q, geom);
    if (lhs < 1e-12) continue;
    const double dterm = data_norm(apply_operator(spec, u, geom), spec, s, phi, geom);
    const double sterm = solution_norm(u, sigma, one, 2 * spec.q, geom);
    rep.c_empirical = std::max(rep.c_empirical, lhs / (dterm + sterm));
    // Kernel-quality elements (data term at the numerical-kernel floor) are
    // the ones the sigma term must carry.
    if (dterm > 1e-8 * lhs) {
      rep.c_without_sigma = std::max(rep.c_without_sigma, lhs / dterm);
    } else {
      rep.c_without_sigma = std::numeric_limits<double>::infinity();
      rep.sigma_term_active = true;
    }
  }
  return rep;
}

Projectors::Projectors(const BvpSpec& spec, const KernelData& kernels, CylinderGeometry& geom)
    : spec_(&spec), kernels_(&kernels), geom_(&geom) {
  const auto inverse_gram = [&](const std::vector<CylinderElement>& basis) {
    const int n = static_cast<int>(basis.size());
    Eigen::MatrixXcd gram(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) gram(i, j) = pairing_omega(basis[j], basis[i], geom);
    return n ? Eigen::MatrixXcd(gram.fullPivLu().inverse()) : gram;
  };
  kernel_gram_inv_ = inverse_gram(kernels.kernel);
  adjoint_gram_inv_ = inverse_gram(kernels.adjoint_kernel);
}

CylinderElement Projectors::apply_p(const CylinderElement& u) const {
  const int n = kernels_->dim();
  if (n == 0) return u;
  Eigen::VectorXcd b(n);
  for (int i = 0; i < n; ++i) b[i] = pairing_omega(u, kernels_->kernel[i], *geom_);
  const Eigen::VectorXcd coeff = kernel_gram_inv_ * b;
  CylinderElement out = u;
  for (int i = 0; i < n; ++i) {
    CylinderElement scaled = kernels_->kernel[i];
    scaled *= coeff[i];
    out -= scaled;
  }
  return out;
}

DataTuple Projectors::apply_qplus(const DataTuple& data) const {
  const int n = kernels_->adjoint_dim();
  if (n == 0) return data;
  const Eigen::VectorXcd defect = solvability_defect(*spec_, data, *kernels_, *geom_);
  const Eigen::VectorXcd coeff = adjoint_gram_inv_ * defect;
  DataTuple out = data;
  for (int i = 0; i < n; ++i) {
    CylinderElement scaled = kernels_->adjoint_kernel[i];
    scaled *= coeff[i];
    out.f -= scaled;
  }
  return out;
}

Eigen::MatrixXcd Projectors::p_matrix(int truncation) const {
  const int m = geom_->normal_size();
  const int dim = m * (2 * truncation + 1);
  Eigen::MatrixXcd p = Eigen::MatrixXcd::Identity(dim, dim);
  const int n = kernels_->dim();
  if (n == 0) return p;
  if (kernels_->kernel.front().truncation() != truncation)
    throw std::invalid_argument("Projectors::p_matrix: truncation mismatch");
  // P = I - N Ginv (N^H W_block): assemble from the kernel columns.
  Eigen::MatrixXcd nmat(dim, n);
  for (int i = 0; i < n; ++i)
    nmat.col(i) = kernels_->kernel[i].values().reshaped();
  const Eigen::MatrixXd& w = geom_->basis().mass();
  Eigen::MatrixXcd pairing_rows(n, dim);
  for (int i = 0; i < n; ++i) {
    Eigen::MatrixXcd wn = w * kernels_->kernel[i].values();  // per-mode columns
    pairing_rows.row(i) = wn.reshaped().adjoint();
  }
  p -= nmat * kernel_gram_inv_ * pairing_rows;
  return p;
}

Projectors projectors(const BvpSpec& spec, double /*s*/, const FunctionParameter& /*phi*/,
                      const KernelData& kernels, CylinderGeometry& geom) {
  // The actions depend only on the kernels and the L2 pairing, not on (s, phi).
  return Projectors(spec, kernels, geom);
}

namespace {

// Smooth angular bump: 1 on [a + ramp, b - ramp], 0 outside (a, b).
std::function<double(double)> angular_bump(double a, double b, double ramp) {
  if (!(b > a) || !(ramp > 0) || !(2 * ramp < b - a))
    throw std::invalid_argument("angular_bump: cutoff support violates the descriptor");
  return [a, b, ramp](double theta) {
    double t = std::fmod(theta - a, 2 * M_PI);
    if (t < 0) t += 2 * M_PI;
    t += a;  // representative in [a, a + 2pi)
    if (t <= a || t >= b) return 0.0;
    if (t < a + ramp) {
      const double x = (t - a) / ramp;
      const double u = std::exp(-1.0 / x);
      const double v = std::exp(-1.0 / (1.0 - x));
      return u / (u + v);
    }
    if (t > b - ramp) {
      const double x = (b - t) / ramp;
      const double u = std::exp(-1.0 / x);
      const double v = std::exp(-1.0 / (1.0 - x));
      return u / (u + v);
    }
    return 1.0;
  };
}

DataTuple multiply_data_tangential(const DataTuple& data, const Eigen::VectorXcd& chi_hat,
                                   bool extend) {
  const int kc = static_cast<int>(chi_hat.size() / 2);
  const int k_out = extend ? data.f.truncation() + kc : data.f.truncation();
  DataTuple out(k_out, data.f.normal_size(), static_cast<int>(data.g.size()));
  out.f = multiply_tangential(data.f, chi_hat, extend);
  for (std::size_t j = 0; j < data.g.size(); ++j)
    for (int c = 0; c < 2; ++c)
      out.g[j].circle(c) = circle_multiply(data.g[j].circle(c), chi_hat, extend);
  return out;
}

}  // namespace

LocalReport local_smoothness_experiment(
    const BvpSpec& spec, const std::function<DataTuple(int, CylinderGeometry&)>& data,
    const SectorDescriptor& sector, double s, double eps, const FunctionParameter& phi,
    std::span<const int> truncations, CylinderGeometry& geom) {
  spec.validate();
  if (!(eps > 0)) throw std::invalid_argument("local_smoothness_experiment: eps must be > 0");
  const double w = sector.width();
  if (!(w > 0) || w > 2 * M_PI)
    throw std::invalid_argument("local_smoothness_experiment: bad sector");

  // chi strictly inside the sector, eta == 1 on supp chi and still inside.
  const auto chi_fn = angular_bump(sector.theta_min + 0.20 * w, sector.theta_max - 0.20 * w,
                                   0.15 * w);
  const auto eta_fn = angular_bump(sector.theta_min + 0.05 * w, sector.theta_max - 0.05 * w,
                                   0.10 * w);
  const int chi_cutoff = 24;
  const Eigen::VectorXcd chi_hat =
      tangential_coefficients([&](double th) { return Complex(chi_fn(th), 0); }, chi_cutoff);
  const Eigen::VectorXcd eta_hat =
      tangential_coefficients([&](double th) { return Complex(eta_fn(th), 0); }, chi_cutoff);

  // Fixed probe family for the commutator operator bound: elements drawn at
  // the finest truncation and restricted to each K, so the sweep sees nested
  // inputs.
  std::mt19937_64 probe_rng(1789);
  std::vector<CylinderElement> probes;
  for (int i = 0; i < 8; ++i)
    probes.push_back(random_element(truncations.back(), geom, probe_rng, 2.0));

  const auto restricted = [&](const CylinderElement& full, int K) {
    CylinderElement out(K, full.normal_size());
    for (int xi = -K; xi <= K; ++xi) out.mode(xi) = full.mode(xi);
    return out;
  };

  const auto commutator_of = [&](const CylinderElement& v) {
    DataTuple comm = apply_operator(spec, multiply_tangential(v, chi_hat, true), geom);
    const DataTuple chi_av =
        multiply_data_tangential(apply_operator(spec, v, geom), chi_hat, true);
    comm.f -= chi_av.f;
    for (int j = 0; j < spec.q; ++j) {
      BoundaryElement neg = chi_av.g[j];
      neg *= -1.0;
      comm.g[j] += neg;
    }
    return comm;
  };

  LocalReport rep;
  for (int K : truncations) {
    const DataTuple d = data(K, geom);
    const SolveResult sol = solve(spec, d, geom);
    const CylinderElement& u = sol.u;

    // Products kept at full bandwidth so the commutator identity is exact.
    const CylinderElement chi_u = multiply_tangential(u, chi_hat, true);

    rep.truncations.push_back(K);
    rep.localized_norms.push_back(solution_norm(chi_u, s + eps, phi, 2 * spec.q, geom));
    rep.global_norms.push_back(solution_norm(u, s + eps, phi, 2 * spec.q, geom));

    // One-order drop of the cutoff commutator, measured as an operator bound
    // over the probe family: |A(chi v) - chi A v|_{H_{s+1}} / |eta v|_{s,(2q)}.
    double worst = 0;
    for (const CylinderElement& full : probes) {
      const CylinderElement v = restricted(full, K);
      const CylinderElement eta_v = multiply_tangential(v, eta_hat, true);
      const double comm_norm = data_norm(commutator_of(v), spec, s + 1.0, phi, geom);
      const double eta_norm = solution_norm(eta_v, s, phi, 2 * spec.q, geom);
      worst = std::max(worst, comm_norm / std::max(eta_norm, 1e-300));
    }
    rep.commutator_ratios.push_back(worst);
  }

  const auto spread = [](const std::vector<double>& v) {
    const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    return *lo > 0 ? *hi / *lo : std::numeric_limits<double>::infinity();
  };
  rep.localized_spread = spread(rep.localized_norms);
  rep.commutator_spread = spread(rep.commutator_ratios);
  rep.global_growth = rep.global_norms.back() / std::max(rep.global_norms.front(), 1e-300);
  return rep;
}

ClassicalReport classical_criterion(const BvpSpec& spec,
                                    const std::function<DataTuple(int, CylinderGeometry&)>& data,
                                    double sigma, const FunctionParameter& phi,
                                    std::span<const int> truncations, CylinderGeometry& geom) {
  spec.validate();
  if (!(sigma > -0.5)) throw std::invalid_argument("classical_criterion: sigma must be > -1/2");

  ClassicalReport rep;
  rep.hoermander = hoermander_condition(phi);
  const FunctionParameter one = FunctionParameter::one();
  const int m_max = *std::max_element(spec.boundary_orders.begin(), spec.boundary_orders.end());
  const int n_dim = 2;  // cylinder model lives in the plane

  // Interior cutoff in the normal variable for the local membership norm.
  Eigen::VectorXd interior_bump(geom.normal_size());
  for (int j = 0; j < geom.normal_size(); ++j) {
    const double t = geom.basis().nodes()[j];
    double v = 0;
    if (t > 0.1 && t < 0.9) {
      if (t < 0.25) {
        const double x = (t - 0.1) / 0.15;
        const double a = std::exp(-1.0 / x), b = std::exp(-1.0 / (1.0 - x));
        v = a / (a + b);
      } else if (t > 0.75) {
        const double x = (0.9 - t) / 0.15;
        const double a = std::exp(-1.0 / x), b = std::exp(-1.0 / (1.0 - x));
        v = a / (a + b);
      } else {
        v = 1.0;
      }
    }
    interior_bump[j] = v;
  }

  for (int K : truncations) {
    const DataTuple d = data(K, geom);
    const SolveResult sol = solve(spec, d, geom);
    const CylinderElement& u = sol.u;

    // Refined data norms of (6.9)/(6.10) type.
    CylinderElement f_int = d.f;
    for (int xi = -K; xi <= K; ++xi)
      f_int.mode(xi) = f_int.mode(xi).cwiseProduct(interior_bump.cast<Complex>());
    double phi_norm = norm_omega(f_int, SpaceIndex{0.5 * n_dim, phi, Domain::Omega, 0}, geom);
    phi_norm = std::max(
        phi_norm, norm_zero_branch(
                      d.f, SpaceIndex{m_max - 2.0 * spec.q + 0.5 * n_dim, phi, Domain::Omega, 0},
                      geom));
    double sigma_norm =
        norm_zero_branch(d.f, SpaceIndex{sigma, one, Domain::Omega, 0}, geom);
    for (int j = 0; j < spec.q; ++j) {
      const double sg = m_max - spec.boundary_orders[j] + 0.5 * (n_dim - 1);
      phi_norm = std::max(phi_norm, norm_gamma(d.g[j], SpaceIndex{sg, phi, Domain::Gamma, 0}));
      const double s1 = sigma + 2.0 * spec.q - spec.boundary_orders[j] - 0.5;
      sigma_norm = std::max(sigma_norm, norm_gamma(d.g[j], SpaceIndex{s1, one, Domain::Gamma, 0}));
    }
    rep.data_phi_norms.push_back(phi_norm);
    rep.data_sigma_norms.push_back(sigma_norm);

    // Sup-norms of the controlled derivatives on a sampling grid.
    const int n_theta = 96;
    const int n_t = 33;
    Eigen::MatrixXd eval_rows(n_t, geom.normal_size());
    std::vector<bool> t_interior(n_t);
    for (int it = 0; it < n_t; ++it) {
      const double t = static_cast<double>(it) / (n_t - 1);
      eval_rows.row(it) = geom.basis().eval_row(t);
      t_interior[it] = t >= 0.15 && t <= 0.85;
    }
    Eigen::MatrixXcd phases(n_theta, 2 * K + 1);
    for (int ia = 0; ia < n_theta; ++ia)
      for (int xi = -K; xi <= K; ++xi)
        phases(ia, xi + K) = std::exp(Complex(0, xi * 2 * M_PI * ia / n_theta));

    double sup = 0;        // derivatives up to order m, up to the boundary
    double deriv_sup = 0;  // derivatives up to order 2q, interior band
    for (int a1 = 0; a1 <= 2 * spec.q; ++a1) {
      for (int a2 = 0; a1 + a2 <= 2 * spec.q; ++a2) {
        const bool boundary_ok = a1 + a2 <= m_max;
        CylinderElement du(K, geom.normal_size());
        const Eigen::MatrixXd& dmat = geom.basis().diff_power(a2);
        for (int xi = -K; xi <= K; ++xi) {
          const Complex tang = std::pow(Complex(0, xi), a1);
          du.mode(xi) = tang * (dmat * u.mode(xi));
        }
        const Eigen::MatrixXcd profile =
            eval_rows.cast<Complex>() * du.values();            // n_t x modes
        const Eigen::MatrixXcd values = phases * profile.transpose();  // n_theta x n_t
        for (int it = 0; it < n_t; ++it) {
          const double column_sup = values.col(it).cwiseAbs().maxCoeff();
          if (boundary_ok) sup = std::max(sup, column_sup);
          if (t_interior[it]) deriv_sup = std::max(deriv_sup, column_sup);
        }
      }
    }
    rep.sup_norms.push_back(sup);
    rep.deriv_sup_norms.push_back(deriv_sup);
    rep.truncations.push_back(K);
  }

  const auto spread = [](const std::vector<double>& v) {
    const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    return *lo > 0 ? *hi / *lo : std::numeric_limits<double>::infinity();
  };
  // Boundedness under refinement: flat sweep, or squared-norm increments
  // decaying geometrically across the octave sweep.
  const auto increments_decay = [&](const std::vector<double>& v) {
    if (spread(v) < 1.1) return true;
    if (v.size() < 3) return false;
    const double first_inc = v[1] * v[1] - v[0] * v[0];
    const double last_inc = v[v.size() - 1] * v[v.size() - 1] - v[v.size() - 2] * v[v.size() - 2];
    if (first_inc <= 0) return spread(v) < 1.1;
    return last_inc <= 0.5 * first_inc;
  };
  rep.data_norms_bounded = increments_decay(rep.data_phi_norms);
  rep.sup_growth = rep.sup_norms.back() / std::max(rep.sup_norms.front(), 1e-300);
  rep.sup_bounded = spread(rep.sup_norms) < 1.10;
  rep.deriv_sup_bounded = spread(rep.deriv_sup_norms) < 2.0;
  rep.classical_expected =
      rep.data_norms_bounded && rep.hoermander.verdict == IntegralVerdict::Converges;
  return rep;
}

}  // namespace rscale
