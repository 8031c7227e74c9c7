#include "rscale/lattice.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace rscale {

FrequencyLattice::FrequencyLattice(int dim, int per_axis_truncation)
    : dim_(dim), trunc_(per_axis_truncation) {
  if (dim < 1 || dim > 4) throw std::invalid_argument("FrequencyLattice: dim must be in 1..4");
  if (per_axis_truncation < 0) throw std::invalid_argument("FrequencyLattice: K must be >= 0");
  const long side = 2L * trunc_ + 1;
  long total = 1;
  for (int i = 0; i < dim_; ++i) total *= side;
  if (total > 40'000'000L) throw std::invalid_argument("FrequencyLattice: truncation too large");
  size_ = static_cast<int>(total);
  abs2_.resize(size_);
  modulus_.resize(size_);
  for (int index = 0; index < size_; ++index) {
    int rest = index;
    double a2 = 0;
    for (int axis = 0; axis < dim_; ++axis) {
      const int c = rest % static_cast<int>(side) - trunc_;
      rest /= static_cast<int>(side);
      a2 += static_cast<double>(c) * c;
    }
    abs2_[index] = a2;
    modulus_[index] = std::sqrt(1.0 + a2);
  }
}

std::vector<int> FrequencyLattice::mode(int index) const {
  std::vector<int> m(dim_);
  const int side = 2 * trunc_ + 1;
  for (int axis = 0; axis < dim_; ++axis) {
    m[axis] = index % side - trunc_;
    index /= side;
  }
  return m;
}

int FrequencyLattice::flat_index(std::span<const int> mode) const {
  if (static_cast<int>(mode.size()) != dim_)
    throw std::invalid_argument("FrequencyLattice::flat_index: wrong arity");
  const int side = 2 * trunc_ + 1;
  int index = 0;
  for (int axis = dim_ - 1; axis >= 0; --axis) {
    if (mode[axis] < -trunc_ || mode[axis] > trunc_)
      throw std::out_of_range("FrequencyLattice::flat_index: mode outside truncation");
    index = index * side + (mode[axis] + trunc_);
  }
  return index;
}

double norm_lattice(const SpectralElement& u, const SpaceIndex& idx) {
  if (idx.domain != Domain::Lattice)
    throw std::invalid_argument("norm_lattice: index domain must be lattice");
  const FrequencyLattice& lat = u.lattice();
  double acc = 0;
  for (int i = 0; i < lat.size(); ++i) {
    const double a = std::norm(u.coefficients()[i]);
    if (a == 0) continue;
    acc += space_weight(idx.s, idx.phi, lat.smoothed_modulus(i)) * a;
  }
  return std::sqrt(acc);
}

const char* verdict_name(IntegralVerdict v) {
  switch (v) {
    case IntegralVerdict::Converges: return "converges";
    case IntegralVerdict::Diverges: return "diverges";
    case IntegralVerdict::Undecided: return "undecided";
  }
  return "?";
}

namespace {

// Composite Simpson quadrature of int_a^b f(u) du on a uniform grid.
double simpson(double a, double b, int n, const std::function<double(double)>& f) {
  if (n % 2) ++n;
  const double h = (b - a) / n;
  double acc = f(a) + f(b);
  for (int i = 1; i < n; ++i) acc += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return acc * h / 3.0;
}

}  // namespace

HoermanderReport hoermander_condition(const FunctionParameter& phi, double t_max) {
  if (!phi.is_class_m())
    throw std::invalid_argument("hoermander_condition: phi must be in class M");
  if (!(t_max > 10.0)) throw std::invalid_argument("hoermander_condition: t_max too small");

  HoermanderReport rep;
  // Substitute u = log t: int_0^{log t_max} du / phi(e^u)^2.
  const auto integrand = [&phi](double u) {
    const double p = phi(std::exp(u));
    return 1.0 / (p * p);
  };
  const double u_max = std::log(t_max);
  rep.integral = simpson(0.0, u_max, 4096, integrand);

  if (phi.kind() == ParamKind::LogPower) {
    // int^inf du / prod l_k(e^u)^{2 r_k}: decided by the first exponent with
    // 2 r_k != 1 (all equal to 1 diverges, iterated-log case).
    const auto& exps = phi.exponents();
    int decisive = -1;
    for (std::size_t k = 0; k < exps.size(); ++k) {
      if (2.0 * exps[k] != 1.0) {
        decisive = static_cast<int>(k);
        break;
      }
    }
    if (decisive == -1) {
      rep.verdict = IntegralVerdict::Diverges;
      rep.tail = std::numeric_limits<double>::infinity();
    } else if (2.0 * exps[decisive] > 1.0) {
      rep.verdict = IntegralVerdict::Converges;
      // Leading-order tail: with v the decisive iterated log of t,
      // remainder ~ v^{1-2r} / (2r - 1) over the residual slowly varying part.
      const double r = exps[decisive];
      const double v = FunctionParameter::iterated_log(t_max, decisive + 1);
      double residual = 1.0;
      for (std::size_t k = decisive + 1; k < exps.size(); ++k) {
        residual *= std::pow(FunctionParameter::iterated_log(t_max, static_cast<int>(k) + 1),
                             2.0 * exps[k]);
      }
      rep.tail = std::pow(v, 1.0 - 2.0 * r) / ((2.0 * r - 1.0) * residual);
    } else {
      rep.verdict = IntegralVerdict::Diverges;
      rep.tail = std::numeric_limits<double>::infinity();
    }
    return rep;
  }

  // Custom class-M parameter: decide by the trend of per-decade increments.
  const double i_full = rep.integral;
  const double i_1 = simpson(0.0, std::log(t_max / 10.0), 4096, integrand);
  const double i_2 = simpson(0.0, std::log(t_max / 100.0), 4096, integrand);
  const double inc_last = i_full - i_1;
  const double inc_prev = i_1 - i_2;
  if (inc_prev <= 0) {
    rep.verdict = IntegralVerdict::Undecided;
    return rep;
  }
  const double rho = inc_last / inc_prev;
  if (rho < 0.5) {
    rep.verdict = IntegralVerdict::Converges;
    rep.tail = inc_last * rho / (1.0 - rho);
  } else if (rho > 0.9) {
    rep.verdict = IntegralVerdict::Diverges;
    rep.tail = std::numeric_limits<double>::infinity();
  } else {
    rep.verdict = IntegralVerdict::Undecided;
  }
  return rep;
}

EmbeddingReport embedding_constants(const SpaceIndex& hi, const SpaceIndex& lo,
                                    const FrequencyLattice& lattice,
                                    std::span<const SpectralElement> sample) {
  const double h_max = std::sqrt(1.0 + 3.0 * static_cast<double>(lattice.truncation()) *
                                           lattice.truncation());
  if (lo.s > hi.s + 1e-12)
    throw std::invalid_argument("embedding_constants: lo.s exceeds hi.s");
  if (lo.s == hi.s) {
    // phi_lo must be dominated by phi_hi along the sampled tail.
    const double at_cut = lo.phi(h_max) / hi.phi(h_max);
    const double at_mid = lo.phi(std::sqrt(h_max)) / hi.phi(std::sqrt(h_max));
    if (at_cut > 10.0 * std::max(at_mid, 1.0))
      throw std::invalid_argument("embedding_constants: phi_lo not dominated by phi_hi at tail");
  }

  EmbeddingReport rep;
  const auto mode_ratio = [&](double h) {
    return std::sqrt(space_weight(lo.s, lo.phi, h) / space_weight(hi.s, hi.phi, h));
  };
  double h_largest = 1.0;
  for (int i = 0; i < lattice.size(); ++i) {
    const double h = lattice.smoothed_modulus(i);
    h_largest = std::max(h_largest, h);
    rep.max_mode_ratio = std::max(rep.max_mode_ratio, mode_ratio(h));
  }
  rep.mode_ratio_at_cut = mode_ratio(h_largest);
  rep.mode_ratio_mid = mode_ratio(std::sqrt(h_largest));
  rep.ratio_vanishes = rep.mode_ratio_at_cut < 0.9 * rep.mode_ratio_mid;

  for (const SpectralElement& u : sample) {
    const double denom = norm_lattice(u, SpaceIndex{hi.s, hi.phi, Domain::Lattice, 0});
    if (denom == 0) continue;
    const double num = norm_lattice(u, SpaceIndex{lo.s, lo.phi, Domain::Lattice, 0});
    rep.max_sample_ratio = std::max(rep.max_sample_ratio, num / denom);
  }
  return rep;
}

}  // namespace rscale
