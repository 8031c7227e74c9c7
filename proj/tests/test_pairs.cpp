#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "rscale/hilbert_pair.hpp"

using namespace rscale;

namespace {

HilbertPair random_pair(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss;
  const auto spd = [&](double shift) {
    Eigen::MatrixXd a(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) a(i, j) = gauss(rng);
    return Eigen::MatrixXd(a.transpose() * a + shift * Eigen::MatrixXd::Identity(n, n));
  };
  Eigen::MatrixXd g0 = spd(0.5);
  Eigen::MatrixXd g1 = g0 + spd(0.25);
  return HilbertPair(std::move(g0), std::move(g1));
}

Eigen::VectorXd random_vector(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss;
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v[i] = gauss(rng);
  return v;
}

}  // namespace

TEST_CASE("generating operator of a diagonal pair") {
  Eigen::VectorXd w0 = Eigen::VectorXd::Ones(2);
  Eigen::VectorXd w1(2);
  w1 << 4.0, 9.0;
  const GeneratingOperator j(HilbertPair::diagonal(w0, w1));
  CHECK(j.eigenvalues()[0] == doctest::Approx(2.0).epsilon(1e-13));
  CHECK(j.eigenvalues()[1] == doctest::Approx(3.0).epsilon(1e-13));
}

TEST_CASE("equal forms give the identity operator") {
  std::mt19937_64 rng(11);
  const HilbertPair base = random_pair(5, rng);
  const HilbertPair pair(base.gram0(), base.gram0());
  const GeneratingOperator j(pair);
  for (int i = 0; i < 5; ++i) CHECK(j.eigenvalues()[i] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK((j.matrix() - Eigen::MatrixXd::Identity(5, 5)).norm() < 1e-10);
}

TEST_CASE("J is an isometry between the two forms on random vectors") {
  std::mt19937_64 rng(3);
  const HilbertPair pair = random_pair(8, rng);
  const GeneratingOperator gen(pair);
  const Eigen::MatrixXd j = gen.matrix();
  for (int trial = 0; trial < 50; ++trial) {
    const Eigen::VectorXd u = random_vector(8, rng);
    const Eigen::VectorXd v = random_vector(8, rng);
    const double x1 = u.dot(pair.gram1() * v);
    const double x0 = (j * u).dot(pair.gram0() * (j * v));
    CHECK(x1 == doctest::Approx(x0).epsilon(1e-10));
  }
  CHECK(gen.reconstruction_residual() <= 1e-10);
}

TEST_CASE("interpolation form on a diagonal pair") {
  Eigen::VectorXd w0 = Eigen::VectorXd::Ones(2);
  Eigen::VectorXd w1(2);
  w1 << 4.0, 9.0;
  const HilbertPair pair = HilbertPair::diagonal(w0, w1);

  const Eigen::MatrixXd with_identity = interp_form(pair, FunctionParameter::power(1.0));
  CHECK(with_identity(0, 0) == doctest::Approx(5.0).epsilon(1e-12));
  CHECK(with_identity(1, 1) == doctest::Approx(10.0).epsilon(1e-12));
  CHECK(std::abs(with_identity(0, 1)) < 1e-12);

  const Eigen::MatrixXd with_one = interp_form(pair, FunctionParameter::one());
  CHECK((with_one - 2.0 * pair.gram0()).norm() < 1e-12);
}

TEST_CASE("refined per-mode weight identity of the shifted-pair construction") {
  // Diagonal pair with weights h^{2(s-eps)} and h^{2(s+delta)}: the X_psi
  // weight must equal h^{2(s-eps)} (1 + h^{2 eps} phi(h)^2) mode by mode, and
  // sit within [1, 2] of the target weight h^{2s} phi(h)^2.
  const double s = 1.0, eps = 0.5, delta = 1.5;
  const FunctionParameter phi = FunctionParameter::log_power({1.0});
  const FunctionParameter psi = make_theta_psi(phi, eps, delta);
  const int n = 24;
  Eigen::VectorXd w0(n), w1(n), h(n);
  for (int i = 0; i < n; ++i) {
    h[i] = std::sqrt(1.0 + i * i);
    w0[i] = std::pow(h[i], 2 * (s - eps));
    w1[i] = std::pow(h[i], 2 * (s + delta));
  }
  const Eigen::MatrixXd form = interp_form(HilbertPair::diagonal(w0, w1), psi);
  for (int i = 0; i < n; ++i) {
    const double p = phi(h[i]);
    const double expected = w0[i] * (1.0 + std::pow(h[i], 2 * eps) * p * p);
    CHECK(form(i, i) == doctest::Approx(expected).epsilon(1e-12));
    const double ratio = form(i, i) / (std::pow(h[i], 2 * s) * p * p);
    CHECK(ratio >= 1.0 - 1e-12);
    CHECK(ratio <= 2.0 + 1e-12);
  }
}

TEST_CASE("operator bounds: identity map") {
  std::mt19937_64 rng(5);
  const HilbertPair pair = random_pair(6, rng);
  const OperatorBounds b = interp_operator_bound(
      pair, pair, Eigen::MatrixXd::Identity(6, 6), FunctionParameter::power(0.5));
  CHECK(b.norm0 == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(b.norm1 == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(b.norm_psi == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("operator bounds: diagonal case against brute-force enumeration") {
  const int n = 6;
  Eigen::VectorXd x0(n), x1(n), y0(n), y1(n), tdiag(n);
  x0 << 1, 2, 3, 4, 5, 6;
  x1 << 2, 8, 27, 64, 125, 216;
  y0 << 1, 1, 2, 2, 3, 3;
  y1 << 4, 5, 9, 16, 30, 50;
  tdiag << 0.5, -1.5, 2.0, 0.25, -3.0, 1.0;
  const HilbertPair px = HilbertPair::diagonal(x0, x1);
  const HilbertPair py = HilbertPair::diagonal(y0, y1);
  const Eigen::MatrixXd t = tdiag.asDiagonal();
  const FunctionParameter psi = FunctionParameter::power(0.5);
  const OperatorBounds b = interp_operator_bound(px, py, t, psi);

  double m0 = 0, m1 = 0;
  for (int i = 0; i < n; ++i) {
    m0 = std::max(m0, std::sqrt(tdiag[i] * tdiag[i] * y0[i] / x0[i]));
    m1 = std::max(m1, std::sqrt(tdiag[i] * tdiag[i] * py.gram1()(i, i) / px.gram1()(i, i)));
  }
  CHECK(b.norm0 == doctest::Approx(m0).epsilon(1e-10));
  CHECK(b.norm1 == doctest::Approx(m1).epsilon(1e-10));

  double mp = 0;
  const Eigen::MatrixXd gx = interp_form(px, psi);
  const Eigen::MatrixXd gy = interp_form(py, psi);
  for (int i = 0; i < n; ++i)
    mp = std::max(mp, std::sqrt(tdiag[i] * tdiag[i] * gy(i, i) / gx(i, i)));
  CHECK(b.norm_psi == doctest::Approx(mp).epsilon(1e-10));
}

TEST_CASE("operator bounds: power parameters obey the geometric bound") {
  std::mt19937_64 rng(17);
  const HilbertPair px = random_pair(8, rng);
  const HilbertPair py = random_pair(8, rng);
  Eigen::MatrixXd t(8, 8);
  std::normal_distribution<double> gauss;
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j) t(i, j) = gauss(rng);
  for (double theta : {0.5, 1.0 / 3.0, 0.8}) {
    const OperatorBounds b = interp_operator_bound(px, py, t, FunctionParameter::power(theta));
    CHECK(b.norm_psi <= 1.001 * std::pow(b.norm0, 1.0 - theta) * std::pow(b.norm1, theta) *
                            std::sqrt(2.0));
    CHECK(b.certificate <= std::sqrt(2.0) + 1e-9);
  }
}

TEST_CASE("operator bounds reject a non-interpolation order") {
  std::mt19937_64 rng(2);
  const HilbertPair pair = random_pair(4, rng);
  CHECK_THROWS_AS(interp_operator_bound(pair, pair, Eigen::MatrixXd::Identity(4, 4),
                                        FunctionParameter::one()),
                  std::invalid_argument);
  CHECK_THROWS_AS(interp_operator_bound(pair, pair, Eigen::MatrixXd::Identity(4, 4),
                                        FunctionParameter::power(1.5)),
                  std::invalid_argument);
}

TEST_CASE("product pair: blocks and single-factor identity") {
  std::mt19937_64 rng(23);
  const HilbertPair a = random_pair(3, rng);
  const HilbertPair b = random_pair(4, rng);
  const std::vector<HilbertPair> factors = {a, b};
  const HilbertPair prod = product_pair(factors);
  CHECK(prod.dim() == 7);
  CHECK((prod.gram0().block(0, 0, 3, 3) - a.gram0()).norm() == 0.0);
  CHECK((prod.gram1().block(3, 3, 4, 4) - b.gram1()).norm() == 0.0);
  CHECK(prod.gram0().block(0, 3, 3, 4).norm() == 0.0);

  const std::vector<HilbertPair> single = {a};
  const HilbertPair same = product_pair(single);
  CHECK((same.gram0() - a.gram0()).norm() == 0.0);
  CHECK((same.gram1() - a.gram1()).norm() == 0.0);

  const std::vector<HilbertPair> empty;
  CHECK_THROWS_AS(product_pair(empty), std::invalid_argument);
}

TEST_CASE("product interpolation equals the per-factor forms to machine precision") {
  std::mt19937_64 rng(29);
  std::vector<HilbertPair> factors;
  for (int i = 0; i < 3; ++i) factors.push_back(random_pair(8, rng));
  const FunctionParameter psi = FunctionParameter::power(1.0 / 3.0);
  const Eigen::MatrixXd whole = interp_form(product_pair(factors), psi);
  Eigen::MatrixXd blocks = Eigen::MatrixXd::Zero(24, 24);
  int at = 0;
  for (const HilbertPair& p : factors) {
    blocks.block(at, at, p.dim(), p.dim()) = interp_form(p, psi);
    at += p.dim();
  }
  CHECK((whole - blocks).cwiseAbs().maxCoeff() <= 1e-12 * blocks.cwiseAbs().maxCoeff());
}

TEST_CASE("reiteration on the power family stays within the graph-norm band") {
  const int n = 32;
  Eigen::VectorXd w0 = Eigen::VectorXd::Ones(n);
  Eigen::VectorXd w1(n);
  for (int i = 0; i < n; ++i) w1[i] = std::pow(10.0, 6.0 * i / (n - 1));
  const HilbertPair pair = HilbertPair::diagonal(w0, w1);
  const ReiterationReport rep =
      reiteration_check(pair, FunctionParameter::power(0.25), FunctionParameter::power(0.75),
                        FunctionParameter::power(0.5));
  CHECK(rep.ratio_min >= 0.5 - 1e-9);
  CHECK(rep.ratio_max <= 2.0 + 1e-9);

  // Degenerate zeta = eta: both routes give proportional forms with factor 2.
  const ReiterationReport deg =
      reiteration_check(pair, FunctionParameter::power(0.25), FunctionParameter::power(0.25),
                        FunctionParameter::power(0.5));
  CHECK(deg.ratio_min == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(deg.ratio_max == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("reiteration constants match the per-mode closed form on diagonals") {
  const int n = 24;
  Eigen::VectorXd w0 = Eigen::VectorXd::Ones(n);
  Eigen::VectorXd w1(n);
  for (int i = 0; i < n; ++i) w1[i] = std::pow(10.0, 6.0 * i / (n - 1));
  const HilbertPair pair = HilbertPair::diagonal(w0, w1);
  const FunctionParameter zeta = FunctionParameter::power(0.5);
  const FunctionParameter eta = FunctionParameter::power(0.5, {1.0});
  const FunctionParameter chi = FunctionParameter::power(0.5);
  const ReiterationReport rep = reiteration_check(pair, zeta, eta, chi);

  double lo = 1e300, hi = 0;
  for (int i = 0; i < n; ++i) {
    const double lambda = std::sqrt(w1[i]);
    const double z2 = std::pow(zeta(lambda), 2.0);
    const double e2 = std::pow(eta(lambda), 2.0);
    const double lambda_outer = std::sqrt((1.0 + e2) / (1.0 + z2));
    const double outer = (1.0 + z2) * (1.0 + std::pow(chi(lambda_outer), 2.0));
    const double direct = 1.0 + z2 * std::pow(chi(eta(lambda) / zeta(lambda)), 2.0);
    const double ratio = outer / direct;
    lo = std::min(lo, ratio);
    hi = std::max(hi, ratio);
  }
  CHECK(rep.ratio_min == doctest::Approx(lo).epsilon(1e-9));
  CHECK(rep.ratio_max == doctest::Approx(hi).epsilon(1e-9));
}

TEST_CASE("reiteration constants stay uniform as the truncation grows") {
  const FunctionParameter zeta = FunctionParameter::power(0.5);
  const FunctionParameter eta = FunctionParameter::power(0.5, {1.0});
  const FunctionParameter chi = FunctionParameter::power(0.5);
  double hi_min = 1e300, hi_max = 0, lo_min = 1e300, lo_max = 0;
  for (int n : {8, 16, 32, 64, 128}) {
    Eigen::VectorXd w0 = Eigen::VectorXd::Ones(n);
    Eigen::VectorXd w1(n);
    for (int i = 0; i < n; ++i) w1[i] = std::pow(10.0, 6.0 * i / (n - 1));
    const ReiterationReport rep =
        reiteration_check(HilbertPair::diagonal(w0, w1), zeta, eta, chi);
    hi_min = std::min(hi_min, rep.ratio_max);
    hi_max = std::max(hi_max, rep.ratio_max);
    lo_min = std::min(lo_min, rep.ratio_min);
    lo_max = std::max(lo_max, rep.ratio_min);
  }
  CHECK(hi_max / hi_min <= 1.1);
  CHECK(lo_max / lo_min <= 1.1);
}

TEST_CASE("spectral construction is invariant under congruent basis changes") {
  std::mt19937_64 rng(31);
  const HilbertPair pair = random_pair(6, rng);
  std::normal_distribution<double> gauss;
  Eigen::MatrixXd s(6, 6);
  do {
    for (int i = 0; i < 6; ++i)
      for (int j = 0; j < 6; ++j) s(i, j) = gauss(rng);
  } while (std::abs(s.determinant()) < 1e-3);
  const HilbertPair moved(s.transpose() * pair.gram0() * s,
                          s.transpose() * pair.gram1() * s);

  const FunctionParameter zeta = FunctionParameter::power(0.25);
  const FunctionParameter eta = FunctionParameter::power(0.75);
  const FunctionParameter chi = FunctionParameter::power(0.5);
  const ReiterationReport a = reiteration_check(pair, zeta, eta, chi);
  const ReiterationReport b = reiteration_check(moved, zeta, eta, chi);
  CHECK(a.ratio_min == doctest::Approx(b.ratio_min).epsilon(1e-8));
  CHECK(a.ratio_max == doctest::Approx(b.ratio_max).epsilon(1e-8));
}

TEST_CASE("fredholm bookkeeping across the three forms") {
  std::mt19937_64 rng(37);
  const FunctionParameter psi = FunctionParameter::power(0.5);
  {
    const HilbertPair x = random_pair(3, rng);
    const HilbertPair y = random_pair(3, rng);
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(3, 3);
    t(1, 1) = 1;
    t(2, 2) = 2;
    const FredholmReport rep = fredholm_interp_check(x, y, t, psi);
    CHECK(rep.consistent);
    CHECK(rep.kernel_dim0 == 1);
    CHECK(rep.codim0 == 1);
    CHECK(rep.index_psi == 0);
  }
  {
    const int n = 6;
    const HilbertPair x = random_pair(n, rng);
    const HilbertPair y = random_pair(n, rng);
    Eigen::MatrixXd t = Eigen::MatrixXd::Identity(n, n);
    t(n - 1, n - 1) = 0;
    t(n - 2, n - 2) = 0;
    const FredholmReport rep = fredholm_interp_check(x, y, t, psi);
    CHECK(rep.consistent);
    CHECK(rep.kernel_dim_psi == 2);
    CHECK(rep.codim_psi == 2);
    CHECK(rep.index_psi == 0);
  }
  {
    const int n = 6;
    const HilbertPair x = random_pair(n, rng);
    const HilbertPair y = random_pair(n - 1, rng);
    std::normal_distribution<double> gauss;
    Eigen::MatrixXd t(n - 1, n);
    for (int i = 0; i < n - 1; ++i)
      for (int j = 0; j < n; ++j) t(i, j) = gauss(rng);
    const FredholmReport rep = fredholm_interp_check(x, y, t, psi);
    CHECK(rep.consistent);
    CHECK(rep.kernel_dim_psi == 1);
    CHECK(rep.codim_psi == 0);
    CHECK(rep.index_psi == 1);
  }
}

TEST_CASE("fredholm rank decision refuses the ambiguity band") {
  std::mt19937_64 rng(41);
  const HilbertPair x(Eigen::MatrixXd::Identity(3, 3), 2 * Eigen::MatrixXd::Identity(3, 3));
  const HilbertPair y = x;
  Eigen::MatrixXd t = Eigen::MatrixXd::Identity(3, 3);
  t(2, 2) = 1e-9;  // inside the [1e-10, 1e-8] band
  CHECK_THROWS_AS(fredholm_interp_check(x, y, t, FunctionParameter::power(0.5)),
                  std::runtime_error);
}

TEST_CASE("pair normalization pins the generating spectrum at 1") {
  Eigen::VectorXd w0 = Eigen::VectorXd::Ones(3);
  Eigen::VectorXd w1(3);
  w1 << 0.25, 1.0, 4.0;  // gram1 does not dominate
  const HilbertPair pair = HilbertPair::diagonal(w0, w1);
  CHECK(pair.applied_scale() == doctest::Approx(4.0).epsilon(1e-12));
  const GeneratingOperator j(pair);
  CHECK(j.eigenvalues().minCoeff() >= 1.0 - 1e-12);
}

TEST_CASE("invalid pairs are rejected") {
  Eigen::MatrixXd asym(2, 2);
  asym << 1.0, 0.5, -0.5, 1.0;
  CHECK_THROWS_AS(HilbertPair(asym, Eigen::MatrixXd::Identity(2, 2)), std::invalid_argument);
  Eigen::MatrixXd indef(2, 2);
  indef << 1.0, 0.0, 0.0, -1.0;
  CHECK_THROWS_AS(HilbertPair(indef, Eigen::MatrixXd::Identity(2, 2)), std::invalid_argument);
  CHECK_THROWS_AS(HilbertPair(Eigen::MatrixXd::Identity(2, 2),
                              Eigen::MatrixXd::Identity(3, 3)),
                  std::invalid_argument);
}
