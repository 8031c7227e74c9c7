#include "rscale/serialize.hpp"

#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace rscale {

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", x);
  return buf;
}

namespace {

std::string format_full(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::string expect_token(std::istream& in, const char* what) {
  std::string token;
  if (!(in >> token)) throw std::runtime_error(std::string("read: missing ") + what);
  return token;
}

void expect_literal(std::istream& in, const std::string& literal) {
  const std::string token = expect_token(in, literal.c_str());
  if (token != literal)
    throw std::runtime_error("read: expected '" + literal + "', got '" + token + "'");
}

int read_tagged_int(std::istream& in, const std::string& tag) {
  const std::string token = expect_token(in, tag.c_str());
  if (token.rfind(tag + "=", 0) != 0)
    throw std::runtime_error("read: expected '" + tag + "=<n>', got '" + token + "'");
  return std::stoi(token.substr(tag.size() + 1));
}

}  // namespace

void write_matrix(std::ostream& out, const Eigen::MatrixXd& m) {
  out << "matrix " << m.rows() << " " << m.cols() << "\n";
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) out << " ";
      out << format_full(m(i, j));
    }
    out << "\n";
  }
}

Eigen::MatrixXd read_matrix(std::istream& in) {
  expect_literal(in, "matrix");
  int rows = 0, cols = 0;
  if (!(in >> rows >> cols) || rows < 1 || cols < 1)
    throw std::runtime_error("read_matrix: bad header");
  Eigen::MatrixXd m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j)
      if (!(in >> m(i, j))) throw std::runtime_error("read_matrix: truncated data");
  return m;
}

void write_pair(std::ostream& out, const HilbertPair& pair) {
  out << "pair " << pair.dim() << "\n";
  write_matrix(out, pair.gram0());
  write_matrix(out, pair.gram1());
}

HilbertPair read_pair(std::istream& in) {
  expect_literal(in, "pair");
  int dim = 0;
  if (!(in >> dim) || dim < 1) throw std::runtime_error("read_pair: bad header");
  Eigen::MatrixXd g0 = read_matrix(in);
  Eigen::MatrixXd g1 = read_matrix(in);
  if (g0.rows() != dim || g1.rows() != dim)
    throw std::runtime_error("read_pair: dimension mismatch");
  return HilbertPair(std::move(g0), std::move(g1));
}

void write_spectral(std::ostream& out, const SpectralElement& u) {
  const FrequencyLattice& lat = u.lattice();
  out << "spectral d=" << lat.dim() << " K=" << lat.truncation() << "\n";
  for (int i = 0; i < lat.size(); ++i) {
    const std::complex<double> c = u.coefficients()[i];
    if (c == std::complex<double>(0, 0)) continue;
    for (int m : lat.mode(i)) out << m << " ";
    out << format_full(c.real()) << " " << format_full(c.imag()) << "\n";
  }
}

SpectralElement read_spectral(std::istream& in, const FrequencyLattice& lattice) {
  expect_literal(in, "spectral");
  const int d = read_tagged_int(in, "d");
  const int k = read_tagged_int(in, "K");
  if (d != lattice.dim() || k != lattice.truncation())
    throw std::runtime_error("read_spectral: lattice shape mismatch");
  SpectralElement u(lattice);
  std::vector<int> mode(d);
  double re = 0, im = 0;
  while (true) {
    if (!(in >> mode[0])) break;
    for (int axis = 1; axis < d; ++axis)
      if (!(in >> mode[axis])) throw std::runtime_error("read_spectral: truncated mode");
    if (!(in >> re >> im)) throw std::runtime_error("read_spectral: truncated value");
    u.at(mode) = {re, im};
  }
  if (!in.eof()) in.clear();  // stop at the next section header
  return u;
}

void write_cylinder(std::ostream& out, const CylinderElement& u) {
  out << "cylinder K=" << u.truncation() << " M=" << u.normal_size()
      << " basis=chebyshev-lobatto\n";
  for (int xi = -u.truncation(); xi <= u.truncation(); ++xi) {
    for (int j = 0; j < u.normal_size(); ++j) {
      const std::complex<double> c = u.mode(xi)[j];
      if (c == std::complex<double>(0, 0)) continue;
      out << xi << " " << j << " " << format_full(c.real()) << " " << format_full(c.imag())
          << "\n";
    }
  }
}

CylinderElement read_cylinder(std::istream& in) {
  expect_literal(in, "cylinder");
  const int k = read_tagged_int(in, "K");
  const int m = read_tagged_int(in, "M");
  const std::string basis = expect_token(in, "basis");
  if (basis != "basis=chebyshev-lobatto")
    throw std::runtime_error("read_cylinder: unknown basis '" + basis + "'");
  CylinderElement u(k, m);
  int xi = 0, j = 0;
  double re = 0, im = 0;
  while (in >> xi) {
    if (!(in >> j >> re >> im)) throw std::runtime_error("read_cylinder: truncated line");
    if (xi < -k || xi > k || j < 0 || j >= m)
      throw std::runtime_error("read_cylinder: entry outside the declared shape");
    u.mode(xi)[j] = {re, im};
  }
  if (!in.eof()) in.clear();  // stop at the next section header
  return u;
}

void write_boundary(std::ostream& out, const BoundaryElement& g) {
  out << "gamma K=" << g.truncation() << "\n";
  for (int c = 0; c < 2; ++c) {
    for (int xi = -g.truncation(); xi <= g.truncation(); ++xi) {
      const std::complex<double> v = g.at(c, xi);
      if (v == std::complex<double>(0, 0)) continue;
      out << c << " " << xi << " " << format_full(v.real()) << " " << format_full(v.imag())
          << "\n";
    }
  }
}

BoundaryElement read_boundary(std::istream& in) {
  expect_literal(in, "gamma");
  const int k = read_tagged_int(in, "K");
  BoundaryElement g(k);
  int c = 0, xi = 0;
  double re = 0, im = 0;
  while (in >> c) {
    if (!(in >> xi >> re >> im)) throw std::runtime_error("read_boundary: truncated line");
    if (c < 0 || c > 1 || xi < -k || xi > k)
      throw std::runtime_error("read_boundary: entry outside the declared shape");
    g.at(c, xi) = {re, im};
  }
  if (!in.eof()) in.clear();  // stop at the next section header
  return g;
}

void write_data_tuple(std::ostream& out, const DataTuple& data) {
  out << "data q=" << data.g.size() << "\n";
  write_cylinder(out, data.f);
  for (const BoundaryElement& g : data.g) write_boundary(out, g);
}

DataTuple read_data_tuple(std::istream& in) {
  expect_literal(in, "data");
  const int q = read_tagged_int(in, "q");
  if (q < 1) throw std::runtime_error("read_data_tuple: bad boundary count");
  CylinderElement f = read_cylinder(in);
  DataTuple data(f.truncation(), f.normal_size(), q);
  data.f = std::move(f);
  for (int j = 0; j < q; ++j) {
    BoundaryElement g = read_boundary(in);
    if (g.truncation() != data.f.truncation())
      throw std::runtime_error("read_data_tuple: boundary truncation mismatch");
    data.g[static_cast<std::size_t>(j)] = std::move(g);
  }
  return data;
}

}  // namespace rscale
