#include "rscale/space_index.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace rscale {

std::string domain_name(Domain d) {
  switch (d) {
    case Domain::Lattice: return "lattice";
    case Domain::Omega: return "omega";
    case Domain::OmegaClosure: return "omega-closure";
    case Domain::Gamma: return "gamma";
  }
  return "?";
}

Domain parse_domain(std::string_view name) {
  if (name == "lattice") return Domain::Lattice;
  if (name == "omega") return Domain::Omega;
  if (name == "omega-closure" || name == "omega_closure") return Domain::OmegaClosure;
  if (name == "gamma") return Domain::Gamma;
  throw std::invalid_argument("unknown domain '" + std::string(name) + "'");
}

bool SpaceIndex::is_critical() const {
  if (r < 1) return false;
  for (int k = 1; k <= r; ++k)
    if (std::abs(s - (k - 0.5)) < 1e-9) return true;
  return false;
}

SpaceIndex SpaceIndex::parse(std::string_view text) {
  SpaceIndex idx;
  bool saw_s = false;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t comma = text.find(',', pos);
    if (comma == std::string_view::npos) comma = text.size();
    const std::string_view field = text.substr(pos, comma - pos);
    pos = comma + 1;
    if (field.empty()) continue;
    const std::size_t eq = field.find('=');
    if (eq == std::string_view::npos)
      throw std::invalid_argument("SpaceIndex::parse: bad field '" + std::string(field) + "'");
    const std::string_view key = field.substr(0, eq);
    const std::string value(field.substr(eq + 1));
    if (key == "s") {
      idx.s = std::stod(value);
      saw_s = true;
    } else if (key == "phi") {
      idx.phi = parse_param(value);
    } else if (key == "domain") {
      idx.domain = parse_domain(value);
    } else if (key == "r") {
      idx.r = std::stoi(value);
      if (idx.r < 0) throw std::invalid_argument("SpaceIndex::parse: r must be >= 0");
    } else {
      throw std::invalid_argument("SpaceIndex::parse: unknown key '" + std::string(key) + "'");
    }
  }
  if (!saw_s) throw std::invalid_argument("SpaceIndex::parse: missing s");
  return idx;
}

std::string SpaceIndex::format() const {
  std::ostringstream out;
  out.precision(12);
  out << "s=" << s << ",phi=" << phi.label() << ",domain=" << domain_name(domain);
  if (r > 0) out << ",r=" << r;
  return out.str();
}

SpaceIndex SpaceIndex::with_s(double new_s) const {
  SpaceIndex idx = *this;
  idx.s = new_s;
  return idx;
}

double space_weight(double s, const FunctionParameter& phi, double h) {
  const double p = phi(h);
  return std::pow(h, 2.0 * s) * p * p;
}

}  // namespace rscale
