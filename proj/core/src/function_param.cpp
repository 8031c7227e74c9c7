#include "rscale/function_param.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace rscale {

double FunctionParameter::iterated_log(double t, int depth) {
  double v = t;
  for (int i = 0; i < depth; ++i) {
    if (v <= 1.0) return 1.0;
    v = std::log(v);
  }
  return std::max(v, 1.0);
}

FunctionParameter::FunctionParameter(ParamKind kind, double order,
                                     std::vector<double> exponents,
                                     std::function<double(double)> fn, std::string label)
    : kind_(kind),
      order_(order),
      exponents_(std::move(exponents)),
      fn_(std::move(fn)),
      label_(std::move(label)) {}

FunctionParameter FunctionParameter::one() {
  return FunctionParameter(ParamKind::LogPower, 0.0, {}, nullptr, "1");
}

FunctionParameter FunctionParameter::log_power(std::vector<double> exponents) {
  while (!exponents.empty() && exponents.back() == 0.0) exponents.pop_back();
  std::ostringstream name;
  if (exponents.empty()) {
    name << "1";
  } else {
    for (std::size_t k = 0; k < exponents.size(); ++k) {
      if (k) name << "*";
      for (std::size_t i = 0; i <= k; ++i) name << "log";
      name << "^" << exponents[k];
    }
  }
  return FunctionParameter(ParamKind::LogPower, 0.0, std::move(exponents), nullptr, name.str());
}

FunctionParameter FunctionParameter::power(double theta, std::vector<double> exponents) {
  while (!exponents.empty() && exponents.back() == 0.0) exponents.pop_back();
  if (theta == 0.0 && exponents.empty()) return one();
  std::ostringstream name;
  name << "t^" << theta;
  if (!exponents.empty()) {
    name << "*" << log_power(exponents).label();
  }
  if (theta == 0.0) return log_power(std::move(exponents));
  return FunctionParameter(ParamKind::PowerLog, theta, std::move(exponents), nullptr, name.str());
}

FunctionParameter FunctionParameter::custom(std::string label, std::function<double(double)> fn,
                                            double order) {
  if (!fn) throw std::invalid_argument("FunctionParameter::custom: null callable");
  return FunctionParameter(ParamKind::Custom, order, {}, std::move(fn), std::move(label));
}

double FunctionParameter::operator()(double t) const {
  if (!(t > 0.0)) throw std::invalid_argument("FunctionParameter: t must be positive");
  if (kind_ == ParamKind::Custom) {
    double value = fn_(std::max(t, 1.0));
    if (!(value > 0.0) || !std::isfinite(value))
      throw std::runtime_error("FunctionParameter '" + label_ +
                               "': evaluation not positive finite at t=" + std::to_string(t));
    return value;
  }
  double value = (order_ == 0.0) ? 1.0 : std::pow(t, order_);
  const double tc = std::max(t, 1.0);
  for (std::size_t k = 0; k < exponents_.size(); ++k) {
    if (exponents_[k] == 0.0) continue;
    value *= std::pow(iterated_log(tc, static_cast<int>(k) + 1), exponents_[k]);
  }
  return value;
}

double FunctionParameter::exponent_weight() const {
  double w = 0;
  for (double r : exponents_) w += std::abs(r);
  return w;
}

FunctionParameter reciprocal(const FunctionParameter& phi) {
  if (phi.order() != 0.0)
    throw std::invalid_argument("reciprocal: parameter has order " +
                                std::to_string(phi.order()) + ", class M requires order 0");
  if (phi.kind() == ParamKind::LogPower) {
    std::vector<double> neg = phi.exponents();
    for (double& r : neg) r = -r;
    return FunctionParameter::log_power(std::move(neg));
  }
  return FunctionParameter::custom("1/(" + phi.label() + ")",
                                   [phi](double t) { return 1.0 / phi(t); }, 0.0);
}

FunctionParameter make_theta_psi(const FunctionParameter& phi, double eps, double delta) {
  if (!(eps > 0.0) || !(delta > 0.0))
    throw std::invalid_argument("make_theta_psi: eps and delta must be positive");
  if (!phi.is_class_m())
    throw std::invalid_argument("make_theta_psi: phi must be in class M (order 0)");
  const double theta = eps / (eps + delta);
  const double inv = 1.0 / (eps + delta);
  std::ostringstream name;
  name << "t^" << theta << "*(" << phi.label() << ")(t^" << inv << ")";
  // Below t = 1 the value is pinned to phi(1); the clamp in operator() does it.
  FunctionParameter psi = FunctionParameter::custom(
      name.str(), [phi, theta, inv](double t) { return std::pow(t, theta) * phi(std::pow(t, inv)); },
      theta);
  return psi;
}

namespace {

// Guard against eta/zeta vanishing along the sample: the head/tail minima of
// the ratio must not show a decaying trend, and nothing may hit zero.
void check_reiterate_hypothesis(const FunctionParameter& zeta, const FunctionParameter& eta,
                                const FunctionParameter& chi, const ReiterateOptions& opts) {
  const std::vector<double> ts = geometric_grid(opts.t_min, opts.t_max, opts.samples);
  double head_min = std::numeric_limits<double>::infinity();
  double tail_min = std::numeric_limits<double>::infinity();
  double tail_min_t = ts.back();
  const double tail_start = opts.t_max / 100.0;
  for (double t : ts) {
    const double z = zeta(t);
    const double e = eta(t);
    const double c = chi(t);
    if (!(z > 0) || !std::isfinite(z))
      throw reiterate_hypothesis_error("reiterate: zeta not positive finite at t=" +
                                           std::to_string(t), t);
    if (!(c > 0) || !std::isfinite(c))
      throw reiterate_hypothesis_error("reiterate: chi not positive finite at t=" +
                                           std::to_string(t), t);
    if (!(e > 0) || !std::isfinite(e))
      throw reiterate_hypothesis_error("reiterate: eta not positive finite at t=" +
                                           std::to_string(t), t);
    const double ratio = e / z;
    if (ratio < 1e-8)
      throw reiterate_hypothesis_error(
          "reiterate: eta/zeta vanishes at t=" + std::to_string(t), t);
    if (t < tail_start) {
      head_min = std::min(head_min, ratio);
    } else if (ratio < tail_min) {
      tail_min = ratio;
      tail_min_t = t;
    }
  }
  if (tail_min < head_min / 100.0)
    throw reiterate_hypothesis_error(
        "reiterate: eta/zeta decays along the sample (tail min " + std::to_string(tail_min) +
            " at t=" + std::to_string(tail_min_t) + ")",
        tail_min_t);
}

}  // namespace

FunctionParameter reiterate(const FunctionParameter& zeta, const FunctionParameter& eta,
                            const FunctionParameter& chi, const ReiterateOptions& opts) {
  check_reiterate_hypothesis(zeta, eta, chi, opts);
  const double order = zeta.order() + chi.order() * (eta.order() - zeta.order());
  std::ostringstream name;
  name << "(" << zeta.label() << ")*(" << chi.label() << ")((" << eta.label() << ")/("
       << zeta.label() << "))";
  return FunctionParameter::custom(
      name.str(),
      [zeta, eta, chi](double t) {
        const double z = zeta(t);
        return z * chi(eta(t) / z);
      },
      order);
}

std::vector<double> geometric_grid(double t0, double t1, int n) {
  if (!(t0 > 0) || !(t1 > t0) || n < 2)
    throw std::invalid_argument("geometric_grid: need 0 < t0 < t1 and n >= 2");
  std::vector<double> ts(n);
  const double q = std::pow(t1 / t0, 1.0 / (n - 1));
  double t = t0;
  for (int i = 0; i < n; ++i, t *= q) ts[i] = t;
  ts.back() = t1;
  return ts;
}

namespace {

double parse_number(std::string_view text, const char* what) {
  std::size_t used = 0;
  double value = 0;
  try {
    value = std::stod(std::string(text), &used);
  } catch (const std::exception&) {
    throw std::invalid_argument(std::string("parse_param: bad ") + what + " '" +
                                std::string(text) + "'");
  }
  if (used != text.size())
    throw std::invalid_argument(std::string("parse_param: bad ") + what + " '" +
                                std::string(text) + "'");
  return value;
}

}  // namespace

FunctionParameter parse_param(std::string_view expr) {
  double theta = 0;
  std::vector<double> exponents;
  std::size_t pos = 0;
  if (expr.empty()) throw std::invalid_argument("parse_param: empty expression");
  while (pos < expr.size()) {
    std::size_t star = expr.find('*', pos);
    if (star == std::string_view::npos) star = expr.size();
    std::string_view factor = expr.substr(pos, star - pos);
    pos = star + 1;
    if (factor.empty()) throw std::invalid_argument("parse_param: empty factor");

    std::size_t caret = factor.find('^');
    std::string_view base = factor.substr(0, caret);
    double exponent = 1.0;
    if (caret != std::string_view::npos)
      exponent = parse_number(factor.substr(caret + 1), "exponent");

    if (base == "1") {
      if (caret != std::string_view::npos)
        throw std::invalid_argument("parse_param: '1' takes no exponent");
      continue;
    }
    if (base == "t") {
      theta += exponent;
      continue;
    }
    // "log", "loglog", "logloglog", ...
    int depth = 0;
    std::string_view rest = base;
    while (rest.substr(0, 3) == "log") {
      ++depth;
      rest = rest.substr(3);
    }
    if (depth == 0 || !rest.empty())
      throw std::invalid_argument("parse_param: unknown factor '" + std::string(factor) + "'");
    if (static_cast<std::size_t>(depth) > exponents.size()) exponents.resize(depth, 0.0);
    exponents[depth - 1] += exponent;
  }
  return FunctionParameter::power(theta, std::move(exponents));
}

std::string param_record(const FunctionParameter& phi) {
  std::ostringstream out;
  out.precision(17);
  switch (phi.kind()) {
    case ParamKind::LogPower:
      out << "kind=log-power";
      break;
    case ParamKind::PowerLog:
      out << "kind=power-log";
      break;
    case ParamKind::Custom:
      out << "kind=custom;label=" << phi.label();
      break;
  }
  out << ";order=" << phi.order() << ";exponents=";
  const auto& exps = phi.exponents();
  for (std::size_t i = 0; i < exps.size(); ++i) {
    if (i) out << ",";
    out << exps[i];
  }
  return out.str();
}

FunctionParameter parse_param_record(std::string_view record) {
  double order = 0;
  std::vector<double> exponents;
  std::string kind;
  std::size_t pos = 0;
  while (pos < record.size()) {
    std::size_t semi = record.find(';', pos);
    if (semi == std::string_view::npos) semi = record.size();
    std::string_view field = record.substr(pos, semi - pos);
    pos = semi + 1;
    const std::size_t eq = field.find('=');
    if (eq == std::string_view::npos)
      throw std::invalid_argument("parse_param_record: bad field '" + std::string(field) + "'");
    const std::string_view key = field.substr(0, eq);
    const std::string_view value = field.substr(eq + 1);
    if (key == "kind") {
      kind = std::string(value);
    } else if (key == "order") {
      order = parse_number(value, "order");
    } else if (key == "exponents") {
      std::size_t p = 0;
      while (p < value.size()) {
        std::size_t comma = value.find(',', p);
        if (comma == std::string_view::npos) comma = value.size();
        exponents.push_back(parse_number(value.substr(p, comma - p), "exponent"));
        p = comma + 1;
      }
    } else if (key == "label") {
      // informational only
    } else {
      throw std::invalid_argument("parse_param_record: unknown key '" + std::string(key) + "'");
    }
  }
  if (kind == "log-power") {
    if (order != 0.0)
      throw std::invalid_argument("parse_param_record: log-power must have order 0");
    return FunctionParameter::log_power(std::move(exponents));
  }
  if (kind == "power-log") return FunctionParameter::power(order, std::move(exponents));
  if (kind == "custom")
    throw std::invalid_argument("parse_param_record: custom parameters are not reconstructible");
  throw std::invalid_argument("parse_param_record: unknown kind '" + kind + "'");
}

VariationReport check_variation(const FunctionParameter& phi, std::span<const double> lambdas,
                                std::span<const double> t_grid,
                                const ToleranceSchedule& schedule) {
  if (t_grid.size() < 3) throw std::invalid_argument("check_variation: grid too short");
  for (std::size_t i = 0; i + 1 < t_grid.size(); ++i)
    if (!(t_grid[i + 1] > t_grid[i]))
      throw std::invalid_argument("check_variation: grid must be increasing");
  // Geometric within 5% wobble.
  const double q0 = t_grid[1] / t_grid[0];
  for (std::size_t i = 1; i + 1 < t_grid.size(); ++i) {
    const double q = t_grid[i + 1] / t_grid[i];
    if (q > q0 * 1.05 || q < q0 / 1.05)
      throw std::invalid_argument("check_variation: grid must be geometric");
  }

  double weight = schedule.weight_override;
  if (weight == 0.0) weight = phi.exponent_weight();
  if (phi.kind() == ParamKind::Custom && schedule.weight_override == 0.0) weight = 1.0;
  weight = std::max(weight, schedule.min_weight);

  VariationReport report;
  const std::size_t tail_begin =
      static_cast<std::size_t>(static_cast<double>(t_grid.size()) * (1.0 - schedule.tail_fraction));
  for (double lambda : lambdas) {
    if (!(lambda > 0)) throw std::invalid_argument("check_variation: lambda must be positive");
    VariationReport::Row row;
    row.lambda = lambda;
    const double target = std::pow(lambda, phi.order());
    for (std::size_t i = tail_begin; i < t_grid.size(); ++i) {
      const double t = t_grid[i];
      const double dev = std::abs(phi(lambda * t) / phi(t) - target);
      // The slowly varying drift enters multiplied by the power target.
      const double tol = schedule.c_mult * weight * target * std::abs(std::log(lambda)) /
                         std::max(std::log(t), 1.0);
      if (dev > row.max_dev) {
        row.max_dev = dev;
        row.worst_t = t;
      }
      if (tol > 0) row.max_dev_over_tol = std::max(row.max_dev_over_tol, dev / tol);
      if (dev > tol) row.pass = false;
    }
    report.pass = report.pass && row.pass;
    report.rows.push_back(row);
  }
  return report;
}

}  // namespace rscale
