#pragma once

#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace rscale {

/// Kind of a function parameter on [1, +inf).
///
/// LogPower members form the closed reference family
///   phi(t) = l1(t)^r1 * l2(t)^r2 * ... * ln(t)^rn,
/// where lk is the k-fold iterated logarithm clamped below at 1, so every
/// member is positive, equals 1 at t = 1, and is slowly varying (order 0).
/// PowerLog multiplies such a factor by t^theta (regular variation of order
/// theta). Custom wraps a user callable with a declared variation order.
enum class ParamKind { LogPower, PowerLog, Custom };

class FunctionParameter {
 public:
  /// phi == 1.
  static FunctionParameter one();

  /// Slowly varying log-power member with the given iterated-log exponents.
  static FunctionParameter log_power(std::vector<double> exponents);

  /// t^theta, optionally times a log-power factor.
  static FunctionParameter power(double theta, std::vector<double> exponents = {});

  /// User-supplied evaluable with a declared variation order. The callable
  /// must be positive and finite on [1, +inf); values below t = 1 are clamped
  /// to the t = 1 value.
  static FunctionParameter custom(std::string label, std::function<double(double)> fn,
                                  double order);

  /// Evaluate at t > 0. Values for t < 1 follow the family clamping rule.
  double operator()(double t) const;

  double order() const { return order_; }
  ParamKind kind() const { return kind_; }
  bool is_class_m() const { return order_ == 0.0; }
  const std::vector<double>& exponents() const { return exponents_; }
  const std::string& label() const { return label_; }

  /// Sum of |r_k| for the log-power factor; used by variation tolerances.
  double exponent_weight() const;

  /// k-fold iterated logarithm clamped below at 1.
  static double iterated_log(double t, int depth);

 private:
  FunctionParameter(ParamKind kind, double order, std::vector<double> exponents,
                    std::function<double(double)> fn, std::string label);

  ParamKind kind_;
  double order_;
  std::vector<double> exponents_;
  std::function<double(double)> fn_;  // only for Custom
  std::string label_;
};

/// 1/phi for a class-M parameter. Throws std::invalid_argument when the
/// argument has nonzero declared order.
FunctionParameter reciprocal(const FunctionParameter& phi);

/// psi(t) = t^{eps/(eps+delta)} phi(t^{1/(eps+delta)}) for t >= 1 and
/// psi(t) = phi(1) for 0 < t < 1. The result is regularly varying of order
/// eps/(eps+delta) in (0, 1). Requires phi in class M and eps, delta > 0.
FunctionParameter make_theta_psi(const FunctionParameter& phi, double eps, double delta);

struct ReiterateOptions {
  double t_min = 1.0;
  double t_max = 1.099511627776e12;  // 2^40
  int samples = 97;
};

/// Thrown when the sampled reiteration hypothesis fails; carries the witness.
class reiterate_hypothesis_error : public std::runtime_error {
 public:
  reiterate_hypothesis_error(const std::string& what, double witness_t)
      : std::runtime_error(what), witness_t_(witness_t) {}
  double witness_t() const { return witness_t_; }

 private:
  double witness_t_;
};

/// psi(t) = zeta(t) * chi(eta(t)/zeta(t)), with values below t = 1 clamped to
/// the t = 1 value. The hypothesis (zeta, chi bounded away from 0 on sampled
/// tails, eta/zeta not vanishing) is checked on a geometric sample and a
/// violation is reported with the witnessing t.
FunctionParameter reiterate(const FunctionParameter& zeta, const FunctionParameter& eta,
                            const FunctionParameter& chi, const ReiterateOptions& opts = {});

struct ToleranceSchedule {
  double c_mult = 1.2;
  double min_weight = 0.25;
  double weight_override = 0.0;  // 0 = derive from the family exponents
  double tail_fraction = 0.5;    // portion of the grid treated as the tail
};

struct VariationReport {
  struct Row {
    double lambda = 0;
    double max_dev = 0;       // max |phi(lambda t)/phi(t) - lambda^order| on the tail
    double max_dev_over_tol = 0;
    double worst_t = 0;
    bool pass = true;
  };
  std::vector<Row> rows;
  bool pass = true;
};

/// Numerical regular-variation check of phi(lambda t)/phi(t) -> lambda^order
/// along a geometric grid, against the schedule tolerance c * |log lambda| /
/// log t. Report-only: never throws on failure.
VariationReport check_variation(const FunctionParameter& phi, std::span<const double> lambdas,
                                std::span<const double> t_grid,
                                const ToleranceSchedule& schedule = {});

/// Geometric grid helper: n points from t0 to t1 inclusive.
std::vector<double> geometric_grid(double t0, double t1, int n);

/// Parse an inline parameter expression: "1", "log", "log^1.5", "loglog^-2",
/// "t^0.25", or '*'-separated products such as "t^0.25*log^1" and
/// "log*loglog".
FunctionParameter parse_param(std::string_view expr);

/// Structured text record {kind; order; exponents} for the closed families.
std::string param_record(const FunctionParameter& phi);
FunctionParameter parse_param_record(std::string_view record);

}  // namespace rscale
