#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace satnls {

/// Parameters of the saturable prototype f(x,s) = V(x) s^a / (1 + s^a),
/// V(x) = (1 + x^2)^(-b/2).
struct PrototypeParams {
  double b = 0.5;
  double alpha = 1.0;

  /// Returns the first violated inequality, or nothing if admissible.
  std::optional<std::string> violation() const;
};

/// A nonlinearity f(x, s) with s = |psi|^2 together with its partial
/// derivatives, its antiderivative in s and its saturation profile.
///
/// All callables must be pure; the model is shared read-only across threads.
struct NonlinearityModel {
  using Fn2 = std::function<double(double, double)>;
  using Fn1 = std::function<double(double)>;

  Fn2 f;
  Fn2 d1f;    // df/dx
  Fn2 d2f;    // df/ds
  Fn2 Fanti;  // int_0^s f(x, t) dt
  Fn2 d1Fanti;  // d/dx Fanti; optional, numerically differentiated if empty
  Fn1 finf;   // lim_{s->inf} f(x, s)
  double M = 0.0;  // sup f

  std::string name = "custom";
  std::optional<PrototypeParams> prototype;

  double dx_Fanti(double x, double s) const;
};

/// Builds the prototype; throws DomainError naming the violated inequality.
NonlinearityModel make_prototype(const PrototypeParams& params);

/// Same closed forms without the parameter check. Used to audit
/// inadmissible parameter sets.
NonlinearityModel make_prototype_unchecked(const PrototypeParams& params);

/// rho(x) = x V'(x) / V(x) for the prototype potential.
double prototype_rho(double b, double x);

/// zeta(x, s) = (2 f + x d1f) / (d2f s) - 1.
/// Throws DomainError when d2f(x, s) <= 0.
double zeta(const NonlinearityModel& model, double x, double s);

struct AuditGrid {
  std::vector<double> x;  // x >= 0
  std::vector<double> s;  // s > 0

  /// x in logspace(1e-3, 1e3, 200) plus {0}, s in logspace(1e-6, 1e6, 200).
  static AuditGrid defaults();
};

struct AuditEntry {
  std::string assumption;  // e.g. "(A5)"
  std::string description;
  bool pass = true;
  double worst_value = 0.0;  // value of the offending (or extremal) quantity
  double worst_x = 0.0;
  double worst_s = 0.0;
  std::string detail;
};

struct AuditReport {
  std::vector<AuditEntry> entries;

  bool all_pass() const;
  const AuditEntry* find(const std::string& assumption) const;
};

/// Evaluates the structural hypotheses (A0), (AL), (A4)-(A7), (H) on the
/// sample grid. Failures are report entries, never exceptions.
AuditReport audit_assumptions(const NonlinearityModel& model, const AuditGrid& grid);

/// Audit of a prototype parameter set, including the parameter
/// inequalities that stand in for (A2)/(A3).
AuditReport audit_prototype(const PrototypeParams& params, const AuditGrid& grid);

}  // namespace satnls
