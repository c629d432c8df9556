#include "satnls/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <boost/math/special_functions/beta.hpp>

#include "satnls/error.hpp"

namespace satnls {

namespace {

// G(s) = int_0^s t^a / (1 + t^a) dt
double saturation_antiderivative(double alpha, double s) {
  if (s <= 0.0) return 0.0;
  const double sa = std::pow(s, alpha);
  if (sa <= 0.5) {
    // alternating series in s^a, converges geometrically
    double term = s * sa;
    double sum = 0.0;
    for (int n = 1; n < 200; ++n) {
      const double add = term / (n * alpha + 1.0);
      sum += (n % 2 == 1) ? add : -add;
      if (std::abs(add) <= 1e-18 * std::abs(sum)) break;
      term *= sa;
    }
    return sum;
  }
  if (alpha == 1.0) return s - std::log1p(s);
  // int_0^s dt / (1 + t^a) = B(T; 1/a, 1 - 1/a) / a with T = s^a / (1 + s^a)
  const double T = sa / (1.0 + sa);
  const double inv = 1.0 / alpha;
  return s - inv * boost::math::beta(inv, 1.0 - inv, T);
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

}  // namespace

std::optional<std::string> PrototypeParams::violation() const {
  if (!std::isfinite(b) || !std::isfinite(alpha))
    return "non-finite parameter (b = " + fmt(b) + ", alpha = " + fmt(alpha) + ")";
  if (!(b > 0.0 && b < 1.0)) return "b = " + fmt(b) + " violates (b ∈ (0,1))";
  if (!(alpha >= 1.0)) return "alpha = " + fmt(alpha) + " violates 1 ≤ α";
  if (!(alpha < 2.0 - b))
    return "alpha = " + fmt(alpha) + " violates α < 2 − b (2 − b = " + fmt(2.0 - b) + ")";
  return std::nullopt;
}

double NonlinearityModel::dx_Fanti(double x, double s) const {
  if (d1Fanti) return d1Fanti(x, s);
  const double step = 1e-5 * (1.0 + std::abs(x));
  return (Fanti(x + step, s) - Fanti(x - step, s)) / (2.0 * step);
}

double prototype_rho(double b, double x) { return -b * x * x / (1.0 + x * x); }

NonlinearityModel make_prototype_unchecked(const PrototypeParams& params) {
  const double b = params.b;
  const double a = params.alpha;
  auto V = [b](double x) { return std::pow(1.0 + x * x, -0.5 * b); };
  auto dV = [b](double x) { return -b * x * std::pow(1.0 + x * x, -0.5 * b - 1.0); };

  NonlinearityModel m;
  m.f = [=](double x, double s) {
    const double sa = std::pow(s, a);
    return V(x) * sa / (1.0 + sa);
  };
  m.d1f = [=](double x, double s) {
    const double sa = std::pow(s, a);
    return dV(x) * sa / (1.0 + sa);
  };
  m.d2f = [=](double x, double s) {
    const double sa = std::pow(s, a);
    const double den = 1.0 + sa;
    return V(x) * a * std::pow(s, a - 1.0) / (den * den);
  };
  m.Fanti = [=](double x, double s) { return V(x) * saturation_antiderivative(a, s); };
  m.d1Fanti = [=](double x, double s) { return dV(x) * saturation_antiderivative(a, s); };
  m.finf = V;
  m.M = 1.0;
  m.name = "prototype";
  m.prototype = params;
  return m;
}

NonlinearityModel make_prototype(const PrototypeParams& params) {
  if (auto v = params.violation()) throw DomainError(*v);
  return make_prototype_unchecked(params);
}

double zeta(const NonlinearityModel& model, double x, double s) {
  const double d2 = model.d2f(x, s);
  if (!(d2 > 0.0)) {
    throw DomainError("zeta: d2f(" + fmt(x) + ", " + fmt(s) + ") = " + fmt(d2) +
                      " is not positive (monotonicity violation)");
  }
  return (2.0 * model.f(x, s) + x * model.d1f(x, s)) / (d2 * s) - 1.0;
}

AuditGrid AuditGrid::defaults() {
  AuditGrid g;
  g.x.push_back(0.0);
  for (int i = 0; i < 200; ++i) g.x.push_back(std::pow(10.0, -3.0 + 6.0 * i / 199.0));
  for (int i = 0; i < 200; ++i) g.s.push_back(std::pow(10.0, -6.0 + 12.0 * i / 199.0));
  return g;
}

bool AuditReport::all_pass() const {
  return std::all_of(entries.begin(), entries.end(), [](const AuditEntry& e) { return e.pass; });
}

const AuditEntry* AuditReport::find(const std::string& assumption) const {
  for (const auto& e : entries)
    if (e.assumption == assumption) return &e;
  return nullptr;
}

namespace {

// relative slack for monotonicity comparisons of computed quantities
constexpr double kMonotoneSlack = 1e-12;

struct Worst {
  double value = 0.0, x = 0.0, s = 0.0;
  bool set = false;
  void offer(double v, double xx, double ss, bool larger_is_worse) {
    if (!set || (larger_is_worse ? v > value : v < value)) {
      value = v;
      x = xx;
      s = ss;
      set = true;
    }
  }
};

AuditEntry make_entry(std::string a, std::string d, bool pass, const Worst& w, std::string detail) {
  AuditEntry e;
  e.assumption = std::move(a);
  e.description = std::move(d);
  e.pass = pass;
  e.worst_value = w.value;
  e.worst_x = w.x;
  e.worst_s = w.s;
  e.detail = std::move(detail);
  return e;
}

}  // namespace

AuditReport audit_assumptions(const NonlinearityModel& m, const AuditGrid& grid) {
  AuditReport rep;
  const auto& xs = grid.x;
  const auto& ss = grid.s;
  const double s_min = *std::min_element(ss.begin(), ss.end());
  const double s_max = *std::max_element(ss.begin(), ss.end());
  const double x_max = *std::max_element(xs.begin(), xs.end());
  const double x_min = *std::min_element(xs.begin(), xs.end());

  double fsup = 0.0;
  for (double x : xs)
    for (double s : ss) fsup = std::max(fsup, m.f(x, s));

  // (A0): f(x,0) = 0, f -> 0 uniformly as s -> 0 and as |x| -> inf
  {
    Worst w;
    bool zero_ok = true;
    for (double x : xs) {
      const double v = std::abs(m.f(x, 0.0));
      w.offer(v, x, 0.0, true);
      if (v != 0.0) zero_ok = false;
    }
    double small_s = 0.0;
    for (double x : xs) small_s = std::max(small_s, std::abs(m.f(x, s_min)));
    double sup_near = 0.0, sup_far = 0.0;
    for (double s : ss) {
      sup_near = std::max(sup_near, m.f(x_min, s));
      sup_far = std::max(sup_far, m.f(x_max, s));
    }
    bool tail_ok = sup_far < sup_near;
    double prev = std::numeric_limits<double>::infinity();
    std::vector<double> sorted = xs;
    std::sort(sorted.begin(), sorted.end());
    for (double x : sorted) {
      double sup = 0.0;
      for (double s : ss) sup = std::max(sup, m.f(x, s));
      if (sup > prev * (1.0 + kMonotoneSlack)) tail_ok = false;
      prev = sup;
    }
    const bool small_ok = small_s <= 1e-4 * std::max(fsup, 1e-300);
    std::string detail = "max|f(x,0)| = " + fmt(w.value) + "; sup_x f(x," + fmt(s_min) +
                         ") = " + fmt(small_s) + "; sup_s f(" + fmt(x_max) + ",s) = " + fmt(sup_far) +
                         " vs sup_s f(" + fmt(x_min) + ",s) = " + fmt(sup_near);
    rep.entries.push_back(make_entry("(A0)", "f(x,0)=0, f->0 as s->0 and as |x|->inf",
                                     zero_ok && small_ok && tail_ok, w, detail));
  }

  // (AL): f(x,s) -> finf(x) uniformly as s -> inf
  {
    Worst w;
    for (double x : xs) w.offer(std::abs(m.f(x, s_max) - m.finf(x)), x, s_max, true);
    const bool ok = w.value <= 1e-4 * std::max(m.M, 1e-300);
    rep.entries.push_back(make_entry("(AL)", "f(x,s) -> finf(x) uniformly as s -> inf", ok, w,
                                     "sup_x |f(x,s_max) - finf(x)| = " + fmt(w.value)));
  }

  // 0 <= f <= finf <= M
  {
    Worst w;
    bool ok = true;
    for (double x : xs) {
      const double fi = m.finf(x);
      if (fi > m.M * (1.0 + kMonotoneSlack)) {
        ok = false;
        w.offer(fi - m.M, x, 0.0, true);
      }
      for (double s : ss) {
        const double v = m.f(x, s);
        if (v < 0.0 || v > fi * (1.0 + kMonotoneSlack)) {
          ok = false;
          w.offer(std::max(-v, v - fi), x, s, true);
        }
      }
    }
    rep.entries.push_back(make_entry("(fbounded)", "0 <= f(x,s) <= finf(x) <= M", ok, w,
                                     ok ? "bounds hold on grid" : "bound violated"));
  }

  // (A4): evenness in x
  {
    Worst w;
    for (double x : xs)
      for (double s : ss) {
        const double a = m.f(x, s), b = m.f(-x, s);
        w.offer(std::abs(a - b) / std::max(std::abs(a), 1e-300), x, s, true);
      }
    const bool ok = w.value <= 1e-14;
    rep.entries.push_back(make_entry("(A4)", "f(-x,s) = f(x,s)", ok, w,
                                     "max relative asymmetry " + fmt(w.value)));
  }

  // (A5): d1f < 0 and d2f > 0 for x, s > 0
  {
    Worst w1, w2;
    for (double x : xs) {
      if (x <= 0.0) continue;
      for (double s : ss) {
        w1.offer(m.d1f(x, s), x, s, true);   // largest d1f
        w2.offer(m.d2f(x, s), x, s, false);  // smallest d2f
      }
    }
    const bool ok1 = w1.value < 0.0, ok2 = w2.value > 0.0;
    const Worst& w = !ok1 ? w1 : w2;
    std::string detail = "max d1f = " + fmt(w1.value) + " at (" + fmt(w1.x) + "," + fmt(w1.s) +
                         "); min d2f = " + fmt(w2.value) + " at (" + fmt(w2.x) + "," + fmt(w2.s) + ")";
    rep.entries.push_back(make_entry("(A5)", "d1f < 0 and d2f > 0 for x, s > 0", ok1 && ok2, w, detail));
  }

  // (A6): d1f, d2f bounded; equicontinuity audited as boundedness of d2f near s -> 0
  {
    Worst w;
    bool ok = true;
    for (double x : xs)
      for (double s : ss) {
        const double a = m.d1f(x, s), b = m.d2f(x, s);
        if (!std::isfinite(a) || !std::isfinite(b)) ok = false;
        w.offer(std::max(std::abs(a), std::abs(b)), x, s, true);
      }
    // log-log slope of sup_x d2f between the two smallest s samples
    std::vector<double> sorted = ss;
    std::sort(sorted.begin(), sorted.end());
    double slope = 0.0;
    if (sorted.size() >= 2) {
      double sup0 = 0.0, sup1 = 0.0;
      for (double x : xs) {
        sup0 = std::max(sup0, std::abs(m.d2f(x, sorted[0])));
        sup1 = std::max(sup1, std::abs(m.d2f(x, sorted[1])));
      }
      if (sup0 > 0.0 && sup1 > 0.0)
        slope = std::log(sup1 / sup0) / std::log(sorted[1] / sorted[0]);
    }
    if (slope < -1e-3) ok = false;
    rep.entries.push_back(make_entry("(A6)", "d1f, d2f bounded (d2f bounded as s -> 0)", ok, w,
                                     "sup |d1f|,|d2f| = " + fmt(w.value) +
                                         "; log-slope of sup d2f at s->0 = " + fmt(slope)));
  }

  // (A7): finf(0) > lim finf, finf non-increasing on [0, inf)
  {
    Worst w;
    const double f0 = m.finf(0.0), ftail = m.finf(x_max);
    std::vector<double> sorted = xs;
    std::sort(sorted.begin(), sorted.end());
    bool mono = true;
    for (std::size_t i = 1; i < sorted.size(); ++i) {
      const double a = m.finf(sorted[i - 1]), b = m.finf(sorted[i]);
      if (b > a * (1.0 + kMonotoneSlack)) {
        mono = false;
        w.offer(b - a, sorted[i], 0.0, true);
      }
    }
    if (!w.set) w.offer(ftail, x_max, 0.0, true);
    rep.entries.push_back(make_entry("(A7)", "finf(0) > lim_{|x|->inf} finf(x)", f0 > ftail && mono, w,
                                     "finf(0) = " + fmt(f0) + ", finf(" + fmt(x_max) + ") = " + fmt(ftail)));
  }

  // (H): zeta positive, non-increasing in x, non-decreasing in s
  {
    Worst w;
    bool ok = true;
    std::string why = "zeta > 0 and monotone on grid";
    std::vector<double> px, ps;
    for (double x : xs)
      if (x > 0.0) px.push_back(x);
    ps = ss;
    std::sort(px.begin(), px.end());
    std::sort(ps.begin(), ps.end());
    std::vector<double> z(px.size() * ps.size());
    for (std::size_t i = 0; i < px.size(); ++i)
      for (std::size_t j = 0; j < ps.size(); ++j) {
        const double d2 = m.d2f(px[i], ps[j]);
        double v = d2 > 0.0 ? (2.0 * m.f(px[i], ps[j]) + px[i] * m.d1f(px[i], ps[j])) / (d2 * ps[j]) - 1.0
                            : -std::numeric_limits<double>::infinity();
        z[i * ps.size() + j] = v;
        w.offer(v, px[i], ps[j], false);
        if (!(v > 0.0)) {
          ok = false;
          why = "zeta not positive";
        }
      }
    for (std::size_t i = 0; i < px.size(); ++i)
      for (std::size_t j = 0; j < ps.size(); ++j) {
        const double v = z[i * ps.size() + j];
        const double slack = kMonotoneSlack * std::abs(v) + 1e-300;
        if (i + 1 < px.size() && z[(i + 1) * ps.size() + j] > v + slack) {
          ok = false;
          why = "zeta increases in x at x = " + fmt(px[i + 1]) + ", s = " + fmt(ps[j]);
        }
        if (j + 1 < ps.size() && z[i * ps.size() + j + 1] < v - slack) {
          ok = false;
          why = "zeta decreases in s at x = " + fmt(px[i]) + ", s = " + fmt(ps[j + 1]);
        }
      }
    rep.entries.push_back(make_entry("(H)", "zeta > 0, non-increasing in x and in decreasing s", ok, w,
                                     why + "; min zeta = " + fmt(w.value)));
  }
  return rep;
}

AuditReport audit_prototype(const PrototypeParams& params, const AuditGrid& grid) {
  AuditReport rep;
  Worst none;
  const bool b_ok = params.b > 0.0 && params.b < 1.0;
  const bool a_lo = params.alpha >= 1.0;
  const bool a_hi = params.alpha < 2.0 - params.b;
  none.value = params.b;
  rep.entries.push_back(make_entry("(b ∈ (0,1))", "decay exponent of V, required by (A2)/(A3)", b_ok, none,
                                   "b = " + fmt(params.b)));
  none.value = params.alpha;
  rep.entries.push_back(make_entry("1 ≤ α", "saturation exponent lower bound", a_lo, none,
                                   "alpha = " + fmt(params.alpha)));
  rep.entries.push_back(make_entry("α < 2 − b", "p = 2α+1 < 5 − 2b, (A2) and (H) positivity", a_hi, none,
                                   "alpha = " + fmt(params.alpha) + ", 2 − b = " + fmt(2.0 - params.b)));
  auto rest = audit_assumptions(make_prototype_unchecked(params), grid);
  rep.entries.insert(rep.entries.end(), rest.entries.begin(), rest.entries.end());
  return rep;
}

}  // namespace satnls
