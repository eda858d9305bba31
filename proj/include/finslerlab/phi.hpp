#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <sstream>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include "finslerlab/errors.hpp"
#include "finslerlab/jet.hpp"

namespace finslerlab {

namespace family {

/// phi(s) = s^{-m}, the generalized m-Kropina metric F = alpha^{m+1} / beta^m.
struct Kropina {
  double m;
};

/// phi(s) = 1 + s.
struct Randers {};

/// phi(s) = sum_k coeffs[k] s^k.
struct Polynomial {
  std::vector<double> coeffs;
};

/// User-supplied phi. `derivatives(s)` returns (phi, phi', phi'', phi''') at s.
struct Custom {
  std::string name;
  std::function<std::array<long double, 4>(long double)> derivatives;
};

}  // namespace family

inline bool is_integer_valued(double x) { return std::floor(x) == x; }

/// A metric family phi(s) that can be evaluated on jets up to order 3.
class PhiModel {
 public:
  using Family = std::variant<family::Kropina, family::Randers, family::Polynomial, family::Custom>;

  explicit PhiModel(Family f) : family_(std::move(f)) {
    if (const auto* k = std::get_if<family::Kropina>(&family_)) {
      if (k->m == -1.0 || k->m == 0.0 || k->m == 1.0)
        throw InputError("kropina: m must not be -1, 0 or 1");
      if (!std::isfinite(k->m)) throw InputError("kropina: m must be finite");
    }
    if (const auto* p = std::get_if<family::Polynomial>(&family_))
      if (p->coeffs.empty()) throw InputError("polynomial: empty coefficient list");
    if (const auto* c = std::get_if<family::Custom>(&family_))
      if (!c->derivatives) throw InputError("custom: no derivative callback");
  }

  static PhiModel kropina(double m) { return PhiModel(family::Kropina{m}); }
  static PhiModel randers() { return PhiModel(family::Randers{}); }
  static PhiModel polynomial(std::vector<double> coeffs) {
    return PhiModel(family::Polynomial{std::move(coeffs)});
  }
  static PhiModel riemannian() { return polynomial({1.0}); }

  const Family& family() const { return family_; }

  bool is_kropina() const { return std::holds_alternative<family::Kropina>(family_); }
  double kropina_m() const { return std::get<family::Kropina>(family_).m; }

  /// Families with phi(0) undefined.
  bool is_singular() const { return is_kropina(); }

  /// True if s is a point where phi is real and defined.
  bool in_domain(double s) const {
    if (const auto* k = std::get_if<family::Kropina>(&family_)) {
      if (s == 0.0) return false;
      if (s < 0.0 && !is_integer_valued(k->m)) return false;
    }
    return true;
  }

  std::string describe() const {
    std::ostringstream os;
    os.precision(9);
    std::visit(
        [&](const auto& f) {
          using F = std::decay_t<decltype(f)>;
          if constexpr (std::is_same_v<F, family::Kropina>) {
            os << "kropina m=" << f.m;
          } else if constexpr (std::is_same_v<F, family::Randers>) {
            os << "randers";
          } else if constexpr (std::is_same_v<F, family::Polynomial>) {
            os << "polynomial [";
            for (std::size_t i = 0; i < f.coeffs.size(); ++i) os << (i ? ", " : "") << f.coeffs[i];
            os << ']';
          } else {
            os << "custom " << f.name;
          }
        },
        family_);
    return os.str();
  }

  /// phi evaluated on the independent variable seeded at s, to order K.
  template <int K, class T>
  Jet<K, T> jet(T s) const {
    static_assert(K <= 3, "phi models expose derivatives up to order 3");
    return std::visit(
        [&](const auto& f) -> Jet<K, T> {
          using F = std::decay_t<decltype(f)>;
          const auto x = Jet<K, T>::variable(s);
          if constexpr (std::is_same_v<F, family::Kropina>) {
            if (s == T(0)) throw SingularityError("kropina: phi(s) = s^-m is singular at s = 0");
            if (s < T(0) && !is_integer_valued(f.m))
              throw DomainError("kropina: s^-m is not real for s < 0 and non-integer m");
            return pow(x, -f.m);
          } else if constexpr (std::is_same_v<F, family::Randers>) {
            return Jet<K, T>(T(1)) + x;
          } else if constexpr (std::is_same_v<F, family::Polynomial>) {
            Jet<K, T> acc(static_cast<T>(f.coeffs.back()));
            for (std::size_t i = f.coeffs.size() - 1; i-- > 0;)
              acc = acc * x + Jet<K, T>(static_cast<T>(f.coeffs[i]));
            return acc;
          } else {
            const auto d = f.derivatives(static_cast<long double>(s));
            std::array<T, K + 1> out{};
            for (int k = 0; k <= K; ++k) out[k] = static_cast<T>(d[k]);
            return Jet<K, T>::from_derivatives(out);
          }
        },
        family_);
  }

  double value(double s) const { return jet<0>(s).val(); }

 private:
  Family family_;
};

/// (phi, phi', phi'') at s.
inline Jet2 phi_jet(const PhiModel& model, double s) { return model.jet<2>(s); }

// ---------------------------------------------------------------------------
// Validity of F = alpha phi(beta/alpha)

enum class ValidityVerdict { pass, fail, singular, domain_restricted };

inline const char* to_string(ValidityVerdict v) {
  switch (v) {
    case ValidityVerdict::pass: return "pass";
    case ValidityVerdict::fail: return "fail";
    case ValidityVerdict::singular: return "singular";
    case ValidityVerdict::domain_restricted: return "domain-restricted";
  }
  return "?";
}

struct ValidityPoint {
  double s;
  bool evaluated;  // false where phi is undefined at s
  double phi;
  double condition;  // phi - s phi' + (b^2 - s^2) phi''
  bool passed;
};

struct ValidityReport {
  std::vector<ValidityPoint> points;
  ValidityVerdict verdict;

  bool all_evaluated_points_pass() const {
    for (const auto& p : points)
      if (p.evaluated && !p.passed) return false;
    return true;
  }
};

/// 201 uniform points on [-b, b], or on (0, b] for Kropina.
inline std::vector<double> default_validity_grid(const PhiModel& model, double b,
                                                 int count = 201) {
  std::vector<double> grid;
  grid.reserve(count);
  if (model.is_singular()) {
    for (int i = 1; i <= count; ++i) grid.push_back(b * i / count);
  } else {
    for (int i = 0; i < count; ++i) grid.push_back(-b + 2.0 * b * i / (count - 1));
  }
  return grid;
}

/// Pointwise check of phi > 0 and phi - s phi' + (b^2 - s^2) phi'' > 0.
inline ValidityReport validity_check(const PhiModel& model, double b,
                                     const std::vector<double>& grid) {
  if (!(b > 0.0 && b < 1.0)) throw InputError("validity_check: need 0 < b < 1");
  if (grid.empty()) throw InputError("validity_check: empty grid");

  ValidityReport report{{}, ValidityVerdict::pass};
  bool has_neg = false, has_pos = false, has_zero = false, has_undefined = false;
  for (double s : grid) {
    has_neg |= s < 0.0;
    has_pos |= s > 0.0;
    has_zero |= s == 0.0;
    if (!model.in_domain(s)) {
      has_undefined = true;
      report.points.push_back({s, false, 0.0, 0.0, false});
      continue;
    }
    const Jet2 f = phi_jet(model, s);
    const double cond = f.val() - s * f.d1() + (b * b - s * s) * f.d2();
    report.points.push_back({s, true, f.val(), cond, f.val() > 0.0 && cond > 0.0});
  }

  if (model.is_singular() && (has_zero || (has_neg && has_pos))) {
    report.verdict = ValidityVerdict::singular;
  } else if (has_undefined) {
    report.verdict = ValidityVerdict::domain_restricted;
  } else {
    report.verdict =
        report.all_evaluated_points_pass() ? ValidityVerdict::pass : ValidityVerdict::fail;
  }
  return report;
}

// ---------------------------------------------------------------------------
// Q, Delta, Phi, psi

template <class T = double>
struct AlphaBetaScalars {
  T s;
  T b2;
  int n;
  T Q, Qp, Qpp;
  T Delta;
  T Phi;
  T psi;
};

/// (sQ' - Q)(1 + n Delta + sQ) - (b^2 - s^2)(1 + sQ) Q''
template <class T>
T phi_bracket_form(T s, T b2, int n, T Q, T Qp, T Qpp, T Delta) {
  return (s * Qp - Q) * (T(1) + T(n) * Delta + s * Q) - (b2 - s * s) * (T(1) + s * Q) * Qpp;
}

/// -(Q - sQ')(1 + n Delta + sQ) - (b^2 - s^2)(1 + sQ) Q'', the same quantity written
/// with the leading factor negated.
template <class T>
T phi_negated_form(T s, T b2, int n, T Q, T Qp, T Qpp, T Delta) {
  return -(Q - s * Qp) * (T(1) + T(n) * Delta + s * Q) - (b2 - s * s) * (T(1) + s * Q) * Qpp;
}

/// Q = phi'/(phi - s phi') and its first two derivatives by jet propagation,
/// then Delta, Phi, psi from their defining expressions.
template <class T = double>
AlphaBetaScalars<T> ab_scalars_generic(const PhiModel& model, T s, T b2, int n) {
  const Jet<3, T> phi3 = model.jet<3>(s);
  const Jet<2, T> phi = phi3.template truncated<2>();
  const Jet<2, T> dphi = phi3.differentiated();
  const Jet<2, T> var = Jet<2, T>::variable(s);
  const Jet<2, T> denom = phi - var * dphi;

  using std::abs;
  if (abs(denom.val()) < T(1e-14) * abs(phi.val()) || denom.val() == T(0))
    throw DegenerateMetricError("phi - s phi' vanishes: Q is undefined");

  const Jet<2, T> q = dphi / denom;
  AlphaBetaScalars<T> out{};
  out.s = s;
  out.b2 = b2;
  out.n = n;
  out.Q = q.val();
  out.Qp = q.d1();
  out.Qpp = q.d2();
  out.Delta = T(1) + s * out.Q + (b2 - s * s) * out.Qp;
  out.Phi = phi_bracket_form(s, b2, n, out.Q, out.Qp, out.Qpp, out.Delta);
  const T alt = phi_negated_form(s, b2, n, out.Q, out.Qp, out.Qpp, out.Delta);
  if (!(out.Phi == alt) && !(out.Phi != out.Phi))
    throw std::logic_error("the two expressions for Phi disagree");
  out.psi = out.Qp / (T(2) * out.Delta);
  return out;
}

/// Closed forms for phi(s) = s^{-m}.
template <class T = double>
AlphaBetaScalars<T> ab_scalars_kropina(double m, T s, T b2, int n) {
  if (m == -1.0 || m == 0.0 || m == 1.0) throw InputError("kropina: m must not be -1, 0 or 1");
  if (s == T(0)) throw SingularityError("kropina: s = 0 is singular");
  const T mm = static_cast<T>(m);
  const T nn = T(n);
  const T s2 = s * s;
  AlphaBetaScalars<T> out{};
  out.s = s;
  out.b2 = b2;
  out.n = n;
  out.Q = -mm / (s * (T(1) + mm));
  out.Qp = (mm / (T(1) + mm)) / s2;
  out.Qpp = (T(-2) * mm / (T(1) + mm)) / (s2 * s);
  out.Delta = ((T(1) - mm) * s2 + b2 * mm) / ((T(1) + mm) * s2);
  out.Phi = (T(2) * mm / ((T(1) + mm) * (T(1) + mm) * s2 * s)) *
            ((nn - nn * mm) * s2 + (nn * mm + T(1)) * b2);
  out.psi = out.Qp / (T(2) * out.Delta);
  return out;
}

}  // namespace finslerlab
