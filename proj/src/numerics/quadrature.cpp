#include "cltlab/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <sstream>
#include <vector>

#include "cltlab/errors.hpp"

namespace cltlab {

std::string_view to_string(EstimateKind kind) {
  switch (kind) {
    case EstimateKind::monte_carlo: return "monte_carlo";
    case EstimateKind::quadrature: return "quadrature";
    case EstimateKind::closed_form: return "closed_form";
  }
  return "unknown";
}

void QuadratureSpec::validate() const {
  if (!(abs_tol > 0.0)) throw DomainError("QuadratureSpec: abs_tol must be > 0");
  if (!(rel_tol >= 0.0)) throw DomainError("QuadratureSpec: rel_tol must be >= 0");
  if (max_depth < 1) throw DomainError("QuadratureSpec: max_depth must be >= 1");
  if (!(truncation_radius > 0.0)) throw DomainError("QuadratureSpec: truncation_radius must be > 0");
}

QuadratureSpec QuadratureSpec::scaled(double factor) const {
  QuadratureSpec s = *this;
  s.abs_tol *= factor;
  s.rel_tol *= factor;
  return s;
}

namespace {

// Kronrod abscissae; odd indices (1, 3, 5) and the centre are the 7-point
// Gauss nodes.
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kTiny = std::numeric_limits<double>::min();

struct Segment {
  double a;
  double b;
  double value;
  double err;
  int depth;
  bool at_floor = false;  // error estimate is the roundoff floor; splitting cannot help
};

double checked_eval(const ScalarFunction& f, double x) {
  const double y = f(x);
  if (std::isnan(y)) {
    std::ostringstream os;
    os.precision(17);
    os << "integrand returned NaN at x = " << x;
    throw NumericalError(os.str());
  }
  return y;
}

Segment gauss_kronrod15(const ScalarFunction& f, double a, double b, int depth) {
  const double centr = 0.5 * (a + b);
  const double hlgth = 0.5 * (b - a);
  const double fc = checked_eval(f, centr);
  double resg = fc * kWg[3];
  double resk = fc * kWgk[7];
  double resabs = std::abs(resk);
  std::array<double, 7> fv1{};
  std::array<double, 7> fv2{};
  for (int j = 0; j < 7; ++j) {
    const double absc = hlgth * kXgk[j];
    const double f1 = checked_eval(f, centr - absc);
    const double f2 = checked_eval(f, centr + absc);
    fv1[j] = f1;
    fv2[j] = f2;
    resk += kWgk[j] * (f1 + f2);
    resabs += kWgk[j] * (std::abs(f1) + std::abs(f2));
    if (j % 2 == 1) resg += kWg[j / 2] * (f1 + f2);
  }
  const double reskh = resk * 0.5;
  double resasc = kWgk[7] * std::abs(fc - reskh);
  for (int j = 0; j < 7; ++j) {
    resasc += kWgk[j] * (std::abs(fv1[j] - reskh) + std::abs(fv2[j] - reskh));
  }
  const double result = resk * hlgth;
  resabs *= std::abs(hlgth);
  resasc *= std::abs(hlgth);
  double abserr = std::abs((resk - resg) * hlgth);
  if (resasc != 0.0 && abserr != 0.0) {
    abserr = resasc * std::min(1.0, std::pow(200.0 * abserr / resasc, 1.5));
  }
  bool at_floor = false;
  if (resabs > kTiny / (50.0 * kEps)) {
    const double floor = 50.0 * kEps * resabs;
    at_floor = floor >= abserr;
    abserr = std::max(floor, abserr);
  }
  if (!std::isfinite(result)) {
    std::ostringstream os;
    os << "non-finite quadrature sum on [" << a << ", " << b << "]";
    throw NumericalError(os.str());
  }
  return {a, b, result, abserr, depth, at_floor};
}

struct ByError {
  bool operator()(const Segment& lhs, const Segment& rhs) const { return lhs.err < rhs.err; }
};

constexpr std::size_t kMaxSegments = 20000;

}  // namespace

Estimate integrate_1d(const ScalarFunction& f, double a, double b, const QuadratureSpec& spec) {
  spec.validate();
  if (!(a < b)) throw DomainError("integrate_1d: requires a < b");
  if (!std::isfinite(a) || !std::isfinite(b)) throw DomainError("integrate_1d: bounds must be finite");

  std::priority_queue<Segment, std::vector<Segment>, ByError> open;
  double frozen_value = 0.0;  // segments that reached max_depth
  double frozen_err = 0.0;

  const Segment first = gauss_kronrod15(f, a, b, 0);
  open.push(first);
  double total_value = first.value;
  double total_err = first.err;

  Estimate best{total_value, total_err, EstimateKind::quadrature, false};
  std::size_t segments = 1;

  while (true) {
    const double tol = std::max(spec.abs_tol, spec.rel_tol * std::abs(total_value));
    if (total_err < best.err || (total_err == best.err && segments == 1)) {
      best.value = total_value;
      best.err = total_err;
    }
    if (total_err <= tol) {
      best.value = total_value;
      best.err = std::min(best.err, total_err);
      best.converged = true;
      return best;
    }
    if (open.empty() || segments >= kMaxSegments) break;

    const Segment worst = open.top();
    open.pop();
    if (worst.depth >= spec.max_depth || worst.at_floor) {
      frozen_value += worst.value;
      frozen_err += worst.err;
      continue;
    }
    const double mid = 0.5 * (worst.a + worst.b);
    const Segment left = gauss_kronrod15(f, worst.a, mid, worst.depth + 1);
    const Segment right = gauss_kronrod15(f, mid, worst.b, worst.depth + 1);
    open.push(left);
    open.push(right);
    ++segments;
    total_value += left.value + right.value - worst.value;
    total_err += left.err + right.err - worst.err;
    // Re-sum from scratch now and then so rounding in the running totals cannot drift.
    if (segments % 256 == 0) {
      total_value = frozen_value;
      total_err = frozen_err;
      auto copy = open;
      while (!copy.empty()) {
        total_value += copy.top().value;
        total_err += copy.top().err;
        copy.pop();
      }
    }
  }
  best.converged = false;
  return best;
}

Estimate integrate_semi_infinite(const ScalarFunction& f, double a, const QuadratureSpec& spec) {
  spec.validate();
  if (!std::isfinite(a)) throw DomainError("integrate_semi_infinite: a must be finite");

  const ScalarFunction mapped = [&f, a](double t) {
    const double one_minus = 1.0 - t;
    const double y = f(a + t / one_minus);
    if (y == 0.0) return 0.0;
    return y / (one_minus * one_minus);
  };
  try {
    const Estimate mapped_est = integrate_1d(mapped, 0.0, 1.0, spec);
    if (mapped_est.converged && std::isfinite(mapped_est.value)) return mapped_est;
  } catch (const DivergenceError&) {
    throw;
  } catch (const NumericalError&) {
    // the mapped integrand blew up near t = 1; the windowed pass decides
  }

  // Truncation fallback: watch partial integrals over doubling windows.
  const double radius = spec.truncation_radius;
  double lo = a;
  double hi = a + radius;
  double total = 0.0;
  double err = 0.0;
  bool all_converged = true;
  std::vector<double> increments;
  for (int k = 0; k < 40; ++k) {
    const Estimate piece = integrate_1d(f, lo, hi, spec);
    all_converged = all_converged && piece.converged;
    total += piece.value;
    err += piece.err;
    increments.push_back(std::abs(piece.value));

    const std::size_t m = increments.size();
    if (m >= 4) {
      const bool stalled = increments[m - 1] >= 0.9 * increments[m - 2] &&
                           increments[m - 2] >= 0.9 * increments[m - 3] &&
                           increments[m - 3] >= 0.9 * increments[m - 4] && increments[m - 1] > spec.abs_tol;
      if (stalled) {
        std::ostringstream os;
        os << "divergent integral: partial integrals over [" << a << ", " << hi
           << "] keep growing (last increment " << increments[m - 1] << ")";
        throw DivergenceError(os.str());
      }
    }
    if (m >= 2 && increments[m - 2] > 0.0) {
      const double ratio = increments[m - 1] / increments[m - 2];
      if (ratio < 1.0) {
        const double tail = increments[m - 1] * ratio / (1.0 - ratio);
        const double tol = std::max(spec.abs_tol, spec.rel_tol * std::abs(total));
        if (tail + err <= tol || increments[m - 1] == 0.0) {
          return {total, err + tail, EstimateKind::quadrature, all_converged};
        }
      }
    } else if (m >= 2 && increments[m - 1] == 0.0) {
      return {total, err, EstimateKind::quadrature, all_converged};
    }
    lo = hi;
    hi = a + (hi - a) * 2.0;
  }
  const double last = increments.back();
  return {total, err + last, EstimateKind::quadrature, false};
}

Estimate integrate_real_line(const ScalarFunction& f, const QuadratureSpec& spec, double center) {
  const QuadratureSpec half = spec.scaled(0.5);
  const Estimate right = integrate_semi_infinite(f, center, half);
  const ScalarFunction reflected = [&f, center](double s) { return f(2.0 * center - s); };
  const Estimate left = integrate_semi_infinite(reflected, center, half);
  return {left.value + right.value, left.err + right.err, EstimateKind::quadrature,
          left.converged && right.converged};
}

namespace {

struct NestedState {
  const std::function<double(std::span<const double>)>* f;
  std::vector<double> point;
  int d;
  bool converged = true;
};

Estimate integrate_level(NestedState& state, int level, const QuadratureSpec& spec) {
  if (level == state.d - 1) {
    const ScalarFunction inner = [&state, level](double x) {
      state.point[static_cast<std::size_t>(level)] = x;
      return (*state.f)(std::span<const double>(state.point));
    };
    Estimate e = integrate_real_line(inner, spec);
    state.converged = state.converged && e.converged;
    return e;
  }
  const QuadratureSpec inner_spec = spec.scaled(0.1);
  const ScalarFunction outer = [&state, level, &inner_spec](double x) {
    state.point[static_cast<std::size_t>(level)] = x;
    return integrate_level(state, level + 1, inner_spec).value;
  };
  Estimate e = integrate_real_line(outer, spec);
  state.converged = state.converged && e.converged;
  return e;
}

}  // namespace

Estimate integrate_nd(const std::function<double(std::span<const double>)>& f, int d,
                      const QuadratureSpec& spec) {
  if (d < 1) throw DomainError("integrate_nd: dimension must be >= 1");
  NestedState state{&f, std::vector<double>(static_cast<std::size_t>(d), 0.0), d};
  Estimate e = integrate_level(state, 0, spec);
  e.converged = state.converged;
  return e;
}

}  // namespace cltlab
