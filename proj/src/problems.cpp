#include "tfdg/problems.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <type_traits>

#include "tfdg/config.hpp"
#include "tfdg/errors.hpp"
#include "tfdg/fractional.hpp"
#include "tfdg/quadrature.hpp"

namespace tfdg {

double Polynomial::operator()(double x) const {
  double s = 0.0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) s = s * x + *it;
  return s;
}

Polynomial Polynomial::derivative() const {
  Polynomial d;
  for (std::size_t i = 1; i < coeffs.size(); ++i) d.coeffs.push_back(static_cast<double>(i) * coeffs[i]);
  return d;
}

double PowerSeries::value(double alpha, double t) const {
  double s = 0.0;
  for (const auto& term : terms) {
    const double e = term.exponent(alpha);
    s += term.coeff * (e == 0.0 ? 1.0 : std::pow(t, e));
  }
  return s;
}

double PowerSeries::caputo(double alpha, double t) const {
  double s = 0.0;
  for (const auto& term : terms) {
    const double e = term.exponent(alpha);
    if (e != 0.0) s += term.coeff * caputo_power(alpha, e, t);
  }
  return s;
}

namespace {

double trig_value(Trig trig, double x, int order) {
  switch (trig) {
    case Trig::none:
      return order == 0 ? 1.0 : 0.0;
    case Trig::sin:
      switch (order) {
        case 0: return std::sin(x);
        case 1: return std::cos(x);
        default: return -std::sin(x);
      }
    case Trig::cos:
      switch (order) {
        case 0: return std::cos(x);
        case 1: return -std::sin(x);
        default: return -std::cos(x);
      }
  }
  return 0.0;
}

}  // namespace

double SeparableProfile::value(double y) const { return poly(y) * trig_value(trig, freq * y, 0); }

double SeparableProfile::d1(double y) const {
  const double x = freq * y;
  return poly.derivative()(y) * trig_value(trig, x, 0) + poly(y) * freq * trig_value(trig, x, 1);
}

double SeparableProfile::d2(double y) const {
  const double x = freq * y;
  const Polynomial dp = poly.derivative();
  return dp.derivative()(y) * trig_value(trig, x, 0) + 2.0 * dp(y) * freq * trig_value(trig, x, 1) +
         poly(y) * freq * freq * trig_value(trig, x, 2);
}

LinearProblemSpec make_family_problem(const FamilySpec& spec, double alpha) {
  LinearProblemSpec p;
  p.name = spec.name;
  p.alpha = alpha;
  p.length = spec.length;
  p.final_time = spec.final_time;
  p.a = [a = spec.a](double y) { return a(y); };
  p.b = [b = spec.b](double y) { return b(y); };
  p.p = [pp = spec.p](double t) { return pp(t); };
  const Polynomial da = spec.a.derivative();
  p.f = [spec, da, alpha](double y, double t) {
    const double phi = spec.time.value(alpha, t);
    const double psi = spec.space.value(y);
    const double flux = da(y) * spec.space.d1(y) + spec.a(y) * spec.space.d2(y);
    return spec.time.caputo(alpha, t) * psi + spec.p(t) * phi * (-flux + spec.b(y) * psi);
  };
  p.g = [spec, alpha](double y) { return spec.time.value(alpha, 0.0) * spec.space.value(y); };
  p.exact = ExactSolution{
      [spec, alpha](double y, double t) { return spec.time.value(alpha, t) * spec.space.value(y); },
      [spec, alpha](double y, double t) { return spec.time.value(alpha, t) * spec.space.d1(y); }};
  return p;
}

namespace {

PowerSeries::Term parse_term(const std::string& item) {
  const auto colon = item.find(':');
  if (colon == std::string::npos)
    throw ArgumentError("time_terms: expected 'coeff:exponent', got '" + item + "'");
  PowerSeries::Term term{parse_real(item.substr(0, colon), "time_terms coefficient"), 0.0, 0.0};
  const std::string e = trim(item.substr(colon + 1));
  if (e == "alpha") {
    term.alpha_multiple = 1.0;
  } else if (const auto star = e.find("*alpha"); star != std::string::npos && star + 6 == e.size()) {
    term.alpha_multiple = parse_real(e.substr(0, star), "time_terms exponent");
  } else {
    term.base = parse_real(e, "time_terms exponent");
  }
  if (term.base < 0.0 || term.alpha_multiple < 0.0) throw ArgumentError("time_terms: exponents must be nonnegative");
  return term;
}

Polynomial parse_poly(const std::string& s, const std::string& what) { return Polynomial{parse_reals(s, what)}; }

}  // namespace

FamilySpec parse_family_file(const std::string& path) {
  const KeyValueFile kv = KeyValueFile::read(path);
  kv.require_known({"name", "length", "final_time", "time_terms", "space_poly", "space_trig", "space_freq", "a_poly",
                    "b_poly", "p_poly"});
  FamilySpec spec;
  spec.name = kv.get_or("name", path);
  spec.length = parse_real(kv.get_or("length", "1"), "length");
  spec.final_time = parse_real(kv.get_or("final_time", "1"), "final_time");
  for (const auto& item : split_list(kv.get("time_terms"))) spec.time.terms.push_back(parse_term(item));
  spec.space.poly = parse_poly(kv.get("space_poly"), "space_poly");
  const std::string trig = kv.get_or("space_trig", "none");
  if (trig == "none")
    spec.space.trig = Trig::none;
  else if (trig == "sin")
    spec.space.trig = Trig::sin;
  else if (trig == "cos")
    spec.space.trig = Trig::cos;
  else
    throw ArgumentError("space_trig must be none, sin or cos, got '" + trig + "'");
  spec.space.freq = parse_real(kv.get_or("space_freq", "1"), "space_freq");
  spec.a = parse_poly(kv.get_or("a_poly", "1"), "a_poly");
  spec.b = parse_poly(kv.get_or("b_poly", "1"), "b_poly");
  spec.p = parse_poly(kv.get_or("p_poly", "1"), "p_poly");
  if (!(spec.length > 0.0) || !(spec.final_time > 0.0))
    throw ArgumentError(path + ": length and final_time must be positive");
  return spec;
}

namespace {

// u = (t^a + t^3) sin y on (0, pi), a = b = p = 1.
LinearProblemSpec example1(double alpha) {
  LinearProblemSpec p;
  p.name = "example1-constant";
  p.alpha = alpha;
  p.length = std::numbers::pi;
  p.final_time = 1.0;
  p.a = [](double) { return 1.0; };
  p.b = [](double) { return 1.0; };
  p.p = [](double) { return 1.0; };
  const double ga = gamma(alpha + 1.0), g4 = 6.0 / gamma(4.0 - alpha);
  p.f = [alpha, ga, g4](double y, double t) {
    const double phi = std::pow(t, alpha) + t * t * t;
    return (ga + g4 * std::pow(t, 3.0 - alpha)) * std::sin(y) + 2.0 * phi * std::sin(y);
  };
  p.g = [](double) { return 0.0; };
  p.exact = ExactSolution{
      [alpha](double y, double t) { return (std::pow(t, alpha) + t * t * t) * std::sin(y); },
      [alpha](double y, double t) { return (std::pow(t, alpha) + t * t * t) * std::cos(y); }};
  return p;
}

// u = t^a y sin y on (0, pi), a = y + 1, b = 1, p = t^2 + 1.
LinearProblemSpec example2(double alpha) {
  LinearProblemSpec p;
  p.name = "example2-variable";
  p.alpha = alpha;
  p.length = std::numbers::pi;
  p.final_time = 1.0;
  p.a = [](double y) { return y + 1.0; };
  p.b = [](double) { return 1.0; };
  p.p = [](double t) { return t * t + 1.0; };
  const double ga = gamma(alpha + 1.0);
  p.f = [alpha, ga](double y, double t) {
    const double s = std::sin(y), c = std::cos(y);
    const double ta = std::pow(t, alpha);
    // -(a u_y)_y = -t^a [u_y profile + (y+1) u_yy profile]
    const double flux = (s + y * c) + (y + 1.0) * (2.0 * c - y * s);
    return ga * y * s + (t * t + 1.0) * ta * (-flux + y * s);
  };
  p.g = [](double) { return 0.0; };
  p.exact = ExactSolution{
      [alpha](double y, double t) { return std::pow(t, alpha) * y * std::sin(y); },
      [alpha](double y, double t) { return std::pow(t, alpha) * (std::sin(y) + y * std::cos(y)); }};
  return p;
}

// D^a u - u_yy - exp(-u) = f on (0, 1), u = (t^a + t^3 + 1)(y^2 - y).
SemilinearProblemSpec example3(double alpha) {
  SemilinearProblemSpec p;
  p.name = "example3-semilinear";
  p.alpha = alpha;
  p.length = 1.0;
  p.final_time = 1.0;
  p.a = [](double) { return 1.0; };
  p.b = [](double, double u) { return -std::exp(-u); };
  p.b_u = [](double, double u) { return std::exp(-u); };
  p.p = [](double) { return 1.0; };
  const double ga = gamma(alpha + 1.0), g4 = 6.0 / gamma(4.0 - alpha);
  p.f = [alpha, ga, g4](double y, double t) {
    const double phi = std::pow(t, alpha) + t * t * t + 1.0;
    const double q = y * y - y;
    return (ga + g4 * std::pow(t, 3.0 - alpha)) * q - 2.0 * phi - std::exp(-phi * q);
  };
  p.g = [](double y) { return y * y - y; };
  p.exact = ExactSolution{
      [alpha](double y, double t) { return (std::pow(t, alpha) + t * t * t + 1.0) * (y * y - y); },
      [alpha](double y, double t) { return (std::pow(t, alpha) + t * t * t + 1.0) * (2.0 * y - 1.0); }};
  return p;
}

PowerSeries alpha_plus_cubic(bool with_constant) {
  PowerSeries s{{{1.0, 0.0, 1.0}, {1.0, 3.0, 0.0}}};
  if (with_constant) s.terms.push_back({1.0, 0.0, 0.0});
  return s;
}

}  // namespace

std::vector<std::string> builtin_problem_ids() {
  return {"example1-constant", "example2-variable", "example3-semilinear"};
}

RegisteredProblem registry_lookup(const std::string& id) {
  const SpaceFunction zero = [](double) { return 0.0; };
  if (id == "example1-constant")
    return {id, false, [](double a) { return Problem(example1(a)); },
            ManufacturedSolution{alpha_plus_cubic(false), {Polynomial{{1.0}}, Trig::sin, 1.0}, zero}};
  if (id == "example2-variable")
    return {id, false, [](double a) { return Problem(example2(a)); },
            ManufacturedSolution{PowerSeries{{{1.0, 0.0, 1.0}}},
                                 {Polynomial{{0.0, 1.0}}, Trig::sin, 1.0},
                                 [](double) { return 1.0; }}};
  if (id == "example3-semilinear")
    return {id, true, [](double a) { return Problem(example3(a)); },
            ManufacturedSolution{alpha_plus_cubic(true), {Polynomial{{0.0, -1.0, 1.0}}, Trig::none, 1.0}, zero}};

  std::ifstream probe(id);
  if (!probe) throw ArgumentError("unknown problem '" + id + "' (not a built-in id or readable file)");
  const FamilySpec spec = parse_family_file(id);
  const Polynomial da = spec.a.derivative();
  return {spec.name, false, [spec](double a) { return Problem(make_family_problem(spec, a)); },
          ManufacturedSolution{spec.time, spec.space, [da](double y) { return da(y); }}};
}

const std::string& problem_name(const Problem& problem) {
  return std::visit([](const auto& p) -> const std::string& { return p.name; }, problem);
}

double problem_alpha(const Problem& problem) {
  return std::visit([](const auto& p) { return p.alpha; }, problem);
}

const std::optional<ExactSolution>& problem_exact(const Problem& problem) {
  return std::visit([](const auto& p) -> const std::optional<ExactSolution>& { return p.exact; }, problem);
}

double manufactured_residual(const Problem& problem, const ManufacturedSolution& exact, int ny, int nt) {
  double worst = 0.0;
  std::visit(
      [&](const auto& p) {
        using P = std::decay_t<decltype(p)>;
        for (int it = 1; it <= nt; ++it) {
          const double t = p.final_time * it / nt;
          const double phi = exact.time.value(p.alpha, t);
          const double dphi = exact.time.caputo(p.alpha, t);
          for (int iy = 0; iy < ny; ++iy) {
            const double y = p.length * iy / (ny - 1);
            const double psi = exact.space.value(y);
            const double u = phi * psi;
            const double flux = (exact.a_derivative(y) * exact.space.d1(y) + p.a(y) * exact.space.d2(y)) * phi;
            double reaction;
            if constexpr (std::is_same_v<P, LinearProblemSpec>)
              reaction = p.b(y) * u;
            else
              reaction = p.b(y, u);
            const double r = dphi * psi + p.p(t) * (-flux + reaction) - p.f(y, t);
            worst = std::max(worst, std::abs(r));
          }
        }
      },
      problem);
  return worst;
}

}  // namespace tfdg
