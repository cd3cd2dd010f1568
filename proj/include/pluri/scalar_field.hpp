/**
 * @file scalar_field.hpp
 * @brief Extended-real functions on a domain with pole metadata and a
 * structural record of how they were built.
 *
 * Lower bounds for the Green function are only accepted from fields whose
 * plurisubharmonicity follows from their construction tree (logs of moduli
 * of holomorphic maps, closed-form Green functions, maxima, nonnegative
 * combinations, pullbacks, gluings of such pieces). Nothing is ever
 * classified as PSH because it looked PSH on samples.
 */
#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pluri/core.hpp"

namespace pluri {

enum class FieldKind {
  LogModulus,      ///< log|F| or log||F|| for holomorphic F
  ClosedFormGreen, ///< known Green function of a model domain
  Explicit,        ///< explicit PSH formula with a written derivation
  Pluriharmonic,   ///< Re of an affine holomorphic function
  StrictlyPsh,     ///< smooth strictly PSH model function (|z|^2 based)
  Max,
  Sum,
  Scaled,  ///< nonnegative multiple of one part
  Glued,   ///< piecewise max-gluing whose seam inequalities were verified
  Pullback, ///< composition with a holomorphic map
  Smooth   ///< arbitrary smooth function; not PSH by construction
};

inline const char *to_string(FieldKind k) {
  switch (k) {
  case FieldKind::LogModulus: return "log_modulus";
  case FieldKind::ClosedFormGreen: return "closed_form_green";
  case FieldKind::Explicit: return "explicit";
  case FieldKind::Pluriharmonic: return "pluriharmonic";
  case FieldKind::StrictlyPsh: return "strictly_psh";
  case FieldKind::Max: return "max";
  case FieldKind::Sum: return "sum";
  case FieldKind::Scaled: return "scaled";
  case FieldKind::Glued: return "glued";
  case FieldKind::Pullback: return "pullback";
  case FieldKind::Smooth: return "smooth";
  }
  return "unknown";
}

struct ScalarField {
  using Eval = std::function<double(const Point &)>;

  std::string name;
  FieldKind kind = FieldKind::Smooth;
  Eval eval;
  std::vector<ScalarField> parts;
  /// Logarithmic pole location, if the field has one.
  std::optional<Point> pole;
  double scale = 1.0;
  /// Levi form L(z; e) = d^2 / (dt dconj(t)) of the field at z + t e, t = 0, when known.
  std::function<double(const Point &, const Point &)> levi;

  double operator()(const Point &p) const { return eval(p); }

  bool psh_by_construction() const {
    switch (kind) {
    case FieldKind::LogModulus:
    case FieldKind::ClosedFormGreen:
    case FieldKind::Explicit:
    case FieldKind::Pluriharmonic:
    case FieldKind::StrictlyPsh:
      return true;
    case FieldKind::Scaled:
      return scale >= 0 && parts.size() == 1 && parts[0].psh_by_construction();
    case FieldKind::Max:
    case FieldKind::Sum:
    case FieldKind::Glued:
    case FieldKind::Pullback:
      if (parts.empty())
        return false;
      for (const auto &p : parts)
        if (!p.psh_by_construction())
          return false;
      return true;
    case FieldKind::Smooth:
      return false;
    }
    return false;
  }

  static ScalarField leaf(std::string name, FieldKind kind, Eval f,
                          std::optional<Point> pole = std::nullopt) {
    ScalarField s;
    s.name = std::move(name);
    s.kind = kind;
    s.eval = std::move(f);
    s.pole = pole;
    return s;
  }

  static ScalarField max_of(std::string name, std::vector<ScalarField> fs) {
    ScalarField s;
    s.name = std::move(name);
    s.kind = FieldKind::Max;
    s.parts = std::move(fs);
    for (const auto &f : s.parts)
      if (f.pole)
        s.pole = f.pole;
    auto parts = s.parts;
    s.eval = [parts](const Point &p) {
      double m = -kInf;
      for (const auto &f : parts)
        m = std::max(m, f(p));
      return m;
    };
    return s;
  }

  static ScalarField scaled(std::string name, double c, ScalarField f) {
    ScalarField s;
    s.name = std::move(name);
    s.kind = FieldKind::Scaled;
    s.scale = c;
    s.pole = f.pole;
    s.parts = {f};
    s.eval = [c, f](const Point &p) { return c * f(p); };
    return s;
  }
};

} // namespace pluri
