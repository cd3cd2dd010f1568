/**
 * @file bounds.hpp
 * @brief Two-sided bound record with the witness behind each side.
 */
#pragma once

#include <string>

#include "pluri/core.hpp"

namespace pluri {

enum class Provenance { None, ClosedForm, CertifiedLo, CertifiedHi, Estimate };

inline const char *to_string(Provenance p) {
  switch (p) {
  case Provenance::None: return "none";
  case Provenance::ClosedForm: return "closed_form";
  case Provenance::CertifiedLo: return "certified_lo";
  case Provenance::CertifiedHi: return "certified_hi";
  case Provenance::Estimate: return "estimate";
  }
  return "none";
}

struct BoundInterval {
  double lo = -kInf;
  double hi = kInf;
  std::string lo_witness = "none";
  std::string hi_witness = "none";
  Provenance lo_provenance = Provenance::None;
  Provenance hi_provenance = Provenance::None;

  /// Zero for a pole interval [-inf, -inf].
  double width() const { return lo == hi ? 0.0 : hi - lo; }

  /// Both sides rest on certified witnesses or exact formulas.
  bool certified() const {
    auto ok = [](Provenance p) {
      return p == Provenance::ClosedForm || p == Provenance::CertifiedLo ||
             p == Provenance::CertifiedHi;
    };
    return ok(lo_provenance) && ok(hi_provenance);
  }

  bool contains(double x, double slack = 0) const {
    return lo - slack <= x && x <= hi + slack;
  }

  /// Keeps the larger lower bound. Ties keep the earlier witness.
  void raise_lo(double v, const std::string &witness, Provenance p) {
    if (v > lo || (lo_provenance == Provenance::None && v == lo)) {
      lo = v;
      lo_witness = witness;
      lo_provenance = p;
    }
  }
  void lower_hi(double v, const std::string &witness, Provenance p) {
    if (v < hi || (hi_provenance == Provenance::None && v == hi)) {
      hi = v;
      hi_witness = witness;
      hi_provenance = p;
    }
  }

  static BoundInterval pole() {
    BoundInterval b;
    b.lo = b.hi = -kInf;
    b.lo_witness = b.hi_witness = "pole";
    b.lo_provenance = b.hi_provenance = Provenance::ClosedForm;
    return b;
  }
};

} // namespace pluri
