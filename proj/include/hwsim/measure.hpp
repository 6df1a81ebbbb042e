#pragma once

#include <limits>
#include <vector>

namespace hwsim {

/// Interval with independently open or closed ends. Infinite ends are open.
struct Interval {
  double lo;
  double hi;
  bool lo_closed = true;
  bool hi_closed = false;

  bool contains(double x) const {
    const bool above = lo_closed ? x >= lo : x > lo;
    const bool below = hi_closed ? x <= hi : x < hi;
    return above && below;
  }
  bool empty() const { return lo > hi || (lo == hi && !(lo_closed && hi_closed)); }
  friend bool operator==(const Interval&, const Interval&) = default;
};

/// Finite union of intervals, kept sorted and disjoint.
class BorelSet {
 public:
  BorelSet() = default;
  explicit BorelSet(std::vector<Interval> parts);

  static BorelSet half_open(double lo, double hi) { return BorelSet({{lo, hi, true, false}}); }
  static BorelSet singleton(double x) { return BorelSet({{x, x, true, true}}); }
  static BorelSet at_least(double lo) {
    return BorelSet({{lo, std::numeric_limits<double>::infinity(), true, false}});
  }
  /// [0, inf), the whole rate axis.
  static BorelSet nonnegative() { return at_least(0.0); }

  bool contains(double x) const;
  /// Complement within [0, inf).
  BorelSet complement() const;
  const std::vector<Interval>& parts() const { return parts_; }

  friend bool operator==(const BorelSet&, const BorelSet&) = default;

 private:
  std::vector<Interval> parts_;
};

struct Atom {
  double location;
  double weight;
  friend bool operator==(const Atom&, const Atom&) = default;
};

/// Finitely supported nonnegative measure on the rate axis. Atoms are kept
/// sorted by location with equal locations merged and zero weights dropped.
class DiscreteMeasure {
 public:
  DiscreteMeasure() = default;
  explicit DiscreteMeasure(std::vector<Atom> atoms);

  static DiscreteMeasure dirac(double location) { return DiscreteMeasure({{location, 1.0}}); }

  const std::vector<Atom>& atoms() const { return atoms_; }
  bool empty() const { return atoms_.empty(); }
  double total() const;
  double mass(const BorelSet& set) const;
  /// Weight at exactly `location`.
  double weight_at(double location) const;
  bool is_probability(double tol = 1e-12) const;
  DiscreteMeasure normalized() const;
  DiscreteMeasure scaled(double factor) const;

  friend bool operator==(const DiscreteMeasure&, const DiscreteMeasure&) = default;

 private:
  std::vector<Atom> atoms_;
};

/// Sum of location * weight; rejects non-probability input.
double mean_of_measure(const DiscreteMeasure& m);

/// Exact integral of |F1 - F2| for two probability measures.
double wasserstein1(const DiscreteMeasure& m1, const DiscreteMeasure& m2);

/// Atom-wise average of probability measures.
DiscreteMeasure average_measure(const std::vector<DiscreteMeasure>& measures);

}  // namespace hwsim
