#include "hwsim/measure.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hwsim {

BorelSet::BorelSet(std::vector<Interval> parts) {
  std::erase_if(parts, [](const Interval& iv) { return iv.empty(); });
  std::sort(parts.begin(), parts.end(), [](const Interval& a, const Interval& b) {
    if (a.lo != b.lo) return a.lo < b.lo;
    return a.lo_closed && !b.lo_closed;
  });
  for (const Interval& iv : parts) {
    if (!parts_.empty()) {
      Interval& last = parts_.back();
      const bool touching = iv.lo < last.hi || (iv.lo == last.hi && (iv.lo_closed || last.hi_closed));
      if (touching) {
        if (iv.hi > last.hi) {
          last.hi = iv.hi;
          last.hi_closed = iv.hi_closed;
        } else if (iv.hi == last.hi) {
          last.hi_closed = last.hi_closed || iv.hi_closed;
        }
        continue;
      }
    }
    parts_.push_back(iv);
  }
}

bool BorelSet::contains(double x) const {
  return std::any_of(parts_.begin(), parts_.end(),
                     [x](const Interval& iv) { return iv.contains(x); });
}

BorelSet BorelSet::complement() const {
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<Interval> gaps;
  double lo = 0.0;
  bool lo_closed = true;
  for (const Interval& iv : parts_) {
    if (iv.hi < 0.0) continue;
    gaps.push_back({lo, iv.lo, lo_closed, !iv.lo_closed});
    lo = iv.hi;
    lo_closed = !iv.hi_closed;
  }
  if (lo < inf) gaps.push_back({lo, inf, lo_closed, false});
  return BorelSet(std::move(gaps));
}

DiscreteMeasure::DiscreteMeasure(std::vector<Atom> atoms) {
  for (const Atom& a : atoms) {
    if (!(a.weight >= 0.0) || !std::isfinite(a.location)) {
      throw std::invalid_argument("DiscreteMeasure: weights must be >= 0 and locations finite");
    }
  }
  std::sort(atoms.begin(), atoms.end(),
            [](const Atom& a, const Atom& b) { return a.location < b.location; });
  for (const Atom& a : atoms) {
    if (!atoms_.empty() && atoms_.back().location == a.location) {
      atoms_.back().weight += a.weight;
    } else {
      atoms_.push_back(a);
    }
  }
  std::erase_if(atoms_, [](const Atom& a) { return a.weight == 0.0; });
}

double DiscreteMeasure::total() const {
  double t = 0.0;
  for (const Atom& a : atoms_) t += a.weight;
  return t;
}

double DiscreteMeasure::mass(const BorelSet& set) const {
  double m = 0.0;
  for (const Atom& a : atoms_) {
    if (set.contains(a.location)) m += a.weight;
  }
  return m;
}

double DiscreteMeasure::weight_at(double location) const {
  auto it = std::lower_bound(atoms_.begin(), atoms_.end(), location,
                             [](const Atom& a, double x) { return a.location < x; });
  return (it != atoms_.end() && it->location == location) ? it->weight : 0.0;
}

bool DiscreteMeasure::is_probability(double tol) const {
  return std::abs(total() - 1.0) <= tol;
}

DiscreteMeasure DiscreteMeasure::normalized() const {
  const double t = total();
  if (!(t > 0.0)) throw std::invalid_argument("normalized: zero measure");
  return scaled(1.0 / t);
}

DiscreteMeasure DiscreteMeasure::scaled(double factor) const {
  DiscreteMeasure out = *this;
  for (Atom& a : out.atoms_) a.weight *= factor;
  return out;
}

namespace {

void require_probability(const DiscreteMeasure& m, const char* what) {
  // Sums of many normalized shares drift by a few ulps per atom.
  const double tol = 1e-12 * std::max<double>(1.0, static_cast<double>(m.atoms().size()));
  if (!m.is_probability(tol)) {
    throw std::invalid_argument(std::string(what) + ": expected a probability measure");
  }
}

}  // namespace

double mean_of_measure(const DiscreteMeasure& m) {
  require_probability(m, "mean_of_measure");
  double s = 0.0;
  for (const Atom& a : m.atoms()) s += a.location * a.weight;
  return s;
}

double wasserstein1(const DiscreteMeasure& m1, const DiscreteMeasure& m2) {
  require_probability(m1, "wasserstein1");
  require_probability(m2, "wasserstein1");
  const auto& a = m1.atoms();
  const auto& b = m2.atoms();
  std::size_t i = 0, j = 0;
  double cdf1 = 0.0, cdf2 = 0.0, distance = 0.0;
  double prev = 0.0;
  bool started = false;
  while (i < a.size() || j < b.size()) {
    double x;
    if (j >= b.size() || (i < a.size() && a[i].location <= b[j].location)) {
      x = a[i].location;
    } else {
      x = b[j].location;
    }
    if (started) distance += std::abs(cdf1 - cdf2) * (x - prev);
    while (i < a.size() && a[i].location == x) cdf1 += a[i++].weight;
    while (j < b.size() && b[j].location == x) cdf2 += b[j++].weight;
    prev = x;
    started = true;
  }
  return distance;
}

DiscreteMeasure average_measure(const std::vector<DiscreteMeasure>& measures) {
  if (measures.empty()) throw std::invalid_argument("average_measure: no measures");
  std::vector<Atom> all;
  const double w = 1.0 / static_cast<double>(measures.size());
  for (const auto& m : measures) {
    for (const Atom& a : m.atoms()) all.push_back({a.location, a.weight * w});
  }
  return DiscreteMeasure(std::move(all));
}

}  // namespace hwsim
