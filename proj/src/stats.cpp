#include "hwsim/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace hwsim {

double ks_distance(std::span<const double> sample1, std::span<const double> sample2) {
  if (sample1.empty() || sample2.empty()) {
    throw std::invalid_argument("ks_distance: samples must be nonempty");
  }
  std::vector<double> a(sample1.begin(), sample1.end());
  std::vector<double> b(sample2.begin(), sample2.end());
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const auto na = static_cast<double>(a.size());
  const auto nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() || j < b.size()) {
    double x;
    if (j >= b.size() || (i < a.size() && a[i] <= b[j])) {
      x = a[i];
    } else {
      x = b[j];
    }
    while (i < a.size() && a[i] == x) ++i;
    while (j < b.size() && b[j] == x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return d;
}

namespace {

double sorted_quantile(const std::vector<double>& sorted, double p) {
  const double h = (static_cast<double>(sorted.size()) - 1.0) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  if (lo + 1 >= sorted.size()) return sorted.back();
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[lo + 1] - sorted[lo]);
}

}  // namespace

double quantile(std::span<const double> samples, double p) {
  if (samples.empty()) throw std::invalid_argument("quantile: empty sample");
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("quantile: p outside [0, 1]");
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  return sorted_quantile(sorted, p);
}

Summary summarize(std::span<const double> samples) {
  if (samples.empty()) throw std::invalid_argument("summarize: empty sample");
  Summary s;
  s.count = samples.size();
  const auto n = static_cast<double>(s.count);
  s.mean = std::accumulate(samples.begin(), samples.end(), 0.0) / n;
  if (s.count > 1) {
    double ss = 0.0;
    for (double x : samples) ss += (x - s.mean) * (x - s.mean);
    s.sd = std::sqrt(ss / (n - 1.0));
    s.standard_error = s.sd / std::sqrt(n);
  }
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  s.min = sorted.front();
  s.max = sorted.back();
  s.q25 = sorted_quantile(sorted, 0.25);
  s.median = sorted_quantile(sorted, 0.5);
  s.q75 = sorted_quantile(sorted, 0.75);
  return s;
}

std::vector<double> erlang_a_stationary(int n, double lambda, double mu, double gamma, int cutoff,
                                        double tail_tolerance) {
  if (n < 1 || !(lambda > 0.0) || !(mu > 0.0) || gamma < 0.0 || cutoff < n) {
    throw std::invalid_argument("erlang_a_stationary: invalid parameters");
  }
  if (!(gamma > 0.0) && !(lambda < n * mu)) {
    throw std::invalid_argument("erlang_a_stationary: not ergodic (need gamma > 0 or lambda < n*mu)");
  }
  auto death = [&](int j) {
    return std::min(j, n) * mu + std::max(j - n, 0) * gamma;
  };
  std::vector<double> log_pi(static_cast<std::size_t>(cutoff) + 1, 0.0);
  for (int j = 0; j < cutoff; ++j) {
    log_pi[static_cast<std::size_t>(j) + 1] =
        log_pi[static_cast<std::size_t>(j)] + std::log(lambda) - std::log(death(j + 1));
  }
  const double peak = *std::max_element(log_pi.begin(), log_pi.end());
  std::vector<double> pi(log_pi.size());
  double total = 0.0;
  for (std::size_t j = 0; j < pi.size(); ++j) {
    pi[j] = std::exp(log_pi[j] - peak);
    total += pi[j];
  }
  const double r = lambda / death(cutoff + 1);
  const double tail = r < 1.0 ? pi.back() * r / (1.0 - r) / total : std::numeric_limits<double>::infinity();
  if (tail > tail_tolerance) {
    std::ostringstream msg;
    msg << "erlang_a_stationary: cutoff " << cutoff << " too small, truncated tail mass bound " << tail
        << " exceeds " << tail_tolerance;
    throw std::runtime_error(msg.str());
  }
  for (double& p : pi) p /= total;
  return pi;
}

double total_variation(std::span<const double> p, std::span<const double> q) {
  const std::size_t size = std::max(p.size(), q.size());
  double sum = 0.0;
  for (std::size_t j = 0; j < size; ++j) {
    const double a = j < p.size() ? p[j] : 0.0;
    const double b = j < q.size() ? q[j] : 0.0;
    sum += std::abs(a - b);
  }
  return 0.5 * sum;
}

}  // namespace hwsim
