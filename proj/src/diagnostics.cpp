#include "sces/diagnostics.hpp"

#include <algorithm>
#include <cmath>

namespace sces {

bool theory_nu_valid(Real nu, Real gamma, Real kappa) {
  if (nu <= 0.0 || nu >= 1.0) return false;
  return nu / (1.0 - nu) >= 4.0 * (gamma * gamma - 1.0) / kappa;
}

DecreaseAudit expected_decrease_audit(const std::vector<std::vector<TraceRecord>>& traces,
                                      Real nu) {
  if (traces.size() < 10) throw InsufficientSeeds("expected_decrease_audit: need at least 10 traces");
  const std::size_t length = traces.front().size();
  for (const auto& t : traces) {
    if (t.size() != length) throw DomainError("expected_decrease_audit: trace lengths differ");
    for (const TraceRecord& r : t) {
      if (!r.f_exact.has_value())
        throw DomainError("expected_decrease_audit: traces lack exact objective values");
    }
  }
  DecreaseAudit audit;
  if (length < 2) return audit;
  for (std::size_t j = 1; j < length; ++j) {
    Real mean_increment = 0.0;
    for (const auto& t : traces) {
      const Real prev = lyapunov(*t[j - 1].f_exact, t[j - 1].sigma, nu);
      const Real cur = lyapunov(*t[j].f_exact, t[j].sigma, nu);
      mean_increment += cur - prev;
    }
    mean_increment /= static_cast<Real>(traces.size());
    ++audit.buckets;
    if (mean_increment <= 0.0) {
      ++audit.nonpositive;
    } else {
      audit.violations.push_back(static_cast<long long>(j));
    }
  }
  return audit;
}

namespace {
Real median(std::vector<Real> values) {
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}
}  // namespace

bool sigma_convergence_check(const std::vector<TraceRecord>& trace, Real ratio) {
  const std::size_t quarter = trace.size() / 4;
  if (quarter == 0) return false;
  std::vector<Real> first, last;
  first.reserve(quarter);
  last.reserve(quarter);
  for (std::size_t i = 0; i < quarter; ++i) first.push_back(trace[i].sigma);
  for (std::size_t i = trace.size() - quarter; i < trace.size(); ++i)
    last.push_back(trace[i].sigma);
  return median(std::move(last)) <= ratio * median(std::move(first));
}

Real stationarity_box(const Vector& x, const Vector& grad, const Vector& lower,
                      const Vector& upper) {
  if (x.size() != grad.size() || x.size() != lower.size() || x.size() != upper.size())
    throw DomainError("stationarity_box: dimension mismatch");
  Real sq = 0.0;
  for (Index i = 0; i < x.size(); ++i) {
    if (x[i] < lower[i] || x[i] > upper[i]) throw DomainError("stationarity_box: x outside box");
    Real v = -grad[i];
    if (x[i] <= lower[i]) v = std::max(v, 0.0);
    if (x[i] >= upper[i]) v = std::min(v, 0.0);
    sq += v * v;
  }
  return std::sqrt(sq);
}

std::vector<long long> sufficient_decrease_violations(const std::vector<TraceRecord>& trace,
                                                      Real kappa, Real sigma0, Real f0) {
  std::vector<long long> bad;
  Real sigma_prev = sigma0;
  Real f_prev = f0;
  for (std::size_t i = 0; i < trace.size(); ++i) {
    const TraceRecord& r = trace[i];
    if (r.success) {
      const Real threshold = f_prev - 0.5 * kappa * sigma_prev * sigma_prev;
      if (r.f_est > std::nextafter(threshold, std::numeric_limits<Real>::infinity()))
        bad.push_back(static_cast<long long>(i));
    }
    sigma_prev = r.sigma;
    f_prev = r.f_est;
  }
  return bad;
}

}  // namespace sces
