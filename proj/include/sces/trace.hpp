#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sces/types.hpp"

namespace sces {

// One row per iteration, recording the state after the iteration's update
// (step sizes and incumbent) together with what happened during it. Exact
// columns are populated only for problems exposing exact references and
// serialize as empty fields otherwise.
struct TraceRecord {
  long long iteration = 0;
  Real sigma = 0.0;     // step size after the update
  Real sigma_es = 0.0;  // sampling scale after the update
  bool success = false;
  Real f_est = 0.0;  // carried incumbent barrier estimate
  std::optional<Real> f_exact;
  std::optional<Real> violation;
  std::optional<Real> lyapunov;
  long long samples = 0;
  std::optional<bool> accuracy_event;
  long long wall_ms = 0;

  friend bool operator==(const TraceRecord&, const TraceRecord&) = default;
};

std::string trace_to_csv(const std::vector<TraceRecord>& records);
std::vector<TraceRecord> parse_trace_csv(const std::string& text);

void write_trace(const std::vector<TraceRecord>& records, const std::string& path);
std::vector<TraceRecord> read_trace(const std::string& path);

}  // namespace sces
