#include "sces/trace.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace sces {

namespace {

const char* kHeader = "iteration,sigma,sigma_es,success,f_est,f_exact,violation,lyapunov,samples,accuracy_event,wall_ms";

std::string format_real(Real v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string format_optional(const std::optional<Real>& v) {
  return v.has_value() ? format_real(*v) : std::string();
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(',', start);
    if (pos == std::string::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

Real parse_real(const std::string& s, const char* what) {
  char* end = nullptr;
  const Real v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size() || s.empty()) throw IOError(std::string("trace: bad ") + what);
  return v;
}

long long parse_int(const std::string& s, const char* what) {
  char* end = nullptr;
  const long long v = std::strtoll(s.c_str(), &end, 10);
  if (end != s.c_str() + s.size() || s.empty()) throw IOError(std::string("trace: bad ") + what);
  return v;
}

}  // namespace

std::string trace_to_csv(const std::vector<TraceRecord>& records) {
  std::ostringstream out;
  out << kHeader << '\n';
  for (const TraceRecord& r : records) {
    out << r.iteration << ',' << format_real(r.sigma) << ',' << format_real(r.sigma_es) << ','
        << (r.success ? '1' : '0') << ',' << format_real(r.f_est) << ','
        << format_optional(r.f_exact) << ',' << format_optional(r.violation) << ','
        << format_optional(r.lyapunov) << ',' << r.samples << ','
        << (r.accuracy_event.has_value() ? (*r.accuracy_event ? "1" : "0") : "") << ','
        << r.wall_ms << '\n';
  }
  return out.str();
}

std::vector<TraceRecord> parse_trace_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != kHeader) throw IOError("trace: missing or bad header");
  std::vector<TraceRecord> records;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const std::vector<std::string> f = split_fields(line);
    if (f.size() != 11) throw IOError("trace: wrong field count");
    TraceRecord r;
    r.iteration = parse_int(f[0], "iteration");
    r.sigma = parse_real(f[1], "sigma");
    r.sigma_es = parse_real(f[2], "sigma_es");
    r.success = parse_int(f[3], "success") != 0;
    r.f_est = parse_real(f[4], "f_est");
    if (!f[5].empty()) r.f_exact = parse_real(f[5], "f_exact");
    if (!f[6].empty()) r.violation = parse_real(f[6], "violation");
    if (!f[7].empty()) r.lyapunov = parse_real(f[7], "lyapunov");
    r.samples = parse_int(f[8], "samples");
    if (!f[9].empty()) r.accuracy_event = parse_int(f[9], "accuracy_event") != 0;
    r.wall_ms = parse_int(f[10], "wall_ms");
    records.push_back(std::move(r));
  }
  return records;
}

void write_trace(const std::vector<TraceRecord>& records, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IOError("trace: cannot open '" + path + "' for writing");
  out << trace_to_csv(records);
  if (!out) throw IOError("trace: write failed for '" + path + "'");
}

std::vector<TraceRecord> read_trace(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IOError("trace: cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_trace_csv(buffer.str());
}

}  // namespace sces
