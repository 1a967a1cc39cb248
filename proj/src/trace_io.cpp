#include "idlewave/trace_io.hpp"

#include <algorithm>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace idlewave {

std::string trace_to_csv(const Trace& trace) {
  std::string out = "rank,step,kind,t_start_us,t_end_us\n";
  out.reserve(out.size() + trace.records.size() * 48);
  char line[128];
  for (const auto& r : trace.records) {
    std::snprintf(line, sizeof line, "%d,%d,%s,%.3f,%.3f\n", r.rank, r.step, to_string(r.kind),
                  r.t_start_us, r.t_end_us);
    out += line;
  }
  return out;
}

namespace {

PhaseKind kind_from_string(const std::string& s) {
  if (s == "EXEC") return PhaseKind::Exec;
  if (s == "INJECTED_DELAY") return PhaseKind::InjectedDelay;
  if (s == "NOISE_DELAY") return PhaseKind::NoiseDelay;
  if (s == "COMM") return PhaseKind::Comm;
  if (s == "IDLE") return PhaseKind::Idle;
  throw std::invalid_argument("trace csv: unknown phase kind '" + s + "'");
}

}  // namespace

Trace trace_from_csv(const std::string& csv_text) {
  std::istringstream in(csv_text);
  std::string line;
  if (!std::getline(in, line) || line != "rank,step,kind,t_start_us,t_end_us")
    throw std::invalid_argument("trace csv: missing or malformed header");

  Trace trace;
  int max_rank = -1;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    PhaseRecord rec;
    char kind_buf[32];
    if (std::sscanf(line.c_str(), "%d,%d,%31[^,],%lf,%lf", &rec.rank, &rec.step, kind_buf,
                    &rec.t_start_us, &rec.t_end_us) != 5)
      throw std::invalid_argument("trace csv: malformed row '" + line + "'");
    rec.kind = kind_from_string(kind_buf);
    max_rank = std::max(max_rank, rec.rank);
    trace.records.push_back(rec);
  }
  trace.final_time_us.assign(static_cast<std::size_t>(max_rank + 1), 0.0);
  for (const auto& r : trace.records) {
    auto& t = trace.final_time_us[static_cast<std::size_t>(r.rank)];
    t = std::max(t, r.t_end_us);
  }
  return trace;
}

void write_text_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  const fs::path tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << content;
    if (!out) throw std::runtime_error("short write to " + tmp.string());
  }
  fs::rename(tmp, target);
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace idlewave
