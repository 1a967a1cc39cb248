#include "idlewave/trace.hpp"

#include <algorithm>
#include <stdexcept>

namespace idlewave {

const char* to_string(PhaseKind k) {
  switch (k) {
    case PhaseKind::Exec: return "EXEC";
    case PhaseKind::InjectedDelay: return "INJECTED_DELAY";
    case PhaseKind::NoiseDelay: return "NOISE_DELAY";
    case PhaseKind::Comm: return "COMM";
    case PhaseKind::Idle: return "IDLE";
  }
  return "EXEC";
}

std::vector<std::vector<double>> waitall_times(const Trace& trace, int n_ranks, int n_steps) {
  std::vector<std::vector<double>> w(static_cast<std::size_t>(n_ranks),
                                     std::vector<double>(static_cast<std::size_t>(n_steps), 0.0));
  for (const auto& rec : trace.records) {
    if (rec.rank < 0 || rec.rank >= n_ranks || rec.step < 1 || rec.step > n_steps)
      throw std::out_of_range("waitall_times: record outside trace dimensions");
    auto& cell = w[static_cast<std::size_t>(rec.rank)][static_cast<std::size_t>(rec.step - 1)];
    cell = std::max(cell, rec.t_end_us);
  }
  return w;
}

}  // namespace idlewave
