#include "idlewave/perf_model.hpp"

#include <stdexcept>

namespace idlewave {

void validate_params(const TriadModelParams& p) {
  if (!(p.v_mem_bytes > 0.0 && p.b_mem_bytes_per_s > 0.0 && p.v_net_bytes >= 0.0 &&
        p.b_net_bytes_per_s > 0.0 && p.flops_total > 0.0))
    throw std::invalid_argument("triad model: volumes, bandwidths, and flops must be positive");
  if (!(p.write_allocate_factor >= 1.0))
    throw std::invalid_argument("triad model: write_allocate_factor must be >= 1");
}

double triad_exec_runtime(int n_sockets, const TriadModelParams& p) {
  validate_params(p);
  if (n_sockets < 1) throw std::invalid_argument("triad model: n_sockets must be >= 1");
  return p.write_allocate_factor * p.v_mem_bytes /
         (static_cast<double>(n_sockets) * p.b_mem_bytes_per_s);
}

double triad_runtime(int n_sockets, const TriadModelParams& p) {
  return triad_exec_runtime(n_sockets, p) + 2.0 * p.v_net_bytes / p.b_net_bytes_per_s;
}

double triad_performance(int n_sockets, const TriadModelParams& p) {
  return p.flops_total / triad_runtime(n_sockets, p);
}

double triad_exec_performance(int n_sockets, const TriadModelParams& p) {
  return p.flops_total / triad_exec_runtime(n_sockets, p);
}

double triad_performance_asymptote(const TriadModelParams& p) {
  validate_params(p);
  if (p.v_net_bytes == 0.0)
    throw std::invalid_argument("triad model: no network asymptote without network volume");
  return p.flops_total * p.b_net_bytes_per_s / (2.0 * p.v_net_bytes);
}

}  // namespace idlewave
