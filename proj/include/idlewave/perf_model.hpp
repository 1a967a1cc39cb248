#ifndef IDLEWAVE_PERF_MODEL_HPP
#define IDLEWAVE_PERF_MODEL_HPP

namespace idlewave {

/// Strong-scaling parameters of the memory-bound triad benchmark with
/// next-neighbor ring exchange. Defaults reproduce the reference setup:
/// a 1.2 GB working set (5e7 elements, three arrays), ~40 GB/s per socket,
/// 2 MB halo per neighbor over a ~3 GB/s network, 2 flops per element.
/// write_allocate_factor scales the memory traffic for the store stream's
/// write-allocate transfers (4/3 for one write-allocated store out of three
/// streams); 1 disables the correction.
struct TriadModelParams {
  double v_mem_bytes = 1.2e9;
  double b_mem_bytes_per_s = 40e9;
  double v_net_bytes = 2e6;
  double b_net_bytes_per_s = 3e9;
  double flops_total = 1e8;
  double write_allocate_factor = 4.0 / 3.0;
};

/// Time per compute-communicate cycle on n sockets, seconds:
/// factor*V_mem/(n*b_mem) + 2*V_net/b_net.
double triad_runtime(int n_sockets, const TriadModelParams& p);

/// Execution-only variant (network term dropped).
double triad_exec_runtime(int n_sockets, const TriadModelParams& p);

/// flops_total / runtime, in flop/s.
double triad_performance(int n_sockets, const TriadModelParams& p);
double triad_exec_performance(int n_sockets, const TriadModelParams& p);

/// Large-n performance bound, flops_total * b_net / (2 * V_net).
double triad_performance_asymptote(const TriadModelParams& p);

void validate_params(const TriadModelParams& p);

}  // namespace idlewave

#endif
