#ifndef IDLEWAVE_TRACE_IO_HPP
#define IDLEWAVE_TRACE_IO_HPP

#include <string>

#include "idlewave/trace.hpp"

namespace idlewave {

/// Bit-exact CSV contract: header rank,step,kind,t_start_us,t_end_us; kinds
/// EXEC/INJECTED_DELAY/NOISE_DELAY/COMM/IDLE; times with three decimal
/// digits; rows sorted by (rank, t_start_us).
std::string trace_to_csv(const Trace& trace);

/// Parse a trace CSV back into records. The scenario digest is not part of
/// the CSV; per-rank final times are reconstructed from the records.
Trace trace_from_csv(const std::string& csv_text);

/// Write via a temporary file and rename, so partial output never lands
/// under the final name.
void write_text_atomic(const std::string& path, const std::string& content);

std::string read_text(const std::string& path);

}  // namespace idlewave

#endif
