#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "gfrsim/metrics.hpp"

namespace gfrsim {

/// CSV schema version written on the first line of every file as
/// "# gfrsim <kind> schema <n>".
inline constexpr int kCsvSchemaVersion = 1;

/// Per-VC rows then one "total" row. Columns: vc, tcps, threshold_cells,
/// goodput_mbps, expected_mbps, ratio, frames_dropped, max_queue_cells.
void write_summary_csv(std::ostream& os, const ThroughputReport& r);
/// One row per group of consecutive VCs.
void write_groups_csv(std::ostream& os, const ThroughputReport& r);
/// One row per TCP connection.
void write_connections_csv(std::ostream& os, const ThroughputReport& r);
/// time_ns, cwnd_bytes.
void write_cwnd_csv(std::ostream& os, const Trace& t);
/// time_ns, total_cells, then one column per VC.
void write_queue_csv(std::ostream& os, const QueueTrace& q);
/// Group ratios side by side: one row per group, one column per run.
void write_ratios_csv(std::ostream& os, const std::vector<std::string>& labels,
                      const std::vector<ThroughputReport>& runs);

/// Fixed six-decimal rendering used throughout the CSV files.
std::string fixed6(double v);

}  // namespace gfrsim
