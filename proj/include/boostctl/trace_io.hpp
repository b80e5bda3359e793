#pragma once

// On-disk forms of a simulation run: the trace CSV, the undecimated event
// log and the key = value metrics text. Numbers are written with 17
// significant digits so a read-back trace is bit-identical.

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "boostctl/scenarios.hpp"
#include "boostctl/simulation.hpp"

namespace boostctl {

class TraceFormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

void write_trace_csv(std::ostream& out, const SimTrace& trace);
void write_trace_csv(const std::filesystem::path& path, const SimTrace& trace);

/// Requires the exact trace header; throws TraceFormatError otherwise.
[[nodiscard]] SimTrace read_trace_csv(std::istream& in);
[[nodiscard]] SimTrace read_trace_csv(const std::filesystem::path& path);

/// `t,kind,value` with kind one of switch|saturation.
void write_events_csv(const std::filesystem::path& path, const std::vector<TraceEvent>& events);
[[nodiscard]] std::vector<TraceEvent> read_events_csv(const std::filesystem::path& path);

/// Trace plus, when present, the events file next to it
/// (`x_trace.csv` -> `x_events.csv`).
[[nodiscard]] SimTrace load_run(const std::filesystem::path& trace_path);
[[nodiscard]] std::filesystem::path events_path_for(const std::filesystem::path& trace_path);

struct MetricsWindow {
    std::string name;
    double t0 = 0.0;
    double t1 = 0.0;
};

/// "all" from 5 ms to the end, then one window per schedule segment starting
/// 10 ms after its breakpoint.
[[nodiscard]] std::vector<MetricsWindow> default_metric_windows(const Scenario& scenario);

struct WindowReport {
    MetricsWindow window;
    SteadyStateMetrics metrics;
    double switching_frequency = 0.0;
};

[[nodiscard]] WindowReport evaluate_window(const SimTrace& trace, const MetricsWindow& window,
                                           const std::optional<Mat2>& P);

/// `<name>.<metric> = <value>` lines.
void write_window_report(std::ostream& out, const WindowReport& report);

/// Parses `key = value` lines (as written above) into pairs, in order.
[[nodiscard]] std::vector<std::pair<std::string, std::string>> read_key_values(std::istream& in);

/// Parses "t0:t1".
[[nodiscard]] MetricsWindow parse_window(const std::string& text);

}  // namespace boostctl
