#include "boostctl/trace_io.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace boostctl {

namespace {

constexpr std::size_t kColumns = 12;

std::string exact(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double parse_double(std::string_view field, std::size_t line) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
    if (ec != std::errc{} || ptr != field.data() + field.size()) {
        throw TraceFormatError("line " + std::to_string(line) + ": bad number '" + std::string(field) + "'");
    }
    return v;
}

std::string strip_cr(std::string s) {
    if (!s.empty() && s.back() == '\r') {
        s.pop_back();
    }
    return s;
}

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot write " + path.string());
    }
    return out;
}

}  // namespace

void write_trace_csv(std::ostream& out, const SimTrace& tr) {
    out << kTraceHeader << '\n';
    const std::array<const std::vector<double>*, kColumns> cols{&tr.t,       &tr.iL,      &tr.vo,      &tr.sigma,
                                                                &tr.p1_true, &tr.p2_true, &tr.p1_hat,  &tr.p2_hat,
                                                                &tr.iL_star, &tr.vo_star, &tr.s_value, &tr.h_value};
    std::string row;
    for (std::size_t i = 0; i < tr.size(); ++i) {
        row.clear();
        for (std::size_t c = 0; c < kColumns; ++c) {
            if (c) {
                row += ',';
            }
            row += exact((*cols[c])[i]);
        }
        row += '\n';
        out << row;
    }
}

void write_trace_csv(const std::filesystem::path& path, const SimTrace& trace) {
    std::ofstream out = open_out(path);
    write_trace_csv(out, trace);
    if (!out) {
        throw std::runtime_error("write failed for " + path.string());
    }
}

SimTrace read_trace_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || strip_cr(line) != kTraceHeader) {
        throw TraceFormatError("trace header must be exactly: " + std::string(kTraceHeader));
    }
    SimTrace tr;
    const std::array<std::vector<double>*, kColumns> cols{&tr.t,       &tr.iL,      &tr.vo,      &tr.sigma,
                                                          &tr.p1_true, &tr.p2_true, &tr.p1_hat,  &tr.p2_hat,
                                                          &tr.iL_star, &tr.vo_star, &tr.s_value, &tr.h_value};
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        line = strip_cr(line);
        if (line.empty()) {
            continue;
        }
        std::string_view rest(line);
        for (std::size_t c = 0; c < kColumns; ++c) {
            const auto comma = rest.find(',');
            const bool last = c + 1 == kColumns;
            if (last != (comma == std::string_view::npos)) {
                throw TraceFormatError("line " + std::to_string(lineno) + ": expected " +
                                       std::to_string(kColumns) + " fields");
            }
            cols[c]->push_back(parse_double(rest.substr(0, comma), lineno));
            if (!last) {
                rest.remove_prefix(comma + 1);
            }
        }
        const std::size_t n = tr.t.size();
        if (n > 1 && !(tr.t[n - 1] > tr.t[n - 2])) {
            throw TraceFormatError("line " + std::to_string(lineno) + ": time is not increasing");
        }
        if (tr.sigma.back() != 0.0 && tr.sigma.back() != 1.0) {
            throw TraceFormatError("line " + std::to_string(lineno) + ": sigma must be 0 or 1");
        }
    }
    return tr;
}

SimTrace read_trace_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open " + path.string());
    }
    return read_trace_csv(in);
}

void write_events_csv(const std::filesystem::path& path, const std::vector<TraceEvent>& events) {
    std::ofstream out = open_out(path);
    out << "t,kind,value\n";
    for (const TraceEvent& e : events) {
        out << exact(e.t) << ',' << (e.kind == EventKind::Switch ? "switch" : "saturation") << ',' << exact(e.value)
            << '\n';
    }
    if (!out) {
        throw std::runtime_error("write failed for " + path.string());
    }
}

std::vector<TraceEvent> read_events_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open " + path.string());
    }
    std::string line;
    if (!std::getline(in, line) || strip_cr(line) != "t,kind,value") {
        throw TraceFormatError(path.string() + ": events header must be t,kind,value");
    }
    std::vector<TraceEvent> events;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        line = strip_cr(line);
        if (line.empty()) {
            continue;
        }
        const auto a = line.find(',');
        const auto b = a == std::string::npos ? a : line.find(',', a + 1);
        if (b == std::string::npos) {
            throw TraceFormatError(path.string() + " line " + std::to_string(lineno) + ": expected 3 fields");
        }
        TraceEvent e;
        const std::string_view sv(line);
        e.t = parse_double(sv.substr(0, a), lineno);
        const std::string_view kind = sv.substr(a + 1, b - a - 1);
        if (kind == "switch") {
            e.kind = EventKind::Switch;
        } else if (kind == "saturation") {
            e.kind = EventKind::Saturation;
        } else {
            throw TraceFormatError(path.string() + " line " + std::to_string(lineno) + ": unknown event kind");
        }
        e.value = parse_double(sv.substr(b + 1), lineno);
        events.push_back(e);
    }
    return events;
}

std::filesystem::path events_path_for(const std::filesystem::path& trace_path) {
    std::string stem = trace_path.stem().string();
    const std::string suffix = "_trace";
    if (stem.size() >= suffix.size() && stem.compare(stem.size() - suffix.size(), suffix.size(), suffix) == 0) {
        stem.erase(stem.size() - suffix.size());
    }
    return trace_path.parent_path() / (stem + "_events.csv");
}

SimTrace load_run(const std::filesystem::path& trace_path) {
    SimTrace tr = read_trace_csv(trace_path);
    const auto ev = events_path_for(trace_path);
    if (std::filesystem::exists(ev)) {
        tr.events = read_events_csv(ev);
        tr.has_switch_events = true;
    }
    return tr;
}

std::vector<MetricsWindow> default_metric_windows(const Scenario& scenario) {
    std::vector<MetricsWindow> out{{"all", 0.005, scenario.duration}};
    std::vector<double> edges{0.0};
    for (double b : scenario.breakpoints) {
        if (b > 0.0 && b < scenario.duration) {
            edges.push_back(b);
        }
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    edges.push_back(scenario.duration);
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        const double t0 = edges[i] + 0.01;
        if (t0 < edges[i + 1]) {
            out.push_back({"seg" + std::to_string(i + 1), t0, edges[i + 1]});
        }
    }
    return out;
}

WindowReport evaluate_window(const SimTrace& trace, const MetricsWindow& window, const std::optional<Mat2>& P) {
    WindowReport r;
    r.window = window;
    r.metrics = steady_state_metrics(trace, window.t0, window.t1, P);
    r.switching_frequency = measure_switching_frequency(trace, window.t0, window.t1);
    return r;
}

void write_window_report(std::ostream& out, const WindowReport& r) {
    const std::string& n = r.window.name;
    const SteadyStateMetrics& m = r.metrics;
    out << n << ".t0 = " << exact(r.window.t0) << '\n'
        << n << ".t1 = " << exact(r.window.t1) << '\n'
        << n << ".samples = " << m.samples << '\n'
        << n << ".mean_vo = " << exact(m.mean_vo) << '\n'
        << n << ".mean_abs_vo_error = " << exact(m.mean_abs_vo_error) << '\n'
        << n << ".max_abs_vo_error = " << exact(m.max_abs_vo_error) << '\n'
        << n << ".mean_abs_p1_error = " << exact(m.mean_abs_p1_error) << '\n'
        << n << ".mean_abs_p2_error = " << exact(m.mean_abs_p2_error) << '\n'
        << n << ".max_abs_p1_error = " << exact(m.max_abs_p1_error) << '\n'
        << n << ".max_abs_p2_error = " << exact(m.max_abs_p2_error) << '\n';
    if (m.mean_V) {
        out << n << ".mean_V = " << exact(*m.mean_V) << '\n'
            << n << ".max_V = " << exact(*m.max_V) << '\n'
            << n << ".final_V = " << exact(*m.final_V) << '\n';
    }
    out << n << ".switching_frequency = " << exact(r.switching_frequency) << '\n';
}

std::vector<std::pair<std::string, std::string>> read_key_values(std::istream& in) {
    std::vector<std::pair<std::string, std::string>> out;
    std::string line;
    while (std::getline(in, line)) {
        line = strip_cr(line);
        if (line.empty() || line.front() == '#') {
            continue;
        }
        const auto eq = line.find(" = ");
        if (eq == std::string::npos) {
            throw TraceFormatError("metrics line without ' = ': " + line);
        }
        out.emplace_back(line.substr(0, eq), line.substr(eq + 3));
    }
    return out;
}

MetricsWindow parse_window(const std::string& text) {
    const auto colon = text.find(':');
    if (colon == std::string::npos) {
        throw std::invalid_argument("window must look like t0:t1");
    }
    MetricsWindow w;
    w.name = "window";
    try {
        std::size_t used = 0;
        const std::string a = text.substr(0, colon);
        const std::string b = text.substr(colon + 1);
        w.t0 = std::stod(a, &used);
        if (used != a.size()) {
            throw std::invalid_argument(a);
        }
        w.t1 = std::stod(b, &used);
        if (used != b.size()) {
            throw std::invalid_argument(b);
        }
    } catch (const std::exception&) {
        throw std::invalid_argument("window must look like t0:t1, got '" + text + "'");
    }
    if (!(w.t1 > w.t0)) {
        throw std::invalid_argument("window end must exceed its start");
    }
    return w;
}

}  // namespace boostctl
