#pragma once

#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "nomaidnc/rng.hpp"
#include "nomaidnc/schemes.hpp"
#include "nomaidnc/textio.hpp"

namespace nomaidnc {

enum class SweepAxis { Receivers, Packets, BufferRatio, PMaxDbmHz };

inline std::string_view sweep_axis_name(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::Receivers: return "M";
    case SweepAxis::Packets: return "L";
    case SweepAxis::BufferRatio: return "mu";
    case SweepAxis::PMaxDbmHz: return "p_max_dbm_hz";
  }
  return "?";
}

/// One Monte Carlo experiment: anchor values for every parameter plus exactly
/// one swept axis (possibly a single point).
struct ExperimentConfig {
  std::uint64_t base_seed = 1;
  int trials = 1;
  int receivers = 20;
  int packets = 20;
  double mu = 0.6;
  double p_max_dbm_hz = -42.6;
  double r_min_bps_hz = 0.4;
  double cell_radius_m = 500.0;
  double d_min_m = 10.0;
  double bandwidth_mhz = 5.0;  ///< reporting only; all rates stay per-Hz
  std::vector<Scheme> schemes{kAllSchemes.begin(), kAllSchemes.end()};
  SweepAxis axis = SweepAxis::Receivers;
  std::vector<double> sweep_values{20.0};
  SchedulerOptions scheduler;
  int threads = 0;              ///< 0: one worker per hardware thread
  bool record_runtime = false;  ///< off by default so outputs stay byte-reproducible
};

struct TrialResult {
  Scheme scheme = Scheme::Rlnc;
  double sweep_value = 0.0;
  int trial = 0;
  double throughput = 0.0;
  int ao_iterations = 1;
  double runtime_ms = 0.0;

  friend bool operator==(const TrialResult&, const TrialResult&) = default;
};

inline void validate_config(const ExperimentConfig& cfg) {
  if (cfg.trials < 1) throw ConfigError("trials must be >= 1");
  if (cfg.receivers < 1) throw ConfigError("receivers must be >= 1");
  if (cfg.packets < 1) throw ConfigError("packets must be >= 1");
  if (!(cfg.mu >= 0.0 && cfg.mu <= 1.0)) throw ConfigError("mu must lie in [0, 1]");
  if (cfg.r_min_bps_hz < 0.0) throw ConfigError("r_min_bps_hz must be >= 0");
  if (!(cfg.cell_radius_m > 0.0)) throw ConfigError("cell_radius_m must be > 0");
  if (cfg.d_min_m < 0.0) throw ConfigError("d_min_m must be >= 0");
  if (!(cfg.bandwidth_mhz > 0.0)) throw ConfigError("bandwidth_mhz must be > 0");
  if (cfg.schemes.empty()) throw ConfigError("schemes must not be empty");
  if (cfg.sweep_values.empty()) throw ConfigError("sweep values must not be empty");
  if (!(cfg.scheduler.ao_tol > 0.0)) throw ConfigError("ao_tol must be > 0");
  if (cfg.scheduler.max_ao_iter < 1) throw ConfigError("max_ao_iter must be >= 1");
  if (!(cfg.scheduler.init_beta > 0.0 && cfg.scheduler.init_beta < 1.0))
    throw ConfigError("init_beta must lie in (0, 1)");
  if (cfg.scheduler.ftpa_alpha < 0.0) throw ConfigError("ftpa_alpha must be >= 0");
  if (cfg.scheduler.oracle_cap < 1) throw ConfigError("oracle_cap must be >= 1");
  if (cfg.threads < 0) throw ConfigError("threads must be >= 0");
  for (double v : cfg.sweep_values) {
    switch (cfg.axis) {
      case SweepAxis::Receivers:
      case SweepAxis::Packets:
        if (v < 1.0 || v != std::floor(v) || v > 100000.0)
          throw ConfigError("receiver/packet sweep values must be integers >= 1");
        break;
      case SweepAxis::BufferRatio:
        if (!(v >= 0.0 && v <= 1.0)) throw ConfigError("mu sweep values must lie in [0, 1]");
        break;
      case SweepAxis::PMaxDbmHz:
        if (!std::isfinite(v)) throw ConfigError("p_max sweep values must be finite");
        break;
    }
  }
}

/// Mutable configuration under construction: tracks which axis currently
/// carries the sweep list so that "exactly one sweep" can be enforced and a
/// later scalar assignment can un-sweep an axis.
struct ConfigDraft {
  ExperimentConfig cfg;
  std::optional<SweepAxis> swept;

  void set_axis(SweepAxis axis, const std::string& value) {
    const bool is_list = value.find(',') != std::string::npos;
    if (is_list) {
      if (swept && *swept != axis)
        throw ConfigError("only one parameter may be swept; '" +
                          std::string(sweep_axis_name(*swept)) + "' already carries a list");
      std::vector<double> values;
      for (const std::string& item : split_list(value)) values.push_back(parse_double(item));
      if (values.empty()) throw ConfigError("empty sweep list");
      swept = axis;
      cfg.axis = axis;
      cfg.sweep_values = std::move(values);
      return;
    }
    const double v = parse_double(value);
    switch (axis) {
      case SweepAxis::Receivers: cfg.receivers = static_cast<int>(v); break;
      case SweepAxis::Packets: cfg.packets = static_cast<int>(v); break;
      case SweepAxis::BufferRatio: cfg.mu = v; break;
      case SweepAxis::PMaxDbmHz: cfg.p_max_dbm_hz = v; break;
    }
    if (swept && *swept == axis) swept.reset();  // scalar write un-sweeps the axis
  }

  void apply(const std::string& key, const std::string& value) {
    if (key == "base_seed") cfg.base_seed = parse_u64(value);
    else if (key == "trials") cfg.trials = static_cast<int>(parse_int(value));
    else if (key == "receivers") set_axis(SweepAxis::Receivers, value);
    else if (key == "packets") set_axis(SweepAxis::Packets, value);
    else if (key == "mu") set_axis(SweepAxis::BufferRatio, value);
    else if (key == "p_max_dbm_hz") set_axis(SweepAxis::PMaxDbmHz, value);
    else if (key == "r_min_bps_hz") cfg.r_min_bps_hz = parse_double(value);
    else if (key == "cell_radius_m") cfg.cell_radius_m = parse_double(value);
    else if (key == "d_min_m") cfg.d_min_m = parse_double(value);
    else if (key == "bandwidth_mhz") cfg.bandwidth_mhz = parse_double(value);
    else if (key == "ao_tol") cfg.scheduler.ao_tol = parse_double(value);
    else if (key == "max_ao_iter") cfg.scheduler.max_ao_iter = static_cast<int>(parse_int(value));
    else if (key == "init_beta") cfg.scheduler.init_beta = parse_double(value);
    else if (key == "ftpa_alpha") cfg.scheduler.ftpa_alpha = parse_double(value);
    else if (key == "strict_sic") cfg.scheduler.strict_sic = parse_bool(value);
    else if (key == "oracle_cap") cfg.scheduler.oracle_cap = static_cast<int>(parse_int(value));
    else if (key == "threads") cfg.threads = static_cast<int>(parse_int(value));
    else if (key == "record_runtime") cfg.record_runtime = parse_bool(value);
    else if (key == "schemes") {
      std::vector<Scheme> schemes;
      for (const std::string& name : split_list(value)) {
        const auto s = parse_scheme(name);
        if (!s) throw ConfigError("unknown scheme: '" + name + "'");
        schemes.push_back(*s);
      }
      cfg.schemes = std::move(schemes);
    } else {
      throw ConfigError("unknown configuration key: '" + key + "'");
    }
  }

  void apply_line(std::string_view line) {
    const std::string_view stripped = trim(line);
    if (stripped.empty() || stripped.front() == '#') return;
    const std::size_t eq = stripped.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError("expected key=value, got: '" + std::string(stripped) + "'");
    apply(std::string(trim(stripped.substr(0, eq))), std::string(trim(stripped.substr(eq + 1))));
  }

  /// Finalizes the config. With no sweep list anywhere, the run is a single
  /// point over the receiver-count anchor.
  ExperimentConfig finalize() {
    if (!swept) {
      cfg.axis = SweepAxis::Receivers;
      cfg.sweep_values = {static_cast<double>(cfg.receivers)};
    }
    validate_config(cfg);
    return cfg;
  }
};

inline ConfigDraft parse_config_text(const std::string& text) {
  ConfigDraft draft;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    try {
      draft.apply_line(line);
    } catch (const ConfigError& e) {
      throw ConfigError("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return draft;
}

inline ConfigDraft load_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_config_text(buf.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

/// Independent Bernoulli buffering: each packet lands in a receiver's Has set
/// with probability mu, so Wants is the complement. Draw order is fixed
/// (receiver-major) and a seed pins the outcome.
inline SideInfo generate_wants(int num_packets, double mu, int num_receivers, std::uint64_t seed) {
  if (num_packets < 0) throw ConfigError("generate_wants: num_packets must be >= 0");
  if (num_receivers < 0) throw ConfigError("generate_wants: num_receivers must be >= 0");
  if (!(mu >= 0.0 && mu <= 1.0)) throw ConfigError("generate_wants: mu must lie in [0, 1]");
  Rng rng(seed);
  SideInfo si;
  si.num_packets = num_packets;
  si.wants.assign(static_cast<std::size_t>(num_receivers),
                  DynamicBitset(static_cast<std::size_t>(num_packets)));
  for (int m = 0; m < num_receivers; ++m)
    for (int l = 0; l < num_packets; ++l)
      if (rng.uniform() >= mu) si.wants[m].set(l);
  return si;
}

namespace detail {

inline ExperimentConfig at_sweep_point(const ExperimentConfig& cfg, double value) {
  ExperimentConfig local = cfg;
  switch (cfg.axis) {
    case SweepAxis::Receivers: local.receivers = static_cast<int>(value); break;
    case SweepAxis::Packets: local.packets = static_cast<int>(value); break;
    case SweepAxis::BufferRatio: local.mu = value; break;
    case SweepAxis::PMaxDbmHz: local.p_max_dbm_hz = value; break;
  }
  return local;
}

inline constexpr std::uint64_t kTopologyStream = 0x746f706f6c6f6779ull;
inline constexpr std::uint64_t kWantsStream = 0x77616e7473736574ull;

}  // namespace detail

/// Builds the (topology, wants) realization for one (sweep point, trial) cell.
/// All schemes at that cell consume this identical realization.
inline std::pair<Topology, SideInfo> make_realization(const ExperimentConfig& cfg, int sweep_index,
                                                      int trial) {
  const ExperimentConfig local = detail::at_sweep_point(cfg, cfg.sweep_values[sweep_index]);
  const std::uint64_t trial_seed =
      derive_seed(cfg.base_seed, static_cast<std::uint64_t>(sweep_index),
                  static_cast<std::uint64_t>(trial));
  CellConfig cell;
  cell.num_receivers = local.receivers;
  cell.cell_radius_m = local.cell_radius_m;
  cell.p_max = dbm_per_hz_to_w_per_hz(local.p_max_dbm_hz);
  cell.r_min = local.r_min_bps_hz;
  cell.d_min_m = local.d_min_m;
  Topology topo = generate_topology(cell, splitmix64(trial_seed ^ detail::kTopologyStream));
  SideInfo wants = generate_wants(local.packets, local.mu, local.receivers,
                                  splitmix64(trial_seed ^ detail::kWantsStream));
  return {std::move(topo), std::move(wants)};
}

/// Runs every configured scheme on identical realizations, one realization
/// per (sweep point, trial). Work is spread over threads; rows come back
/// sorted by (scheme name, sweep value, trial) regardless of scheduling.
inline std::vector<TrialResult> run_sweep(const ExperimentConfig& cfg) {
  validate_config(cfg);
  const int points = static_cast<int>(cfg.sweep_values.size());
  const int num_schemes = static_cast<int>(cfg.schemes.size());
  const int tasks = points * cfg.trials;
  std::vector<TrialResult> rows(static_cast<std::size_t>(tasks) * num_schemes);

  std::atomic<int> next{0};
  std::mutex error_mutex;
  std::exception_ptr error;

  const auto worker = [&] {
    for (;;) {
      const int task = next.fetch_add(1);
      if (task >= tasks) return;
      try {
        const int sweep_index = task / cfg.trials;
        const int trial = task % cfg.trials;
        const auto [topo, wants] = make_realization(cfg, sweep_index, trial);
        for (int i = 0; i < num_schemes; ++i) {
          const auto start = std::chrono::steady_clock::now();
          const SchemeResult r = run_scheme(cfg.schemes[i], topo, wants, cfg.scheduler);
          double runtime_ms = 0.0;
          if (cfg.record_runtime) {
            const auto elapsed = std::chrono::steady_clock::now() - start;
            runtime_ms = std::chrono::duration<double, std::milli>(elapsed).count();
          }
          rows[static_cast<std::size_t>(task) * num_schemes + i] =
              TrialResult{r.scheme,      cfg.sweep_values[sweep_index], trial,
                          r.throughput,  r.ao_iterations,               runtime_ms};
        }
      } catch (...) {
        const std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        return;
      }
    }
  };

  int num_threads = cfg.threads > 0
                        ? cfg.threads
                        : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  num_threads = std::min(num_threads, tasks);
  if (num_threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(num_threads));
    for (int i = 0; i < num_threads; ++i) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }
  if (error) std::rethrow_exception(error);

  std::sort(rows.begin(), rows.end(), [](const TrialResult& a, const TrialResult& b) {
    const auto ka = std::tuple(scheme_name(a.scheme), a.sweep_value, a.trial);
    const auto kb = std::tuple(scheme_name(b.scheme), b.sweep_value, b.trial);
    return ka < kb;
  });
  return rows;
}

struct SummaryRow {
  Scheme scheme = Scheme::Rlnc;
  double sweep_value = 0.0;
  int trials = 0;
  double mean = 0.0;
  double ci95_half_width = 0.0;
};

/// Per-(scheme, sweep value) mean and normal-approximation 95% confidence
/// half-width. Rows must already be sorted as run_sweep leaves them.
inline std::vector<SummaryRow> summarize(std::span<const TrialResult> rows) {
  std::vector<SummaryRow> out;
  std::size_t i = 0;
  while (i < rows.size()) {
    std::size_t j = i;
    double sum = 0.0;
    while (j < rows.size() && rows[j].scheme == rows[i].scheme &&
           rows[j].sweep_value == rows[i].sweep_value) {
      sum += rows[j].throughput;
      ++j;
    }
    const int n = static_cast<int>(j - i);
    const double mean = sum / n;
    double var = 0.0;
    for (std::size_t k = i; k < j; ++k) {
      const double d = rows[k].throughput - mean;
      var += d * d;
    }
    var = n > 1 ? var / (n - 1) : 0.0;
    const double half = n > 1 ? 1.96 * std::sqrt(var / n) : 0.0;
    out.push_back({rows[i].scheme, rows[i].sweep_value, n, mean, half});
    i = j;
  }
  return out;
}

inline constexpr std::string_view kResultsHeader =
    "scheme,sweep_param,sweep_value,trial,throughput_bps_hz,ao_iterations,runtime_ms";
inline constexpr std::string_view kSummaryHeader =
    "scheme,sweep_param,sweep_value,trials,mean_throughput_bps_hz,ci95_half_width_bps_hz";

/// Writes results.csv (one row per scheme/sweep point/trial) and summary.csv
/// (per-(scheme, sweep value) mean and 95% confidence half-width) under
/// out_dir. Numbers use shortest round-trip formatting, so files from equal
/// rows are byte-identical.
inline void emit_results(std::span<const TrialResult> rows, SweepAxis axis,
                         const std::filesystem::path& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw ConfigError("cannot create output directory: " + out_dir.string());
  const std::string_view axis_name = sweep_axis_name(axis);

  std::ofstream results(out_dir / "results.csv");
  if (!results) throw ConfigError("cannot open results.csv for writing");
  results << kResultsHeader << '\n';
  for (const TrialResult& r : rows) {
    results << scheme_name(r.scheme) << ',' << axis_name << ',' << format_double(r.sweep_value)
            << ',' << r.trial << ',' << format_double(r.throughput) << ',' << r.ao_iterations
            << ',' << format_double(r.runtime_ms) << '\n';
  }

  std::ofstream summary(out_dir / "summary.csv");
  if (!summary) throw ConfigError("cannot open summary.csv for writing");
  summary << kSummaryHeader << '\n';
  for (const SummaryRow& s : summarize(rows)) {
    summary << scheme_name(s.scheme) << ',' << axis_name << ',' << format_double(s.sweep_value)
            << ',' << s.trials << ',' << format_double(s.mean) << ','
            << format_double(s.ci95_half_width) << '\n';
  }
}

/// Parses a results.csv produced by emit_results back into rows.
inline std::vector<TrialResult> parse_results_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open results file: " + path.string());
  std::string line;
  if (!std::getline(in, line) || trim(line) != kResultsHeader)
    throw ConfigError("unexpected results header in " + path.string());
  std::vector<TrialResult> rows;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    const std::vector<std::string> fields = split(trim(line), ',');
    if (fields.size() != 7) throw ConfigError("malformed results row: '" + line + "'");
    const auto scheme = parse_scheme(fields[0]);
    if (!scheme) throw ConfigError("unknown scheme in results row: '" + fields[0] + "'");
    TrialResult r;
    r.scheme = *scheme;
    r.sweep_value = parse_double(fields[2]);
    r.trial = static_cast<int>(parse_int(fields[3]));
    r.throughput = parse_double(fields[4]);
    r.ao_iterations = static_cast<int>(parse_int(fields[5]));
    r.runtime_ms = parse_double(fields[6]);
    rows.push_back(r);
  }
  return rows;
}

}  // namespace nomaidnc
