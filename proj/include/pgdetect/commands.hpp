#pragma once

// Command layer behind the pgdetect CLI. Each command reads an
// ExperimentConfig, delegates to the library, and writes long-format CSV
// files with a '#'-prefixed metadata header into cfg.out_dir. Column
// layouts are listed in README.md and kept fixed.

#include <algorithm>
#include <array>
#include <charconv>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "pgdetect/analytic.hpp"
#include "pgdetect/config.hpp"
#include "pgdetect/core_model.hpp"
#include "pgdetect/detectors.hpp"
#include "pgdetect/error.hpp"
#include "pgdetect/series_io.hpp"
#include "pgdetect/sim.hpp"
#include "pgdetect/spectral.hpp"

namespace pgdetect {

/// Shortest representation that reads back to the same double.
inline std::string format_double(double v) {
  std::array<char, 32> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return {buf.data(), ptr};
}

class CsvTable {
public:
  explicit CsvTable(std::vector<std::string> columns) : columns_(std::move(columns)) {}

  void meta(const std::string& key, const std::string& value) {
    meta_.emplace_back(key, value);
  }

  CsvTable& row() {
    rows_.emplace_back();
    return *this;
  }
  CsvTable& operator<<(const std::string& s) {
    rows_.back().push_back(s);
    return *this;
  }
  CsvTable& operator<<(const char* s) { return *this << std::string(s); }
  CsvTable& operator<<(double v) { return *this << format_double(v); }
  CsvTable& operator<<(std::size_t v) { return *this << std::to_string(v); }

  [[nodiscard]] const std::vector<std::string>& columns() const { return columns_; }
  [[nodiscard]] const std::vector<std::vector<std::string>>& rows() const { return rows_; }

  void write(std::ostream& out) const {
    for (const auto& [k, v] : meta_) out << "# " << k << '=' << v << '\n';
    write_line(out, columns_);
    for (const auto& r : rows_) {
      if (r.size() != columns_.size()) throw NumericError("CsvTable: row width mismatch");
      write_line(out, r);
    }
  }

  [[nodiscard]] std::string str() const {
    std::ostringstream s;
    write(s);
    return s.str();
  }

  void save(const std::filesystem::path& path) const {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write " + path.string());
    write(out);
  }

private:
  static void write_line(std::ostream& out, const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << cells[i];
    out << '\n';
  }

  std::vector<std::string> columns_;
  std::vector<std::pair<std::string, std::string>> meta_;
  std::vector<std::vector<std::string>> rows_;
};

/// Tables produced by one command, keyed by file name.
struct CommandOutput {
  std::vector<std::pair<std::string, CsvTable>> tables;

  [[nodiscard]] const CsvTable& table(const std::string& name) const {
    for (const auto& [n, t] : tables) {
      if (n == name) return t;
    }
    throw InvalidInput("no table named " + name);
  }

  void save(const std::filesystem::path& dir) const {
    for (const auto& [n, t] : tables) t.save(dir / n);
  }
};

namespace detail {

inline void require_synthetic(const ExperimentConfig& c, const char* cmd) {
  if (c.mode != InputMode::Synthetic) {
    throw ConfigError(std::string(cmd) + ": needs mode \"synthetic\"");
  }
  if (c.n == 0) throw ConfigError(std::string(cmd) + ": missing 'grid'");
  if (!c.noise) throw ConfigError(std::string(cmd) + ": missing 'noise'");
  if (c.training_sizes.empty()) throw ConfigError(std::string(cmd) + ": missing 'training.L'");
  if (c.tests.empty()) throw ConfigError(std::string(cmd) + ": missing 'tests'");
}

inline void require_mc(const ExperimentConfig& c, const char* cmd) {
  if (!c.trials || !c.seed) throw ConfigError(std::string(cmd) + ": missing 'mc' block");
}

inline void require_sines(const ExperimentConfig& c, const char* cmd) {
  if (!c.sines) throw ConfigError(std::string(cmd) + ": missing 'signal' block");
}

inline void common_meta(CsvTable& t, const ExperimentConfig& c, const std::string& command) {
  t.meta("pgdetect", command);
  t.meta("schema", command + "/1");
  t.meta("mode", c.mode == InputMode::Synthetic ? "synthetic" : "external");
  t.meta("n", std::to_string(c.n));
  t.meta("dt", format_double(c.dt));
  if (c.noise) t.meta("noise", c.noise->name);
  if (c.trials) t.meta("trials", std::to_string(*c.trials));
  if (c.seed) t.meta("seed", std::to_string(*c.seed));
}

inline NoncentralitySpectrum config_lambdas(const ExperimentConfig& c) {
  const FourierGrid grid = c.grid();
  return noncentrality_lambda(*c.sines, ar_expected_periodogram(c.noise->model, grid), grid);
}

inline void subtract_mean(std::vector<double>& v) {
  const double mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  for (double& x : v) x -= mean;
}

struct DetectInputs {
  TimeSeries observation;
  std::optional<TrainingSet> training;
};

// Synthetic inputs use the seed streams of Monte Carlo trial 0.
inline DetectInputs synthetic_inputs(const ExperimentConfig& c, std::size_t l) {
  const ARModel& model = c.noise->model;
  std::vector<TimeSeries> members;
  for (std::size_t s = 0; s < l; ++s) {
    members.push_back(ar_generate(model, c.n, c.dt, stream_seed(*c.seed, 0, s)));
  }
  TimeSeries obs = ar_generate(model, c.n, c.dt, stream_seed(*c.seed, 0, l));
  if (c.sines) obs = synthesize(*c.sines, obs);
  return {std::move(obs), TrainingSet(std::move(members))};
}

inline TimeSeries maybe_detrend(const TimeSeries& x, bool detrend) {
  if (!detrend) return x;
  std::vector<double> v(x.samples().begin(), x.samples().end());
  subtract_mean(v);
  return {std::move(v), x.dt()};
}

} // namespace detail

/// Monte Carlo settings for one training size, with the given noise model.
inline McConfig make_mc_config(const ExperimentConfig& c, std::size_t l, const ARModel& noise) {
  McConfig m;
  m.trials = c.trials.value_or(0);
  m.master_seed = c.seed.value_or(0);
  m.n = c.n;
  m.dt = c.dt;
  m.training_size = l;
  if (c.sines) m.sines = *c.sines;
  m.noise = noise;
  m.histogram_bins = c.histogram_bins;
  m.threads = c.threads;
  for (const auto& t : c.tests) m.tests.push_back({t, {}});
  return m;
}

/// detect.csv: test,L,statistic,threshold,decision,pfa,pfa_source,argmax_hz
inline CommandOutput cmd_detect(const ExperimentConfig& c) {
  if (!c.pfa) throw ConfigError("detect: missing 'pfa'");
  if (c.tests.empty()) throw ConfigError("detect: missing 'tests'");
  bool any_standardized = false;
  bool any_calibrated = false;
  for (const auto& t : c.tests) {
    any_standardized = any_standardized || t.standardized();
    any_calibrated = any_calibrated || !t.has_analytic_pfa();
  }

  std::vector<std::pair<std::size_t, detail::DetectInputs>> runs;
  std::optional<ARModel> calibration_noise;
  std::size_t calibration_trials = 0;
  ExperimentConfig eff = c;
  if (c.mode == InputMode::Synthetic) {
    detail::require_synthetic(c, "detect");
    if (!c.seed) throw ConfigError("detect: synthetic mode needs 'mc.seed'");
    if (any_calibrated) detail::require_mc(c, "detect");
    for (std::size_t l : c.training_sizes) runs.emplace_back(l, detail::synthetic_inputs(c, l));
    calibration_noise = c.noise->model;
    calibration_trials = c.trials.value_or(0);
  } else {
    if (!c.observation_file) throw ConfigError("detect: missing 'observation.file'");
    TimeSeries obs = load_series(*c.observation_file);
    std::optional<TrainingSet> training;
    if (!c.training_files.empty()) {
      std::vector<TimeSeries> members;
      for (const auto& f : c.training_files) {
        TimeSeries m = load_series(f);
        if (m.size() != obs.size() || std::abs(m.dt() - obs.dt()) > kSpacingTolerance * obs.dt()) {
          throw IngestionError(f.string() + ": not on the observation grid (n=" +
                               std::to_string(obs.size()) + ", dt=" + format_double(obs.dt()) +
                               ")");
        }
        members.emplace_back(std::vector<double>(m.samples().begin(), m.samples().end()),
                             obs.dt());
      }
      training.emplace(std::move(members));
    } else if (any_standardized) {
      throw ConfigError("detect: standardized tests need 'training.files'");
    }
    eff.n = obs.size();
    eff.dt = obs.dt();
    if (c.n != 0 && (c.n != eff.n || std::abs(c.dt - eff.dt) > kSpacingTolerance * eff.dt)) {
      throw ConfigError("detect: 'grid' disagrees with the observation file");
    }
    for (const auto& t : c.tests) {
      try {
        t.validate(eff.grid().size());
      } catch (const InvalidInput& e) {
        throw ConfigError(std::string("detect: ") + e.what());
      }
    }
    if (any_calibrated) {
      if (!c.calibration) {
        throw ConfigError("detect: tests without a closed form need a 'calibration' block");
      }
      if (!c.seed) throw ConfigError("detect: calibration needs 'mc.seed'");
      calibration_noise = c.calibration->noise.model;
      calibration_trials = c.calibration->trials;
    }
    const std::size_t l = training ? training->size() : 0;
    runs.emplace_back(l, detail::DetectInputs{std::move(obs), std::move(training)});
  }

  CsvTable t({"test", "L", "statistic", "threshold", "decision", "pfa", "pfa_source",
              "argmax_hz"});
  detail::common_meta(t, eff, "detect");
  t.meta("target_pfa", format_double(*c.pfa));
  const FourierGrid grid = eff.grid();
  for (auto& [l, in] : runs) {
    const TimeSeries obs = detail::maybe_detrend(in.observation, c.detrend);
    const PeriodogramVec p = classical_periodogram(obs);
    std::optional<PeriodogramVec> pt;
    if (in.training) {
      std::vector<TimeSeries> members;
      for (const auto& m : in.training->members()) {
        members.push_back(detail::maybe_detrend(m, c.detrend));
      }
      pt.emplace(standardized_periodogram(p, averaged_periodogram(TrainingSet(std::move(members)))));
    }
    for (const auto& test : c.tests) {
      if (test.standardized() && !pt) {
        throw ConfigError("detect: " + test.name() + " needs a training set");
      }
      const Evaluation e = evaluate(test, &p, pt ? &*pt : nullptr);
      double threshold = 0.0;
      double pfa = *c.pfa;
      std::string source = "analytic";
      if (test.has_analytic_pfa()) {
        threshold = analytic_threshold(test, *c.pfa, l, grid.size());
      } else {
        // Calibration draws from a seed stream disjoint from the observation's.
        McConfig m = make_mc_config(eff, l, *calibration_noise);
        m.trials = calibration_trials;
        m.master_seed = splitmix64(*c.seed ^ 0xC0FFEE5EEDULL);
        m.sines = SinusoidSet();
        threshold = calibrate_threshold(m, test, *c.pfa).threshold;
        source = "calibrated";
      }
      const TestReport r = decide(test, e.statistic, threshold, e.argmax_index, l, grid.size());
      if (r.analytic_pfa) pfa = *r.analytic_pfa;
      t.row() << test.name() << l << r.statistic << r.threshold << to_string(r.decision) << pfa
              << source << grid.freq(r.argmax_index - 1);
    }
  }
  return {{{"detect.csv", std::move(t)}}};
}

/// validate.csv: test,L,gamma,pfa_analytic,pfa_empirical,pfa_stderr,
/// pdet_analytic,pdet_empirical,pdet_stderr
inline CommandOutput cmd_validate(const ExperimentConfig& c) {
  detail::require_synthetic(c, "validate");
  detail::require_mc(c, "validate");
  detail::require_sines(c, "validate");
  if (c.validate_pfa_targets.empty() && c.validate_gammas.empty()) {
    throw ConfigError("validate: missing 'validate' block");
  }
  for (const auto& t : c.tests) {
    if (!t.has_analytic_pfa()) {
      throw ConfigError("validate: " + t.name() + " has no closed-form law; use roc or calibrate");
    }
  }
  const FourierGrid grid = c.grid();
  const NoncentralitySpectrum lambdas = detail::config_lambdas(c);
  CsvTable t({"test", "L", "gamma", "pfa_analytic", "pfa_empirical", "pfa_stderr",
              "pdet_analytic", "pdet_empirical", "pdet_stderr"});
  detail::common_meta(t, c, "validate");
  for (std::size_t l : c.training_sizes) {
    McConfig m = make_mc_config(c, l, c.noise->model);
    m.run_h0 = true;
    m.run_h1 = true;
    for (auto& mt : m.tests) {
      if (!c.validate_gammas.empty()) {
        mt.gammas = c.validate_gammas;
      } else {
        for (double p : c.validate_pfa_targets) {
          mt.gammas.push_back(analytic_threshold(mt.kind, p, l, grid.size()));
        }
      }
      std::sort(mt.gammas.begin(), mt.gammas.end());
      mt.gammas.erase(std::unique(mt.gammas.begin(), mt.gammas.end()), mt.gammas.end());
    }
    const McSummary s = run_mc(m);
    for (std::size_t ti = 0; ti < m.tests.size(); ++ti) {
      const auto& kind = m.tests[ti].kind;
      const auto& ts = s.tests[ti];
      for (std::size_t g = 0; g < m.tests[ti].gammas.size(); ++g) {
        const double gamma = m.tests[ti].gammas[g];
        t.row() << kind.name() << l << gamma << analytic_pfa(kind, gamma, l, grid.size())
                << ts.h0_exceedance[g].rate << ts.h0_exceedance[g].stderr_
                << analytic_pdet(kind, gamma, lambdas, l) << ts.h1_exceedance[g].rate
                << ts.h1_exceedance[g].stderr_;
      }
    }
  }
  return {{{"validate.csv", std::move(t)}}};
}

/// roc.csv: test,L,pfa,pdet,source,stderr (stderr of the empirical pdet)
/// roc_auc.csv: test,L,source,auc,auc_stderr
inline CommandOutput cmd_roc(const ExperimentConfig& c) {
  detail::require_synthetic(c, "roc");
  detail::require_mc(c, "roc");
  detail::require_sines(c, "roc");
  if (c.pfa_grid.empty()) throw ConfigError("roc: missing 'pfa_grid'");
  const NoncentralitySpectrum lambdas = detail::config_lambdas(c);
  CsvTable roc({"test", "L", "pfa", "pdet", "source", "stderr"});
  CsvTable auc({"test", "L", "source", "auc", "auc_stderr"});
  detail::common_meta(roc, c, "roc");
  detail::common_meta(auc, c, "roc_auc");
  for (std::size_t l : c.training_sizes) {
    McConfig m = make_mc_config(c, l, c.noise->model);
    m.run_h0 = true;
    m.run_h1 = true;
    const McSummary s = run_mc(m);
    for (std::size_t ti = 0; ti < m.tests.size(); ++ti) {
      const auto& kind = m.tests[ti].kind;
      if (kind.has_analytic_pfa()) {
        const RocCurve a = roc_curve_analytic(kind, lambdas, l, c.pfa_grid);
        for (const auto& p : a.points) {
          roc.row() << kind.name() << l << p.pfa << p.pdet << "analytic" << 0.0;
        }
        auc.row() << kind.name() << l << "analytic" << a.auc() << 0.0;
      }
      const RocCurve e =
          empirical_roc_from_samples(kind, s.tests[ti].h0_stats, s.tests[ti].h1_stats);
      for (const auto& p : e.points) {
        roc.row() << kind.name() << l << p.pfa << p.pdet << "empirical" << p.pdet_stderr;
      }
      const double area = e.auc();
      auc.row() << kind.name() << l << "empirical" << area
                << auc_stderr(area, s.tests[ti].h0_stats.size(), s.tests[ti].h1_stats.size());
    }
  }
  return {{{"roc.csv", std::move(roc)}, {"roc_auc.csv", std::move(auc)}}};
}

/// histogram.csv: test,L,bin_low_hz,bin_high_hz,count
/// histogram_gof.csv: test,L,chi2,dof,p_value
inline CommandOutput cmd_histogram(const ExperimentConfig& c) {
  detail::require_synthetic(c, "histogram");
  detail::require_mc(c, "histogram");
  CsvTable h({"test", "L", "bin_low_hz", "bin_high_hz", "count"});
  CsvTable gof({"test", "L", "chi2", "dof", "p_value"});
  detail::common_meta(h, c, "histogram");
  detail::common_meta(gof, c, "histogram_gof");
  h.meta("bins", std::to_string(c.histogram_bins));
  for (std::size_t l : c.training_sizes) {
    McConfig m = make_mc_config(c, l, c.noise->model);
    m.run_h0 = true;
    m.run_h1 = false;
    m.sines = SinusoidSet();
    const McSummary s = run_mc(m);
    for (const auto& ts : s.tests) {
      const auto& hist = ts.h0_histogram;
      for (std::size_t b = 0; b < hist.counts.size(); ++b) {
        h.row() << ts.kind.name() << l << hist.low_hz[b] << hist.high_hz[b] << hist.counts[b];
      }
      const GoodnessOfFit g = uniformity_gof(hist);
      gof.row() << ts.kind.name() << l << g.chi2 << g.dof << g.p_value;
    }
  }
  return {{{"histogram.csv", std::move(h)}, {"histogram_gof.csv", std::move(gof)}}};
}

/// calibrate.csv: test,L,target_pfa,threshold,ci_low,ci_high,trials,analytic_threshold
/// (analytic_threshold is empty for tests without a closed form).
inline CommandOutput cmd_calibrate(const ExperimentConfig& c) {
  detail::require_synthetic(c, "calibrate");
  detail::require_mc(c, "calibrate");
  std::vector<double> targets = c.pfa_grid;
  if (targets.empty()) {
    if (!c.pfa) throw ConfigError("calibrate: missing 'pfa' or 'pfa_grid'");
    targets.push_back(*c.pfa);
  }
  const FourierGrid grid = c.grid();
  CsvTable t({"test", "L", "target_pfa", "threshold", "ci_low", "ci_high", "trials",
              "analytic_threshold"});
  detail::common_meta(t, c, "calibrate");
  for (std::size_t l : c.training_sizes) {
    McConfig m = make_mc_config(c, l, c.noise->model);
    m.run_h0 = true;
    m.run_h1 = false;
    m.sines = SinusoidSet();
    const McSummary s = run_mc(m);
    for (const auto& ts : s.tests) {
      for (double p : targets) {
        const Calibration cal = calibrate_from_samples(ts.h0_stats, p);
        t.row() << ts.kind.name() << l << p << cal.threshold << cal.ci_low << cal.ci_high
                << cal.trials
                << (ts.kind.has_analytic_pfa()
                        ? format_double(analytic_threshold(ts.kind, p, l, grid.size()))
                        : std::string());
      }
    }
  }
  return {{{"calibrate.csv", std::move(t)}}};
}

} // namespace pgdetect
