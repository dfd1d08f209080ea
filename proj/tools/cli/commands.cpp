#include "cli/commands.hpp"

#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <mutex>
#include <string>
#include <thread>

#include "bfamily/initdata.hpp"
#include "cli/io.hpp"

#ifndef BFAMILY_VERSION
#define BFAMILY_VERSION "unknown"
#endif

namespace bfam::cli {

namespace fs = std::filesystem;
using nlohmann::json;

RunOutcome execute_run(const RunConfig& cfg) {
  const GridPtr grid = make_grid(cfg.L, cfg.N);
  const State s0 = build_initial(cfg.u0, cfg.rho0, grid);

  SimulationOptions opt;
  opt.recorder.diag_every = cfg.outputs.diag_every;
  opt.recorder.snapshot_every = cfg.outputs.snapshot_every;
  opt.recorder.hs_order = cfg.outputs.hs_order;
  opt.recorder.identities = true;
  opt.recorder.symmetry = true;
  opt.recorder.symmetry_mode = cfg.checks.symmetry_mode;
  opt.recorder.origin = true;
  if (cfg.checks.transport) {
    opt.char_label_stride = cfg.outputs.char_label_stride;
  } else {
    opt.char_label_stride.reset();
  }

  RunOutcome out;
  out.sim = simulate(s0, cfg.model, cfg.control, opt);
  const Trajectory& tr = out.sim.trajectory;
  out.data.records = tr.records;
  out.data.origin = tr.origin;
  out.data.identities = tr.identities;
  out.data.report = tr.report;
  out.data.symmetric_data = theorem41_symmetric(s0);
  if (out.sim.characteristics) {
    out.data.chars = {true, out.sim.characteristics_smooth, out.sim.characteristics->near_boundary,
                      out.sim.characteristics->wrapped};
  }
  out.verdicts = evaluate_checks(cfg, out.data);
  out.t41 = theorem41(cfg.model, out.data.symmetric_data, out.data.origin, out.data.report);
  return out;
}

json build_manifest(const RunConfig& cfg, const RunOutcome& outcome) {
  const ScenarioBranch h2 = classify_scenario(cfg.model, Framework::H2);
  const ScenarioBranch hs = classify_scenario(cfg.model, Framework::Hs);
  json verdicts = json::array();
  for (const auto& v : outcome.verdicts) verdicts.push_back(to_json(v));
  json steps = json::array();
  for (const auto& r : outcome.data.records) steps.push_back(r.step);
  const CharSummary& c = outcome.data.chars;

  json m;
  m["version"] = BFAMILY_VERSION;
  m["config"] = to_json(cfg);
  m["coefficients"] = {{"k1", cfg.model.k1}, {"k2", cfg.model.k2}, {"k3", cfg.model.k3}};
  m["classification"] = {{"H2", to_string(h2.branch)},
                         {"Hs", to_string(hs.branch)},
                         {"boundary_ambiguous", h2.boundary_ambiguous}};
  m["report"] = to_json(outcome.data.report);
  m["characteristics"] = {
      {"enabled", c.enabled}, {"smooth", c.smooth}, {"near_boundary", c.near_boundary}, {"wrapped", c.wrapped}};
  m["symmetric_data"] = outcome.data.symmetric_data;
  m["record_steps"] = steps;
  m["verdicts"] = verdicts;
  m["all_passed"] = all_passed(outcome.verdicts);
  m["theorem41"] = outcome.t41 ? to_json(*outcome.t41) : json(nullptr);
  m["files"] = {{"diagnostics", "diagnostics.csv"}, {"origin", "origin.csv"}, {"identities", "identities.csv"}};
  return m;
}

void write_run_outputs(const RunConfig& cfg, const RunOutcome& outcome, const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
  const Trajectory& tr = outcome.sim.trajectory;
  write_diagnostics(dir / "diagnostics.csv", tr.records);
  write_origin(dir / "origin.csv", tr.origin);
  write_identities(dir / "identities.csv", tr.identities);
  for (const auto& snap : tr.snapshots) {
    write_snapshot(dir / ("snap_" + std::to_string(snap.index) + ".csv"), snap.state);
  }
  json m = build_manifest(cfg, outcome);
  m["files"]["snapshots"] = tr.snapshots.size();
  write_json(dir / "manifest.json", m);
}

namespace {

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

void print_verdicts(const std::vector<Verdict>& verdicts, std::ostream& log) {
  for (const auto& v : verdicts) {
    log << "  " << (v.applicable ? (v.passed ? "PASS " : "FAIL ") : "N/A  ") << v.name << ": " << v.detail << '\n';
  }
}

void print_report(const RunReport& r, std::ostream& log) {
  log << "status " << to_string(r.status) << " at t=" << r.t_final << " after " << r.steps << " steps";
  if (r.blowup) {
    log << " (" << to_string(r.blowup->quantity) << "=" << r.blowup->value << " at x=" << r.blowup->location_x
        << ", trigger " << to_string(r.blowup->trigger) << ")";
  }
  log << '\n';
}

template <class F>
int guarded(std::ostream& err, F&& body) {
  try {
    return body();
  } catch (const ConfigError& e) {
    err << e.what() << '\n';
    return kUsageError;
  } catch (const IoError& e) {
    err << "I/O error: " << e.what() << '\n';
    return kIoError;
  } catch (const std::ios_base::failure& e) {
    err << "I/O error: " << e.what() << '\n';
    return kIoError;
  } catch (const fs::filesystem_error& e) {
    err << "I/O error: " << e.what() << '\n';
    return kIoError;
  } catch (const std::runtime_error& e) {
    // Unreadable custom tables surface here.
    err << "error: " << e.what() << '\n';
    return kIoError;
  } catch (const std::invalid_argument& e) {
    err << "config error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::domain_error& e) {
    err << "config error: " << e.what() << '\n';
    return kUsageError;
  }
}

}  // namespace

int cmd_run(const fs::path& config, const std::optional<fs::path>& out_dir, std::ostream& log, std::ostream& err) {
  return guarded(err, [&] {
    const RunConfig cfg = load_run_config(config);
    if (!is_power_of_two(cfg.N)) err << "warning: grid.N=" << cfg.N << " is not a power of two\n";
    const fs::path dir = out_dir ? *out_dir : fs::path(cfg.outputs.directory);
    const RunOutcome outcome = execute_run(cfg);
    write_run_outputs(cfg, outcome, dir);
    print_report(outcome.data.report, log);
    print_verdicts(outcome.verdicts, log);
    if (outcome.t41) {
      log << "Theorem 4.1: bound " << outcome.t41->bound;
      if (outcome.t41->t_detected) log << ", T_detected " << *outcome.t41->t_detected;
      log << (outcome.t41->respected ? " (respected)" : " (VIOLATED)") << '\n';
    }
    if (outcome.data.chars.near_boundary) {
      err << "warning: a characteristic came within 5% of the domain boundary\n";
    }
    log << "outputs in " << dir.string() << '\n';
    return all_passed(outcome.verdicts) ? kSuccess : kCheckFailure;
  });
}

int cmd_check(const fs::path& manifest_path, std::ostream& log, std::ostream& err) {
  return guarded(err, [&] {
    const json m = read_json_file(manifest_path);
    if (!m.is_object() || !m.contains("config") || !m.contains("report")) {
      throw ConfigError(manifest_path.string() + ": not a run manifest");
    }
    const RunConfig cfg = parse_run_config(m.at("config"));
    const fs::path dir = manifest_path.parent_path();
    RunData d;
    try {
      d.records = read_diagnostics(dir / "diagnostics.csv");
      d.origin = read_origin(dir / "origin.csv");
      d.identities = read_identities(dir / "identities.csv");
      d.report = report_from_json(m.at("report"));
      const auto& steps = m.at("record_steps");
      if (steps.size() != d.records.size()) throw IoError("record_steps does not match diagnostics.csv");
      for (std::size_t i = 0; i < steps.size(); ++i) d.records[i].step = steps[i].get<std::size_t>();
      const auto& c = m.at("characteristics");
      d.chars = {c.at("enabled").get<bool>(), c.at("smooth").get<bool>(), c.at("near_boundary").get<bool>(),
                 c.at("wrapped").get<std::size_t>()};
      d.symmetric_data = m.at("symmetric_data").get<bool>();
    } catch (const json::exception& e) {
      throw IoError(manifest_path.string() + ": " + e.what());
    }

    const auto verdicts = evaluate_checks(cfg, d);
    print_report(d.report, log);
    print_verdicts(verdicts, log);
    bool consistent = true;
    const auto& stored = m.at("verdicts");
    if (stored.size() != verdicts.size()) consistent = false;
    for (std::size_t i = 0; consistent && i < verdicts.size(); ++i) {
      consistent = stored[i].at("name") == verdicts[i].name && stored[i].at("passed") == verdicts[i].passed &&
                   stored[i].at("applicable") == verdicts[i].applicable;
    }
    if (!consistent) err << "stored verdicts differ from the offline re-evaluation\n";
    return all_passed(verdicts) && consistent ? kSuccess : kCheckFailure;
  });
}

unsigned sweep_workers() {
  if (const char* env = std::getenv("TBF_SWEEP_WORKERS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

namespace {

struct SweepJob {
  std::size_t index;
  CaseTag tag;
  double b;
  double amplitude;
  RunConfig cfg;
};

struct SweepRow {
  std::string status = "Error";
  double t_final = 0.0;
  std::string quantity;
  std::optional<Theorem41> t41;
  bool passed = false;
  std::string error;
};

std::vector<double> real_list(const json& sweep, const char* key, double fallback) {
  if (!sweep.contains(key)) return {fallback};
  const json& arr = sweep.at(key);
  if (!arr.is_array()) throw ConfigError(std::string("config error: sweep.") + key + ": expected a list");
  std::vector<double> out;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    if (!arr[i].is_number()) {
      throw ConfigError(std::string("config error: sweep.") + key + "[" + std::to_string(i) + "]: expected a number");
    }
    out.push_back(arr[i].get<double>());
  }
  return out;
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

int cmd_sweep(const fs::path& config, const std::optional<fs::path>& out_dir, std::ostream& log, std::ostream& err) {
  return guarded(err, [&] {
    const json j = read_json_file(config);
    if (!j.is_object()) throw ConfigError("config error: expected an object");
    for (auto it = j.begin(); it != j.end(); ++it) {
      if (it.key() != "base" && it.key() != "sweep" && it.key() != "output" && it.key() != "max_runs") {
        throw ConfigError("config error: " + it.key() + ": unknown field");
      }
    }
    const RunConfig base = parse_run_config(j.value("base", json::object()), config.parent_path());
    const json sweep = j.value("sweep", json::object());
    if (!sweep.is_object()) throw ConfigError("config error: sweep: expected an object");
    for (auto it = sweep.begin(); it != sweep.end(); ++it) {
      if (it.key() != "case" && it.key() != "b" && it.key() != "amplitude") {
        throw ConfigError("config error: sweep." + it.key() + ": unknown field");
      }
    }

    std::vector<CaseTag> cases;
    if (!sweep.contains("case")) {
      if (base.model.case_tag == CaseTag::Custom) throw ConfigError("config error: sweep.case: base model is Custom");
      cases.push_back(base.model.case_tag);
    } else {
      const json& arr = sweep.at("case");
      if (!arr.is_array()) throw ConfigError("config error: sweep.case: expected a list");
      for (std::size_t i = 0; i < arr.size(); ++i) {
        const auto tag = arr[i].is_string() ? parse_case_tag(arr[i].get<std::string>()) : std::nullopt;
        if (!tag || *tag == CaseTag::Custom) {
          throw ConfigError("config error: sweep.case[" + std::to_string(i) + "]: expected CaseI or CaseII");
        }
        cases.push_back(*tag);
      }
    }
    const auto bs = real_list(sweep, "b", base.model.b.value_or(0.0));
    const auto amps = real_list(sweep, "amplitude", base.u0.amplitude);
    std::size_t max_runs = 256;
    if (j.contains("max_runs")) {
      if (!j.at("max_runs").is_number_integer() || j.at("max_runs").get<long long>() < 0) {
        throw ConfigError("config error: max_runs: expected a non-negative integer");
      }
      max_runs = j.at("max_runs").get<std::size_t>();
    }
    const std::size_t total = cases.size() * bs.size() * amps.size();
    if (total > max_runs) {
      throw ConfigError("config error: sweep: " + std::to_string(total) + " combinations exceed max_runs=" +
                        std::to_string(max_runs));
    }
    const fs::path root = out_dir ? *out_dir : fs::path(j.value("output", std::string("sweep_out")));
    std::error_code ec;
    fs::create_directories(root, ec);
    if (ec) throw IoError("cannot create " + root.string() + ": " + ec.message());

    std::vector<SweepJob> jobs;
    for (CaseTag tag : cases) {
      for (double b : bs) {
        for (double a : amps) {
          SweepJob job{jobs.size(), tag, b, a, base};
          try {
            job.cfg.model = make_params(tag, b);
          } catch (const std::invalid_argument& e) {
            throw ConfigError(std::string("config error: sweep.b: ") + e.what());
          }
          job.cfg.u0.amplitude = a;
          job.cfg.outputs.directory = (root / ("run_" + std::to_string(job.index))).string();
          jobs.push_back(std::move(job));
        }
      }
    }

    std::vector<SweepRow> rows(jobs.size());
    std::atomic<std::size_t> next{0};
    std::mutex log_mutex;
    auto worker = [&] {
      for (std::size_t i = next++; i < jobs.size(); i = next++) {
        SweepRow& row = rows[i];
        try {
          const RunOutcome o = execute_run(jobs[i].cfg);
          write_run_outputs(jobs[i].cfg, o, jobs[i].cfg.outputs.directory);
          const RunReport& r = o.data.report;
          row.status = std::string(to_string(r.status));
          row.t_final = r.t_final;
          if (r.status == RunStatus::BlowUpDetected && r.blowup) row.quantity = std::string(to_string(r.blowup->quantity));
          row.t41 = o.t41;
          row.passed = all_passed(o.verdicts);
        } catch (const std::exception& e) {
          row.error = e.what();
        }
        std::lock_guard lock(log_mutex);
        log << "run_" << i << ": " << row.status << (row.error.empty() ? "" : " (" + row.error + ")") << '\n';
      }
    };
    const unsigned n_workers = std::min<std::size_t>(sweep_workers(), std::max<std::size_t>(jobs.size(), 1));
    std::vector<std::thread> pool;
    for (unsigned w = 1; w < n_workers; ++w) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    std::string csv = "case,b,k1,k2,k3,amplitude,status,t_final,blowup_quantity,theorem41_bound,bound_respected\n";
    bool ok = true;
    for (std::size_t i = 0; i < jobs.size(); ++i) {
      const SweepJob& job = jobs[i];
      const SweepRow& row = rows[i];
      ok = ok && row.error.empty() && row.passed;
      csv += std::string(to_string(job.tag)) + "," + num(job.b) + "," + num(job.cfg.model.k1) + "," +
             num(job.cfg.model.k2) + "," + num(job.cfg.model.k3) + "," + num(job.amplitude) + "," + row.status + "," +
             (row.error.empty() ? num(row.t_final) : std::string()) + "," + row.quantity + ",";
      if (row.status == "BlowUpDetected" && row.t41) {
        csv += num(row.t41->bound) + "," + (row.t41->respected ? "true" : "false");
      } else {
        csv += ",";
      }
      csv += "\n";
    }
    const fs::path summary = root / "summary.csv";
    {
      std::FILE* f = std::fopen(summary.string().c_str(), "wb");
      if (!f) throw IoError("cannot write " + summary.string());
      const bool written = std::fwrite(csv.data(), 1, csv.size(), f) == csv.size();
      if (std::fclose(f) != 0 || !written) throw IoError("write failed for " + summary.string());
    }
    log << jobs.size() << " runs, summary in " << summary.string() << '\n';
    return ok ? kSuccess : kCheckFailure;
  });
}

}  // namespace bfam::cli
