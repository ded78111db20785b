// ncg: batch driver for the lattice Hall pipeline and the invariant checks.

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "ncg/io.hpp"
#include "ncg/ncg.hpp"

namespace {

using namespace ncg;

enum Exit { kOk = 0, kCheckFailed = 1, kUsage = 2 };

struct Options {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out = "out";
  std::optional<double> tolerance;
  std::string format = "json";
  std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};
  int steps = 8;
  double w_to = 0.5;
};

ModelConfig default_config() {
  ModelConfig c;
  c.geometry = LatticeGeometry::torus(24, 24);
  c.p = 1;
  c.q = 3;
  c.t = 1.0;
  c.W = 0.0;
  c.seed = 1;
  c.mu = -1.366;
  c.gap_lo = -1.93;
  c.gap_hi = -0.78;
  c.margin = 0.02;
  return c;
}

ModelConfig load_config(const Options& o) {
  ConfigOverrides ov;
  ov.seed = o.seed;
  if (o.config_path.empty()) return apply_overrides(default_config(), ov);
  return parse_config(o.config_path, ov);
}

BulkEdgeOptions bulk_edge_options(const Options& o) {
  BulkEdgeOptions b;
  if (o.tolerance) b.tolerance = *o.tolerance;
  return b;
}

std::string join(const std::vector<std::uint64_t>& xs) {
  std::string s;
  for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? "," : "") + std::to_string(xs[i]);
  return s;
}

class Runner {
 public:
  Runner(std::string command, const Options& o) : writer_(o.out) {
    manifest_.command = std::move(command);
    manifest_.wall_clock = utc_timestamp();
  }

  RunManifest& manifest() { return manifest_; }

  void emit_json(const JsonObject& payload) { report(writer_.write_json(manifest_, payload)); }
  void emit_csv(const std::string& csv) { report(writer_.write_csv(manifest_, csv)); }

  void finish() {
    const auto path = writer_.write_manifest(manifest_);
    std::cout << "manifest: " << path.string() << "\n";
  }

 private:
  void report(const std::filesystem::path& p) { std::cout << "wrote " << p.string() << "\n"; }

  ReportWriter writer_;
  RunManifest manifest_;
};

std::string report_csv(const std::vector<std::pair<std::string, PairingReport>>& rows) {
  std::string out = "quantity,value_re,value_im,nearest_int,deviation\n";
  for (const auto& [name, r] : rows)
    out += name + "," + format_double(r.value.real()) + "," + format_double(r.value.imag()) + "," +
           std::to_string(r.nearest_integer) + "," + format_double(r.deviation) + "\n";
  return out;
}

void emit_pairings(Runner& run, const Options& o, const std::vector<std::pair<std::string, PairingReport>>& rows,
                   const JsonObject& json) {
  if (o.format == "csv")
    run.emit_csv(report_csv(rows));
  else
    run.emit_json(json);
}

int cmd_spectrum(const Options& o) {
  const ModelConfig cfg = bulk_config(load_config(o));
  const RealVector ev = hermitian_eig(build_bulk_hamiltonian(cfg)).values;
  const auto gaps = find_gaps(ev, BulkEdgeOptions{}.min_gap_width);
  Runner run("spectrum", o);
  run.manifest().config = cfg;
  if (o.format == "csv") {
    std::string csv = "index,energy\n";
    for (Eigen::Index i = 0; i < ev.size(); ++i) csv += std::to_string(i) + "," + format_double(ev(i)) + "\n";
    run.emit_csv(csv);
  } else {
    std::string values = "[", gap_list = "[";
    for (Eigen::Index i = 0; i < ev.size(); ++i) values += (i ? "," : "") + format_double(ev(i));
    for (std::size_t i = 0; i < gaps.size(); ++i)
      gap_list += (i ? "," : "") + std::string("[") + format_double(gaps[i].first) + "," +
                  format_double(gaps[i].second) + "]";
    JsonObject j;
    j.integer("count", ev.size()).raw("gaps", gap_list + "]").raw("eigenvalues", values + "]");
    run.emit_json(j);
  }
  for (const auto& [lo, hi] : gaps) std::cout << "gap (" << format_double(lo) << ", " << format_double(hi) << ")\n";
  run.finish();
  return kOk;
}

int cmd_bulk_chern(const Options& o) {
  const ModelConfig cfg = load_config(o);
  const BulkEdgeOptions b = bulk_edge_options(o);
  const PairingReport r = run_bulk(cfg, b);
  Runner run("bulk-chern", o);
  run.manifest().config = cfg;
  emit_pairings(run, o, {{"chern", r}}, report_json(r));
  std::cout << "chern " << format_double(r.value.real()) << " (nearest " << r.nearest_integer << ", deviation "
            << format_double(r.deviation) << ")\n";
  run.finish();
  return r.deviation <= b.integer_tolerance ? kOk : kCheckFailed;
}

int cmd_edge_index(const Options& o) {
  const ModelConfig cfg = load_config(o);
  const BulkEdgeOptions b = bulk_edge_options(o);
  const PairingReport r = run_edge(cfg, b);
  Runner run("edge-index", o);
  run.manifest().config = cfg;
  emit_pairings(run, o, {{"edge", r}}, report_json(r));
  std::cout << "edge " << format_double(r.value.real()) << " (nearest " << r.nearest_integer << ", deviation "
            << format_double(r.deviation) << ")\n";
  run.finish();
  return r.deviation <= b.integer_tolerance ? kOk : kCheckFailed;
}

int cmd_bulk_edge(const Options& o) {
  const ModelConfig cfg = load_config(o);
  const BulkEdgeOptions b = bulk_edge_options(o);
  const BulkEdgeReport r = compare_bulk_edge(cfg, b);
  Runner run("bulk-edge", o);
  run.manifest().config = cfg;
  run.manifest().parameters = {{"tolerance", format_double(b.tolerance)}};
  emit_pairings(run, o, {{"chern", r.bulk}, {"edge", r.edge}}, bulk_edge_json(r));
  std::cout << "chern " << format_double(r.bulk.value.real()) << ", edge " << format_double(r.edge.value.real())
            << ", discrepancy " << format_double(r.discrepancy) << ": " << (r.verdict ? "pass" : "fail") << "\n";
  run.finish();
  return r.verdict ? kOk : kCheckFailed;
}

int cmd_ensemble(const Options& o) {
  const ModelConfig cfg = load_config(o);
  const BulkEdgeOptions b = bulk_edge_options(o);
  const EnsembleResult e = ensemble_scan(cfg, o.seeds, b);
  Runner run("ensemble", o);
  run.manifest().config = cfg;
  run.manifest().parameters = {{"seeds", join(e.seeds)}, {"tolerance", format_double(b.tolerance)}};
  if (o.format == "csv") {
    run.emit_csv(ensemble_csv(e));
  } else {
    std::string list = "[";
    for (std::size_t i = 0; i < e.reports.size(); ++i) {
      JsonObject row;
      row.integer("seed", static_cast<long long>(e.seeds[i])).object("report", bulk_edge_json(e.reports[i]));
      list += (i ? "," : "") + row.dump();
    }
    JsonObject j;
    j.num("bulk_mean", e.bulk_mean)
        .num("bulk_std", e.bulk_std)
        .num("edge_mean", e.edge_mean)
        .num("edge_std", e.edge_std)
        .str("verdict", e.all_pass ? "pass" : "fail")
        .raw("runs", list + "]");
    run.emit_json(j);
  }
  std::cout << e.reports.size() << " seeds, bulk " << format_double(e.bulk_mean) << " +- " << format_double(e.bulk_std)
            << ", edge " << format_double(e.edge_mean) << " +- " << format_double(e.edge_std) << ": "
            << (e.all_pass ? "pass" : "fail") << "\n";
  run.finish();
  return e.all_pass ? kOk : kCheckFailed;
}

int cmd_homotopy(const Options& o) {
  const ModelConfig cfg = load_config(o);
  const BulkEdgeOptions b = bulk_edge_options(o);
  const auto path = disorder_ramp(cfg, cfg.W, o.w_to, o.steps);
  const HomotopyResult h = homotopy_scan(path, b);
  Runner run("homotopy", o);
  run.manifest().config = cfg;
  run.manifest().parameters = {{"steps", std::to_string(o.steps)}, {"w_to", format_double(o.w_to)}};
  if (o.format == "csv") {
    std::string csv = "step,W,value_re,value_im,nearest_int,deviation\n";
    for (std::size_t i = 0; i < h.reports.size(); ++i) {
      const auto& r = h.reports[i];
      csv += std::to_string(i) + "," + format_double(path[i].W) + "," + format_double(r.value.real()) + "," +
             format_double(r.value.imag()) + "," + std::to_string(r.nearest_integer) + "," +
             format_double(r.deviation) + "\n";
    }
    run.emit_csv(csv);
  } else {
    std::string list = "[";
    for (std::size_t i = 0; i < h.reports.size(); ++i) {
      JsonObject row;
      row.num("W", path[i].W).object("report", report_json(h.reports[i]));
      list += (i ? "," : "") + row.dump();
    }
    JsonObject j;
    j.boolean("constant", h.constant).raw("path", list + "]");
    run.emit_json(j);
  }
  std::cout << h.reports.size() << " path points, integer " << (h.constant ? "constant" : "changes") << "\n";
  run.finish();
  return h.constant ? kOk : kCheckFailed;
}

int cmd_selftest(const Options& o) {
  const auto checks = run_selftest();
  bool all = true;
  std::string csv = "check,measured,threshold,passed\n";
  std::string list = "[";
  for (std::size_t i = 0; i < checks.size(); ++i) {
    const auto& c = checks[i];
    all = all && c.passed;
    std::printf("%-20s %-4s measured %.3e threshold %.3e\n", c.name.c_str(), c.passed ? "PASS" : "FAIL", c.measured,
                c.threshold);
    csv += c.name + "," + format_double(c.measured) + "," + format_double(c.threshold) + "," +
           (c.passed ? "true" : "false") + "\n";
    JsonObject row;
    row.str("check", c.name).num("measured", c.measured).num("threshold", c.threshold).boolean("passed", c.passed);
    list += (i ? "," : "") + row.dump();
  }
  Runner run("selftest", o);
  run.manifest().config = load_config(o);
  if (o.format == "csv") {
    run.emit_csv(csv);
  } else {
    JsonObject j;
    j.boolean("passed", all).raw("checks", list + "]");
    run.emit_json(j);
  }
  run.finish();
  return all ? kOk : kCheckFailed;
}

void print_error(ErrorCode code, std::string_view message) {
  JsonObject j;
  j.str("error", to_string(code)).str("message", message);
  std::cerr << j.dump() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lattice bulk and edge Hall pairings with cyclic-cocycle checks"};
  app.set_version_flag("--version", std::string(ncg::kVersion));
  app.require_subcommand(1);

  Options opts;
  std::optional<std::uint64_t> seed;
  std::optional<double> tolerance;
  const auto common = [&](CLI::App* sub) {
    sub->add_option("--config", opts.config_path, "Key-value config file (defaults to the flux 1/3 example)")
        ->check(CLI::ExistingFile);
    sub->add_option("--seed", seed, "Override the disorder seed");
    sub->add_option("--out", opts.out, "Output directory")->capture_default_str();
    sub->add_option("--tolerance", tolerance, "Bound on |chern + edge| for the bulk-edge verdict")
        ->check(CLI::PositiveNumber);
    sub->add_option("--format", opts.format, "Report format")
        ->check(CLI::IsMember({"json", "csv"}))
        ->capture_default_str();
  };

  using Handler = int (*)(const Options&);
  std::vector<std::pair<CLI::App*, Handler>> commands;
  const auto add = [&](const char* name, const char* help, Handler h) {
    CLI::App* sub = app.add_subcommand(name, help);
    common(sub);
    commands.emplace_back(sub, h);
    return sub;
  };
  add("spectrum", "Bulk eigenvalues and spectral gaps", cmd_spectrum);
  add("bulk-chern", "Chern pairing of the Fermi projection on the torus", cmd_bulk_chern);
  add("edge-index", "Edge pairing of the edge unitary on the cylinder", cmd_edge_index);
  add("bulk-edge", "Compare bulk and edge pairings", cmd_bulk_edge);
  add("ensemble", "Bulk-edge comparison over disorder seeds", cmd_ensemble)
      ->add_option("--seeds", opts.seeds, "Disorder seeds")
      ->delimiter(',')
      ->capture_default_str();
  CLI::App* homotopy = add("homotopy", "Bulk pairing along a disorder ramp", cmd_homotopy);
  homotopy->add_option("--steps", opts.steps, "Ramp steps")->check(CLI::PositiveNumber)->capture_default_str();
  homotopy->add_option("--w-to", opts.w_to, "Final disorder amplitude")->check(CLI::NonNegativeNumber)->capture_default_str();
  add("selftest", "Run the invariant checks", cmd_selftest);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }
  opts.seed = seed;
  opts.tolerance = tolerance;

  for (const auto& [sub, handler] : commands) {
    if (!sub->parsed()) continue;
    try {
      return handler(opts);
    } catch (const ncg::Error& e) {
      print_error(e.code(), e.what());
      const auto c = e.code();
      return c == ErrorCode::MissingKey || c == ErrorCode::BadValue || c == ErrorCode::IoError ? kUsage : kCheckFailed;
    } catch (const std::exception& e) {
      print_error(ErrorCode::InvalidArgument, e.what());
      return kCheckFailed;
    }
  }
  return kUsage;
}
