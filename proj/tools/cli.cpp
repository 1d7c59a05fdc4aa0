#include "lungkit/cli.hpp"

#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "lungkit/air_mask.hpp"
#include "lungkit/config.hpp"
#include "lungkit/lesion_synth.hpp"
#include "lungkit/mask_algebra.hpp"
#include "lungkit/metaimage.hpp"
#include "lungkit/phantom.hpp"
#include "lungkit/seg_metrics.hpp"
#include "lungkit/severity.hpp"
#include "lungkit/slice_export.hpp"
#include "lungkit/tables.hpp"

namespace lungkit::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kVersion = LUNGKIT_VERSION;

// Effective settings of one invocation; hashed into the provenance record.
Config settings_of(const std::map<std::string, std::string>& entries) {
  Config c;
  for (const auto& [k, v] : entries) c.set(k, v);
  return c;
}

json provenance(const std::string& subcommand, const Config& settings) {
  json j;
  j["tool"] = "lungkit";
  j["version"] = kVersion;
  j["subcommand"] = subcommand;
  j["settings"] = settings.values();
  j["config_hash"] = settings.hash();
  return j;
}

void write_json(const fs::path& path, const json& j) {
  std::ofstream out(path, std::ios::trunc);
  out << j.dump(2) << '\n';
  if (!out) throw Error(ErrorCode::IoFailure, "cannot write " + path.string());
}

fs::path sidecar(const fs::path& artifact) {
  fs::path p = artifact;
  p.replace_extension(".json");
  return p;
}

void make_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::IoFailure, "cannot create " + dir.string() + ": " + ec.message());
}

void ensure_parent(const fs::path& file) {
  if (file.has_parent_path()) make_dir(file.parent_path());
}

Config load_config(const std::string& path) {
  if (path.empty()) return {};
  Config c = Config::load(path);
  c.require_known(kPipelineKeys);
  return c;
}

std::string fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

json index_json(const Index3& i) { return json::array({i.x, i.y, i.z}); }

// ---------------------------------------------------------------------------

struct SynthesizeArgs {
  std::string ct, lung, out_dir, config;
};

void cmd_synthesize(const SynthesizeArgs& a, std::ostream& out) {
  const Config config = load_config(a.config);
  const LesionSynthesisParams params = synthesis_params_from(config);
  const Volume3D ct = read_volume(a.ct);
  const Mask3D lung = read_mask(a.lung);
  require_compatible(ct.geometry(), lung.geometry(), "synthesize");
  const SynthesisResult r = synthesize(ct, lung, params);

  const fs::path dir = a.out_dir;
  make_dir(dir);
  write_volume(r.synthetic_ct, dir / "synthetic_ct.mhd", ElementType::Float);
  write_mask(r.lesion_mask, dir / "lesion_mask.mhd");
  write_mask(r.healthy_mask, dir / "healthy_mask.mhd");

  Config settings = to_config(params);
  settings.set("ct", a.ct);
  settings.set("lung", a.lung);
  json prov = provenance("synthesize", settings);
  prov["rng"] = CounterRng::kName;
  prov["rng_seed"] = params.rng_seed;
  prov["lesion_count"] = r.lesion_count;
  prov["lesion_voxels"] = r.lesion_mask.count();
  prov["seeds"] = json::array();
  for (const auto& s : r.seeds) prov["seeds"].push_back(index_json(s));
  write_json(dir / "provenance.json", prov);
  out << "lesions=" << r.lesion_count << " lesion_voxels=" << r.lesion_mask.count() << '\n';
}

struct AirmaskArgs {
  std::string ct, lung, out, config;
  std::optional<double> bin_width;
};

void cmd_airmask(const AirmaskArgs& a, std::ostream& out) {
  const Config config = load_config(a.config);
  double bin_width = 2.0;
  if (config.has("bin_width")) bin_width = parse_double(config.get("bin_width"));
  if (a.bin_width) bin_width = *a.bin_width;

  const Volume3D ct = read_volume(a.ct);
  const Mask3D lung = read_mask(a.lung);
  require_compatible(ct.geometry(), lung.geometry(), "airmask");
  const PeakFit fit = fit_peak(lung_histogram(ct, lung, bin_width));
  const Mask3D air = compute_air_mask(ct, lung, fit.threshold);

  ensure_parent(a.out);
  write_mask(air, a.out);
  Config settings;
  settings.set("bin_width", std::to_string(bin_width));
  settings.set("ct", a.ct);
  settings.set("lung", a.lung);
  json report = provenance("airmask", settings);
  report["mu"] = fit.mu;
  report["sigma"] = fit.sigma;
  report["threshold"] = fit.threshold;
  report["bin_width"] = bin_width;
  report["fit_bin_count"] = fit.fit_bin_count;
  report["peak_bin_center"] = fit.peak_bin_center;
  write_json(sidecar(a.out), report);
  out << "mu=" << fit.mu << " sigma=" << fit.sigma << " threshold=" << fit.threshold << '\n';
}

struct CombineArgs {
  std::string lung, healthy, air, out;
};

void cmd_combine(const CombineArgs& a, std::ostream& out) {
  const Mask3D lung = read_mask(a.lung);
  const Mask3D healthy = read_mask(a.healthy);
  const Mask3D air = read_mask(a.air);
  const Mask3D lesion = combine_masks(lung, healthy, air);
  ensure_parent(a.out);
  write_mask(lesion, a.out);
  write_json(sidecar(a.out), provenance("combine", settings_of({{"lung", a.lung},
                                                                 {"healthy", a.healthy},
                                                                 {"air", a.air}})));
  out << "lesion_voxels=" << lesion.count() << '\n';
}

struct EvaluateArgs {
  std::string pred, ref, batch, id, out, connectivity = "face6";
};

void cmd_evaluate(const EvaluateArgs& a, std::ostream& out) {
  const Connectivity conn = parse_connectivity(a.connectivity);
  std::ostringstream table;
  write_metrics_header(table);

  if (!a.batch.empty()) {
    const fs::path manifest = a.batch;
    const CsvTable rows = read_csv(manifest);
    const std::size_t c_id = rows.column("id"), c_pred = rows.column("pred"), c_ref = rows.column("ref");
    if (rows.rows.empty()) throw Error(ErrorCode::MalformedInput, "batch manifest has no rows");
    const fs::path base = manifest.parent_path();
    std::vector<double> dsc, ji, asd_mm, n_a, n_b;
    for (const auto& row : rows.rows) {
      SegMetrics m;
      try {
        m = evaluate(read_mask(base / row[c_pred]), read_mask(base / row[c_ref]), conn);
      } catch (const Error& e) {
        throw Error(e.code(), "row '" + row[c_id] + "': " + e.what());
      }
      write_metrics_row(table, row[c_id], m);
      dsc.push_back(m.dsc);
      ji.push_back(m.ji);
      asd_mm.push_back(m.asd_mm);
      n_a.push_back(static_cast<double>(m.n_a));
      n_b.push_back(static_cast<double>(m.n_b));
    }
    table << "median," << fixed6(median(dsc)) << ',' << fixed6(median(ji)) << ',' << fixed6(median(asd_mm)) << ','
          << median(n_a) << ',' << median(n_b) << '\n';
  } else {
    if (a.pred.empty() || a.ref.empty())
      throw Error(ErrorCode::InvalidArgument, "evaluate needs --pred and --ref, or --batch");
    const SegMetrics m = evaluate(read_mask(a.pred), read_mask(a.ref), conn);
    write_metrics_row(table, a.id.empty() ? fs::path(a.pred).stem().string() : a.id, m);
  }

  out << table.str();
  if (!a.out.empty()) {
    ensure_parent(a.out);
    std::ofstream f(a.out, std::ios::trunc);
    f << table.str();
    if (!f) throw Error(ErrorCode::IoFailure, "cannot write " + a.out);
  }
}

struct SeverityArgs {
  std::string ct, lesion, lung, id = "subject", out;
  bool append = false;
};

void cmd_severity(const SeverityArgs& a, std::ostream& out) {
  const Volume3D ct = read_volume(a.ct);
  const Mask3D lesion = read_mask(a.lesion);
  const Mask3D lung = read_mask(a.lung);
  require_compatible(ct.geometry(), lesion.geometry(), "severity (lesion)");
  require_compatible(ct.geometry(), lung.geometry(), "severity (lung)");
  const double dl = damage_load(lesion, lung);
  std::string ds = "NA";
  if (lesion.empty()) warn("lesion mask is empty; damage score is undefined");
  else {
    std::ostringstream os;
    os.precision(9);
    os << damage_score(ct, lesion);
    ds = os.str();
  }
  std::ostringstream dl_text;
  dl_text.precision(9);
  dl_text << dl;
  const std::string row = a.id + "," + dl_text.str() + "," + ds + "\n";
  out << "id,dl,ds\n" << row;

  if (!a.out.empty()) {
    ensure_parent(a.out);
    const bool header = !a.append || !fs::exists(a.out) || fs::file_size(a.out) == 0;
    std::ofstream f(a.out, a.append ? std::ios::app : std::ios::trunc);
    if (header) f << "id,dl,ds\n";
    f << row;
    if (!f) throw Error(ErrorCode::IoFailure, "cannot write " + a.out);
  }
}

struct CorrelateArgs {
  std::string scores, labs, out;
};

void cmd_correlate(const CorrelateArgs& a, std::ostream& out) {
  const auto records = join_scores_and_labs(read_csv(a.scores), read_csv(a.labs));
  const auto results = correlate_table(records);
  std::ostringstream report;
  write_correlation_report(report, results);
  for (const auto& r : results)
    if (r.failure) warn(r.score + "/" + r.lab + ": " + r.failure_message);
  out << report.str();
  if (!a.out.empty()) {
    ensure_parent(a.out);
    std::ofstream f(a.out, std::ios::trunc);
    f << report.str();
    if (!f) throw Error(ErrorCode::IoFailure, "cannot write " + a.out);
    write_json(sidecar(a.out), provenance("correlate", settings_of({{"scores", a.scores}, {"labs", a.labs}})));
  }
}

struct ExportArgs {
  std::string ct, mask, out_dir, window, config;
};

void cmd_export(const ExportArgs& a, std::ostream& out) {
  const Config config = load_config(a.config);
  HuWindow window;
  std::string window_text = config.has("hu_window") ? config.get("hu_window") : "";
  if (!a.window.empty()) window_text = a.window;
  if (!window_text.empty()) {
    const auto [lo, hi] = parse_double_pair(window_text);
    window = {lo, hi};
  }
  const Volume3D ct = read_volume(a.ct);
  const Mask3D mask = read_mask(a.mask);
  require_compatible(ct.geometry(), mask.geometry(), "export-slices");
  const auto manifest = export_slice_dataset(ct, mask, a.out_dir, window);
  write_json(fs::path(a.out_dir) / "provenance.json",
             provenance("export-slices", settings_of({{"ct", a.ct},
                                                      {"mask", a.mask},
                                                      {"hu_window", std::to_string(window.low) + "," +
                                                                        std::to_string(window.high)}})));
  out << "slices=" << manifest.entries.size() << '\n';
}

struct PhantomArgs {
  std::string spec, out_dir;
};

void cmd_phantom(const PhantomArgs& a, std::ostream& out) {
  const Config config = a.spec.empty() ? Config{} : Config::load(a.spec);
  const PhantomSpec spec = phantom_spec_from(config);
  const auto [ct, lung] = make_phantom(spec);
  make_dir(a.out_dir);
  write_volume(ct, fs::path(a.out_dir) / "phantom_ct.mhd", ElementType::Float);
  write_mask(lung, fs::path(a.out_dir) / "phantom_lung.mhd");
  json prov = provenance("phantom", config);
  prov["rng"] = CounterRng::kName;
  prov["lung_voxels"] = lung.count();
  write_json(fs::path(a.out_dir) / "provenance.json", prov);
  out << "lung_voxels=" << lung.count() << '\n';
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"lungkit: synthetic chest CT, mask combination and severity metrics", "lungkit"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  SynthesizeArgs syn;
  auto* s_syn = app.add_subcommand("synthesize", "Grow pseudo-lesions inside a lung mask");
  s_syn->add_option("--ct", syn.ct, "CT volume (.mhd)")->required();
  s_syn->add_option("--lung", syn.lung, "Lung mask (.mhd)")->required();
  s_syn->add_option("--out-dir", syn.out_dir, "Output directory")->required();
  s_syn->add_option("--config", syn.config, "Pipeline config (key = value)");

  AirmaskArgs air;
  auto* s_air = app.add_subcommand("airmask", "Fit the lung HU peak and threshold pulmonary air");
  s_air->add_option("--ct", air.ct)->required();
  s_air->add_option("--lung", air.lung)->required();
  s_air->add_option("--out", air.out, "Air mask output (.mhd); fit report goes next to it as .json")->required();
  s_air->add_option("--bin-width", air.bin_width, "Histogram bin width in HU (default 2)");
  s_air->add_option("--config", air.config);

  CombineArgs comb;
  auto* s_comb = app.add_subcommand("combine", "Lesion mask = lung and not healthy and not air");
  s_comb->add_option("--lung", comb.lung)->required();
  s_comb->add_option("--healthy", comb.healthy)->required();
  s_comb->add_option("--air", comb.air)->required();
  s_comb->add_option("--out", comb.out)->required();

  EvaluateArgs ev;
  auto* s_ev = app.add_subcommand("evaluate", "Dice, Jaccard and average surface distance");
  s_ev->add_option("--pred", ev.pred);
  s_ev->add_option("--ref", ev.ref);
  s_ev->add_option("--batch", ev.batch, "CSV with columns id,pred,ref (paths relative to the CSV)");
  s_ev->add_option("--id", ev.id, "Row id for single-pair mode");
  s_ev->add_option("--out", ev.out, "Also write the CSV here");
  s_ev->add_option("--connectivity", ev.connectivity, "Surface connectivity: face6 or vertex26");

  SeverityArgs sev;
  auto* s_sev = app.add_subcommand("severity", "Damage load and damage score");
  s_sev->add_option("--ct", sev.ct)->required();
  s_sev->add_option("--lesion", sev.lesion)->required();
  s_sev->add_option("--lung", sev.lung)->required();
  s_sev->add_option("--id", sev.id);
  s_sev->add_option("--out", sev.out, "Scores CSV (id,dl,ds)");
  s_sev->add_flag("--append", sev.append, "Append to --out instead of overwriting");

  CorrelateArgs cor;
  auto* s_cor = app.add_subcommand("correlate", "Pearson correlation of DL/DS against WBC/LYM%");
  s_cor->add_option("--scores", cor.scores)->required();
  s_cor->add_option("--labs", cor.labs)->required();
  s_cor->add_option("--out", cor.out);

  ExportArgs ex;
  auto* s_ex = app.add_subcommand("export-slices", "Write axial image/mask slice pairs for 2D training");
  s_ex->add_option("--ct", ex.ct)->required();
  s_ex->add_option("--mask", ex.mask)->required();
  s_ex->add_option("--out-dir", ex.out_dir)->required();
  s_ex->add_option("--window", ex.window, "HU window lo,hi (default -1000,400)");
  s_ex->add_option("--config", ex.config);

  PhantomArgs ph;
  auto* s_ph = app.add_subcommand("phantom", "Generate a test phantom CT and lung mask");
  s_ph->add_option("--spec", ph.spec, "Phantom spec (key = value)");
  s_ph->add_option("--out-dir", ph.out_dir)->required();

  std::vector<std::string> argv_storage{"lungkit"};
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : argv_storage) argv.push_back(s.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "E_USAGE: " << e.what() << '\n';
    return 2;
  }

  const std::vector<std::pair<CLI::App*, std::function<void()>>> handlers{
      {s_syn, [&] { cmd_synthesize(syn, out); }},  {s_air, [&] { cmd_airmask(air, out); }},
      {s_comb, [&] { cmd_combine(comb, out); }},   {s_ev, [&] { cmd_evaluate(ev, out); }},
      {s_sev, [&] { cmd_severity(sev, out); }},    {s_cor, [&] { cmd_correlate(cor, out); }},
      {s_ex, [&] { cmd_export(ex, out); }},        {s_ph, [&] { cmd_phantom(ph, out); }},
  };
  try {
    for (const auto& [sub, handler] : handlers)
      if (sub->parsed()) handler();
  } catch (const Error& e) {
    err << error_tag(e.code()) << ": " << e.what() << '\n';
    return exit_status(e.code());
  } catch (const std::bad_alloc&) {
    err << "E_MEMORY: out of memory\n";
    return 3;
  } catch (const std::exception& e) {
    err << "E_INTERNAL: " << e.what() << '\n';
    return 3;
  }
  return 0;
}

}  // namespace lungkit::cli
