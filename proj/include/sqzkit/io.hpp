#pragma once

#include <charconv>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "sqzkit/budget.hpp"
#include "sqzkit/errors.hpp"
#include "sqzkit/fit.hpp"
#include "sqzkit/spectra.hpp"
#include "sqzkit/synth.hpp"

namespace sqzkit::io {

inline constexpr const char* tool_version = "0.1.0";

// ---------------------------------------------------------------- digests

inline std::uint64_t fnv1a(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::string digest_hex(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open: " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::string file_digest_hex(const std::filesystem::path& path) {
  return digest_hex(fnv1a(read_file(path)));
}

// ------------------------------------------------------------- formatting

inline std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string fmt_double(double v, int precision) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.*g", precision, v);
  return buf;
}

// ------------------------------------------------------ key-value parsing

struct KvEntry {
  std::string section;  // empty for the top section
  std::string key;
  std::string value;
  int line = 0;
};

struct KvFile {
  std::string path;
  std::vector<KvEntry> entries;

  const KvEntry* find(std::string_view section, std::string_view key) const {
    for (const auto& e : entries)
      if (e.section == section && e.key == key) return &e;
    return nullptr;
  }
  bool has(std::string_view section, std::string_view key) const {
    return find(section, key) != nullptr;
  }
  std::vector<const KvEntry*> all(std::string_view section, std::string_view key) const {
    std::vector<const KvEntry*> out;
    for (const auto& e : entries)
      if (e.section == section && e.key == key) out.push_back(&e);
    return out;
  }

  const KvEntry& require(std::string_view section, std::string_view key) const {
    const KvEntry* e = find(section, key);
    if (!e)
      throw ConfigError(path + ": missing required key '" + std::string(key) +
                        (section.empty() ? "'" : "' in section [" + std::string(section) + "]"));
    return *e;
  }

  double to_double(const KvEntry& e) const {
    const char* b = e.value.data();
    const char* end = b + e.value.size();
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(b, end, v);
    if (ec != std::errc() || ptr != end)
      throw ConfigError(path, e.line, "expected a number for '" + e.key + "', got '" + e.value + "'");
    return v;
  }
  double get_double(std::string_view section, std::string_view key) const {
    return to_double(require(section, key));
  }
  std::optional<double> get_optional_double(std::string_view section, std::string_view key) const {
    const KvEntry* e = find(section, key);
    if (!e) return std::nullopt;
    return to_double(*e);
  }
  long get_long(std::string_view section, std::string_view key) const {
    const KvEntry& e = require(section, key);
    const char* b = e.value.data();
    const char* end = b + e.value.size();
    long v = 0;
    auto [ptr, ec] = std::from_chars(b, end, v);
    if (ec != std::errc() || ptr != end)
      throw ConfigError(path, e.line, "expected an integer for '" + e.key + "'");
    return v;
  }
  std::uint64_t get_u64(std::string_view section, std::string_view key) const {
    const KvEntry& e = require(section, key);
    const char* b = e.value.data();
    const char* end = b + e.value.size();
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(b, end, v);
    if (ec != std::errc() || ptr != end)
      throw ConfigError(path, e.line, "expected an unsigned integer for '" + e.key + "'");
    return v;
  }
  std::string get_string(std::string_view section, std::string_view key) const {
    return require(section, key).value;
  }
  bool get_bool_or(std::string_view section, std::string_view key, bool fallback) const {
    const KvEntry* e = find(section, key);
    if (!e) return fallback;
    if (e->value == "true" || e->value == "1" || e->value == "yes") return true;
    if (e->value == "false" || e->value == "0" || e->value == "no") return false;
    throw ConfigError(path, e->line, "expected true/false for '" + e->key + "'");
  }
};

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

// name = value lines, # comments (full-line or trailing), [section] headers.
inline KvFile parse_kv(std::istream& in, std::string path) {
  KvFile out;
  out.path = std::move(path);
  std::string raw;
  int line_no = 0;
  std::string section;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line(raw);
    if (const auto hash = line.find('#'); hash != std::string_view::npos)
      line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError(out.path, line_no, "malformed section header");
      section = std::string(trim(line.substr(1, line.size() - 2)));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError(out.path, line_no, "expected 'name = value'");
    const std::string key(trim(line.substr(0, eq)));
    const std::string value(trim(line.substr(eq + 1)));
    if (key.empty()) throw ConfigError(out.path, line_no, "empty key");
    out.entries.push_back({section, key, value, line_no});
  }
  return out;
}

inline KvFile load_kv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open: " + path.string());
  return parse_kv(in, path.string());
}

class KvWriter {
 public:
  void comment(const std::string& text) { body_ += "# " + text + "\n"; }
  void blank() { body_ += "\n"; }
  void section(const std::string& name) { body_ += "[" + name + "]\n"; }
  void put(const std::string& key, const std::string& value) {
    body_ += key + " = " + value + "\n";
  }
  void put(const std::string& key, double value) { put(key, fmt_double(value)); }
  void put(const std::string& key, long value) { put(key, std::to_string(value)); }
  void put(const std::string& key, bool value) { put(key, std::string(value ? "true" : "false")); }
  const std::string& str() const { return body_; }

  void save(const std::filesystem::path& path) const {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write: " + path.string());
    out << body_;
  }

 private:
  std::string body_;
};

// ---------------------------------------------------------- spectrum files

// CSV with a fixed header; metadata rides in leading comment lines.
inline void save_spectrum(const std::filesystem::path& path, const spectra::SpectrumRecord& rec) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write: " + path.string());
  if (!rec.meta.label.empty()) out << "# label = " << rec.meta.label << "\n";
  out << "# acq_index = " << rec.meta.acq_index << "\n";
  if (rec.meta.rbw_hz) out << "# rbw_hz = " << fmt_double(*rec.meta.rbw_hz) << "\n";
  out << "frequency_hz,power_linear\n";
  for (std::size_t i = 0; i < rec.frequencies_hz.size(); ++i)
    out << fmt_double(rec.frequencies_hz[i]) << ',' << fmt_double(rec.power[i]) << '\n';
}

namespace detail {

inline double parse_csv_double(const std::string& path, int line, std::string_view field) {
  field = trim(field);
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc() || ptr != field.data() + field.size())
    throw ConfigError(path, line, "bad number '" + std::string(field) + "'");
  return v;
}

struct CommentMeta {
  std::string label;
  std::optional<long> acq_index;
  std::optional<double> rbw_hz;
};

inline bool parse_comment_meta(std::string_view line, CommentMeta& meta) {
  line = trim(line);
  if (line.empty() || line.front() != '#') return false;
  line = trim(line.substr(1));
  const auto eq = line.find('=');
  if (eq == std::string_view::npos) return true;  // free comment
  const std::string key(trim(line.substr(0, eq)));
  const std::string value(trim(line.substr(eq + 1)));
  if (key == "label") meta.label = value;
  if (key == "acq_index") meta.acq_index = std::stol(value);
  if (key == "rbw_hz") meta.rbw_hz = std::stod(value);
  return true;
}

}  // namespace detail

inline spectra::SpectrumRecord load_spectrum(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open: " + path.string());
  spectra::SpectrumRecord rec;
  std::string raw;
  int line_no = 0;
  bool header_seen = false;
  detail::CommentMeta meta;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = trim(raw);
    if (line.empty()) continue;
    if (!header_seen && detail::parse_comment_meta(line, meta)) continue;
    if (!header_seen) {
      if (line != "frequency_hz,power_linear")
        throw ConfigError(path.string(), line_no, "expected header 'frequency_hz,power_linear'");
      header_seen = true;
      continue;
    }
    const auto comma = line.find(',');
    if (comma == std::string_view::npos)
      throw ConfigError(path.string(), line_no, "expected 'frequency,power'");
    rec.frequencies_hz.push_back(
        detail::parse_csv_double(path.string(), line_no, line.substr(0, comma)));
    rec.power.push_back(detail::parse_csv_double(path.string(), line_no, line.substr(comma + 1)));
  }
  if (!header_seen) throw ConfigError(path.string() + ": missing header line");
  rec.meta.label = meta.label.empty() ? path.stem().string() : meta.label;
  rec.meta.acq_index = meta.acq_index.value_or(0);
  rec.meta.rbw_hz = meta.rbw_hz;
  spectra::validate(rec);
  return rec;
}

// -------------------------------------------------------- ensemble manifest

struct ManifestEntry {
  std::string role;  // signal | dark | shot
  std::string path;
};

inline void save_ensemble_manifest(const std::filesystem::path& path,
                                   const std::vector<ManifestEntry>& entries) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write: " + path.string());
  out << "role,path\n";
  for (const auto& e : entries) out << e.role << ',' << e.path << '\n';
}

inline std::vector<ManifestEntry> load_ensemble_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open: " + path.string());
  std::vector<ManifestEntry> out;
  std::string raw;
  int line_no = 0;
  bool header_seen = false;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    if (!header_seen) {
      if (line != "role,path")
        throw ConfigError(path.string(), line_no, "expected header 'role,path'");
      header_seen = true;
      continue;
    }
    const auto comma = line.find(',');
    if (comma == std::string_view::npos)
      throw ConfigError(path.string(), line_no, "expected 'role,path'");
    ManifestEntry e{std::string(trim(line.substr(0, comma))),
                    std::string(trim(line.substr(comma + 1)))};
    if (e.role != "signal" && e.role != "dark" && e.role != "shot")
      throw ConfigError(path.string(), line_no, "unknown role '" + e.role + "'");
    out.push_back(std::move(e));
  }
  return out;
}

// ------------------------------------------------------------- trace files

// Export is presentation-layer dB; arithmetic stays linear internally.
inline void save_trace_pair(const std::filesystem::path& path, const spectra::TracePair& t) {
  spectra::validate(t);
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write: " + path.string());
  out << "frequency_hz,upper_db,lower_db\n";
  for (std::size_t i = 0; i < t.frequencies_hz.size(); ++i)
    out << fmt_double(t.frequencies_hz[i]) << ',' << fmt_double(db_from_linear(t.upper[i])) << ','
        << fmt_double(db_from_linear(t.lower[i])) << '\n';
}

inline spectra::TracePair load_trace_pair(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open: " + path.string());
  spectra::TracePair t;
  std::string raw;
  int line_no = 0;
  bool header_seen = false;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    if (!header_seen) {
      if (line != "frequency_hz,upper_db,lower_db")
        throw ConfigError(path.string(), line_no, "expected header 'frequency_hz,upper_db,lower_db'");
      header_seen = true;
      continue;
    }
    const auto c1 = line.find(',');
    const auto c2 = c1 == std::string_view::npos ? c1 : line.find(',', c1 + 1);
    if (c2 == std::string_view::npos)
      throw ConfigError(path.string(), line_no, "expected three comma-separated fields");
    t.frequencies_hz.push_back(detail::parse_csv_double(path.string(), line_no, line.substr(0, c1)));
    t.upper.push_back(
        linear_from_db(detail::parse_csv_double(path.string(), line_no, line.substr(c1 + 1, c2 - c1 - 1))));
    t.lower.push_back(
        linear_from_db(detail::parse_csv_double(path.string(), line_no, line.substr(c2 + 1))));
  }
  spectra::validate(t);
  return t;
}

// ------------------------------------------------------------ truth sidecar

inline void save_truth(const std::filesystem::path& path,
                       const std::vector<synth::PhaseSample>& truth) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write: " + path.string());
  out << "index,nominal_rad,phase_rad\n";
  for (const auto& s : truth)
    out << s.index << ',' << fmt_double(s.nominal) << ',' << fmt_double(s.phase) << '\n';
}

inline std::vector<synth::PhaseSample> load_truth(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open: " + path.string());
  std::vector<synth::PhaseSample> out;
  std::string raw;
  int line_no = 0;
  bool header_seen = false;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    if (!header_seen) {
      header_seen = true;
      continue;
    }
    const auto c1 = line.find(',');
    const auto c2 = c1 == std::string_view::npos ? c1 : line.find(',', c1 + 1);
    if (c2 == std::string_view::npos)
      throw ConfigError(path.string(), line_no, "expected three comma-separated fields");
    synth::PhaseSample s;
    s.index = static_cast<int>(detail::parse_csv_double(path.string(), line_no, line.substr(0, c1)));
    s.nominal = detail::parse_csv_double(path.string(), line_no, line.substr(c1 + 1, c2 - c1 - 1));
    s.phase = detail::parse_csv_double(path.string(), line_no, line.substr(c2 + 1));
    out.push_back(s);
  }
  return out;
}

// ------------------------------------------------------------ run manifest

struct RunManifest {
  std::string command;
  std::string config_path;
  std::string config_digest;
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;
};

inline void save_run_manifest(const std::filesystem::path& path, const RunManifest& m) {
  KvWriter w;
  w.section("run");
  w.put("command", m.command);
  w.put("version", std::string(tool_version));
  if (!m.config_path.empty()) {
    w.put("config", m.config_path);
    w.put("config_digest", m.config_digest);
  }
  w.section("inputs");
  for (const auto& f : m.inputs) w.put("file", f);
  w.section("outputs");
  for (const auto& f : m.outputs) w.put("file", f);
  w.save(path);
}

// -------------------------------------------------------- campaign configs

inline synth::CampaignConfig parse_campaign_config(const KvFile& kv) {
  synth::CampaignConfig cfg;
  const std::string kind = kv.get_string("", "model");
  const double chi = two_pi * kv.get_double("", "chi_hz");
  const double gamma = two_pi * kv.get_double("", "gamma_hz");
  double grid_center_hz = 0.0;
  if (kind == "single") {
    const double center_hz = kv.get_double("", "center_hz");
    cfg.noise_model = model::SqueezerParams{chi, gamma, two_pi * center_hz};
    grid_center_hz = center_hz;
  } else if (kind == "coupled") {
    const double omega_s_hz = kv.get_double("", "omega_s_hz");
    cfg.noise_model = model::CoupledParams{chi, gamma, two_pi * omega_s_hz};
    grid_center_hz = omega_s_hz;
  } else {
    const KvEntry& e = kv.require("", "model");
    throw ConfigError(kv.path, e.line, "model must be 'single' or 'coupled'");
  }
  if (const auto v = kv.get_optional_double("", "grid_center_hz")) grid_center_hz = *v;

  cfg.base_det.eta = kv.get_double("", "eta");
  cfg.base_det.delta_phi = kv.get_double("", "delta_phi_rad");

  const double span = kv.get_double("", "span_hz");
  const long n_points = kv.get_long("", "n_points");
  if (n_points < 2) {
    const KvEntry& e = kv.require("", "n_points");
    throw ConfigError(kv.path, e.line, "n_points must be >= 2");
  }
  if (!(span > 0.0)) {
    const KvEntry& e = kv.require("", "span_hz");
    throw ConfigError(kv.path, e.line, "span_hz must be > 0");
  }
  cfg.grid_hz.resize(static_cast<std::size_t>(n_points));
  const double f_lo = grid_center_hz - 0.5 * span;
  for (long i = 0; i < n_points; ++i)
    cfg.grid_hz[static_cast<std::size_t>(i)] =
        f_lo + span * static_cast<double>(i) / static_cast<double>(n_points - 1);

  cfg.n_spectra = static_cast<int>(kv.get_long("", "n_spectra"));
  cfg.averages_per_bin = static_cast<int>(kv.get_long("", "averages_per_bin"));
  cfg.seed = kv.get_u64("", "seed");

  const std::string phase = kv.get_string("", "phase_model");
  if (phase == "uniform")
    cfg.phase_model = synth::PhaseModel::free_running_uniform;
  else if (phase == "gaussian")
    cfg.phase_model = synth::PhaseModel::gaussian_jitter;
  else {
    const KvEntry& e = kv.require("", "phase_model");
    throw ConfigError(kv.path, e.line, "phase_model must be 'uniform' or 'gaussian'");
  }
  cfg.dark_offset_db = kv.get_optional_double("", "dark_offset_db");
  cfg.noisy_shot = kv.get_bool_or("", "shot_estimator_noise", false);

  try {
    synth::validate(cfg);
  } catch (const std::exception& e) {
    throw ConfigError(kv.path + ": " + e.what());
  }
  return cfg;
}

// ------------------------------------------------------------ budget files

struct BudgetInputs {
  budget::EfficiencyLedger ledger;
  std::optional<double> stated_total;
  std::optional<budget::CavityLossSheet> loss_sheet;
  std::optional<model::CavityGeometry> geometry;
  std::optional<double> pump_power_w;
  std::optional<double> chi_hz;
  std::optional<double> gamma_hz;
  std::optional<double> delta_phi_rad;
};

// Flat human-editable ledger: eta_* keys are efficiency factors ('?' marks
// the inferred one), loss_* plus t_out/length_m form the cavity loss sheet,
// t_c/l_test_m/l_sqz_m the geometry, pump_power_w/chi_hz/gamma_hz the
// operating point.
inline BudgetInputs parse_budget_file(const KvFile& kv) {
  BudgetInputs out;
  budget::CavityLossSheet sheet;
  bool have_sheet = false;
  std::optional<double> t_c, l_test, l_sqz;

  for (const auto& e : kv.entries) {
    if (!e.section.empty()) continue;
    if (e.key == "eta_total") {
      out.stated_total = kv.to_double(e);
    } else if (e.key.rfind("eta_", 0) == 0) {
      budget::Factor f;
      f.name = e.key;
      if (e.value == "?") {
        f.status = budget::FactorStatus::inferred;
      } else {
        f.value = kv.to_double(e);
      }
      out.ledger.factors.push_back(std::move(f));
    } else if (e.key == "t_out") {
      sheet.t_out = kv.to_double(e);
      have_sheet = true;
    } else if (e.key == "length_m") {
      sheet.length = kv.to_double(e);
      have_sheet = true;
    } else if (e.key.rfind("loss_", 0) == 0) {
      sheet.intra_losses.emplace_back(e.key.substr(5), kv.to_double(e));
      have_sheet = true;
    } else if (e.key == "t_c") {
      t_c = kv.to_double(e);
    } else if (e.key == "l_test_m") {
      l_test = kv.to_double(e);
    } else if (e.key == "l_sqz_m") {
      l_sqz = kv.to_double(e);
    } else if (e.key == "pump_power_w") {
      out.pump_power_w = kv.to_double(e);
    } else if (e.key == "chi_hz") {
      out.chi_hz = kv.to_double(e);
    } else if (e.key == "gamma_hz") {
      out.gamma_hz = kv.to_double(e);
    } else if (e.key == "delta_phi_rad") {
      out.delta_phi_rad = kv.to_double(e);
    } else {
      throw ConfigError(kv.path, e.line, "unknown key '" + e.key + "'");
    }
  }
  if (have_sheet) out.loss_sheet = std::move(sheet);
  if (t_c && l_test && l_sqz) out.geometry = model::CavityGeometry{*l_test, *l_sqz, *t_c};
  return out;
}

// --------------------------------------------------------- fit result files

inline const char* model_kind_name(fit::ModelKind kind) {
  return kind == fit::ModelKind::single ? "single" : "coupled";
}

inline void save_fit_result(const std::filesystem::path& path, const fit::FitResult& r,
                            const std::string& trace_file, const std::string& trace_digest) {
  KvWriter w;
  w.section("fit");
  w.put("model", std::string(model_kind_name(r.kind)));
  w.put("converged", r.converged);
  w.put("iterations", static_cast<long>(r.iterations));
  w.put("residual_rms_db", r.residual_rms_db);
  w.put("condition", r.condition);
  w.put("near_threshold", r.near_threshold);
  w.put("message", r.message);
  w.section("params");
  for (std::size_t i = 0; i < fit::n_params; ++i) {
    std::string name = fit::param_name(r.kind, i);
    double value = r.params[i];
    double sigma = r.sigma[i];
    if (i <= fit::p_feature) {  // rates reported in hertz
      name += "_hz";
      value = hz_from_omega(value);
      sigma = hz_from_omega(sigma);
    } else if (i == fit::p_delta_phi) {
      name += "_rad";
    }
    w.put(name, value);
    w.put(name + "_sigma", r.pinned[i] ? 0.0 : sigma);
    w.put(name + "_pinned", r.pinned[i]);
  }
  w.section("inputs");
  w.put("trace_file", trace_file);
  w.put("trace_digest", trace_digest);
  w.save(path);
}

inline fit::FitResult load_fit_result(const std::filesystem::path& path) {
  const KvFile kv = load_kv(path);
  fit::FitResult r;
  const std::string kind = kv.get_string("fit", "model");
  if (kind != "single" && kind != "coupled")
    throw ConfigError(kv.path + ": bad model kind '" + kind + "'");
  r.kind = kind == "single" ? fit::ModelKind::single : fit::ModelKind::coupled;
  r.converged = kv.get_bool_or("fit", "converged", false);
  r.iterations = static_cast<int>(kv.get_long("fit", "iterations"));
  r.residual_rms_db = kv.get_double("fit", "residual_rms_db");
  r.condition = kv.get_double("fit", "condition");
  r.near_threshold = kv.get_bool_or("fit", "near_threshold", false);
  for (std::size_t i = 0; i < fit::n_params; ++i) {
    std::string name = fit::param_name(r.kind, i);
    if (i <= fit::p_feature) name += "_hz";
    if (i == fit::p_delta_phi) name += "_rad";
    double value = kv.get_double("params", name);
    double sigma = kv.get_double("params", name + "_sigma");
    if (i <= fit::p_feature) {
      value = omega_from_hz(value);
      sigma = omega_from_hz(sigma);
    }
    r.params[i] = value;
    r.sigma[i] = sigma;
    r.pinned[i] = kv.get_bool_or("params", name + "_pinned", false);
  }
  return r;
}

}  // namespace sqzkit::io
