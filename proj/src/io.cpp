#include "ptnlms/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace ptnlms {

using nlohmann::json;

std::string format_g17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void atomic_write(const std::filesystem::path& path,
                  const std::string& content) {
  namespace fs = std::filesystem;
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp.string());
    out << content;
    if (!out) throw std::runtime_error("short write to " + tmp.string());
  }
  fs::rename(tmp, path);
}

namespace {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string rule_tag(const GainRule& r) {
  if (r.zero_attractor) return "l0nlms";
  switch (r.variant) {
    case GainVariant::identity: return "nlms";
    case GainVariant::pnlms: return "pnlms";
    case GainVariant::ipnlms: return "ipnlms";
    case GainVariant::pure_proportional: return "prop";
  }
  return "nlms";
}

GainRule rule_from_json(const json& j) {
  const std::string tag = j.at("rule").get<std::string>();
  if (tag == "nlms") return GainRule::identity();
  if (tag == "pnlms")
    return GainRule::pnlms(j.value("delta_p", defaults::kPnlmsDeltaP),
                           j.value("rho", defaults::kPnlmsRho));
  if (tag == "ipnlms")
    return GainRule::ipnlms(j.value("alpha", defaults::kIpnlmsAlpha),
                            j.value("delta_ip", defaults::kIpnlmsDeltaIp));
  if (tag == "prop") return GainRule::pure_proportional();
  if (tag == "l0nlms")
    return GainRule::l0_nlms(j.value("kappa", defaults::kAttractorKappa),
                             j.value("beta", defaults::kAttractorBeta));
  throw std::invalid_argument("unknown gain rule '" + tag + "'");
}

json rule_to_json(const GainRule& r) {
  json j;
  j["rule"] = rule_tag(r);
  switch (r.variant) {
    case GainVariant::pnlms:
      j["delta_p"] = r.delta_p;
      j["rho"] = r.rho;
      break;
    case GainVariant::ipnlms:
      j["alpha"] = r.alpha;
      j["delta_ip"] = r.delta_ip;
      break;
    default:
      break;
  }
  if (r.zero_attractor) {
    j["kappa"] = r.zero_attractor->kappa;
    j["beta"] = r.zero_attractor->beta;
  }
  return j;
}

json system_to_json(const UnknownSystem& s) {
  json j;
  if (s.is_switching()) {
    j["kind"] = "switching";
    j["w_before"] = s.w_start;
    j["w_after"] = s.w_after;
    j["switch_at"] = s.switch_at;
  } else {
    j["kind"] = "static";
    j["w"] = s.w_start;
  }
  return j;
}

UnknownSystem system_from_json(const json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "static")
    return UnknownSystem::fixed(j.at("w").get<std::vector<double>>());
  if (kind == "switching")
    return UnknownSystem::switching(
        j.at("w_before").get<std::vector<double>>(),
        j.at("w_after").get<std::vector<double>>(),
        j.at("switch_at").get<std::size_t>());
  throw std::invalid_argument("unknown system kind '" + kind + "'");
}

json input_to_json(const InputModel& m) {
  json j;
  if (m.kind == InputModel::Kind::bpsk) {
    j["kind"] = "bpsk";
  } else {
    j["kind"] = "wgn";
    j["variance"] = m.variance;
  }
  return j;
}

InputModel input_from_json(const json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "bpsk") return InputModel::bpsk();
  if (kind == "wgn") return InputModel::wgn(j.value("variance", 1.0));
  throw std::invalid_argument("unknown input kind '" + kind + "'");
}

json run_to_json(const ResolvedRun& run) {
  json j;
  j["scenario"] = run.scenario_name;
  j["system"] = system_to_json(run.scenario.system);
  j["input"] = input_to_json(run.scenario.input);
  j["noise_var"] = run.scenario.noise_var;
  j["horizon"] = run.scenario.horizon;
  j["trials"] = run.scenario.trials;
  j["delta"] = run.scenario.delta;
  j["init"] = run.scenario.initial_weights();
  j["seed"] = run.base_seed;
  j["record_weights"] = run.record_weights;
  json algos = json::array();
  for (const Algorithm& a : run.algorithms) {
    json ja = rule_to_json(a.rule);
    ja["name"] = a.name;
    ja["mu"] = a.mu;
    algos.push_back(std::move(ja));
  }
  j["algorithms"] = std::move(algos);
  return j;
}

void apply_config(ResolvedRun& run, const json& j) {
  if (j.contains("system")) run.scenario.system = system_from_json(j["system"]);
  if (j.contains("input")) run.scenario.input = input_from_json(j["input"]);
  if (j.contains("noise_var"))
    run.scenario.noise_var = j["noise_var"].get<double>();
  if (j.contains("horizon"))
    run.scenario.horizon = j["horizon"].get<std::size_t>();
  if (j.contains("trials")) run.scenario.trials = j["trials"].get<std::size_t>();
  if (j.contains("delta")) run.scenario.delta = j["delta"].get<double>();
  if (j.contains("init")) {
    const json& init = j["init"];
    if (init.is_number()) {
      run.scenario.init.assign(run.scenario.taps(), init.get<double>());
    } else {
      run.scenario.init = init.get<std::vector<double>>();
    }
  }
  if (j.contains("seed")) run.base_seed = j["seed"].get<std::uint64_t>();
  if (j.contains("record_weights"))
    run.record_weights = j["record_weights"].get<bool>();
  if (j.contains("algorithms")) {
    run.algorithms.clear();
    for (const json& ja : j["algorithms"]) {
      Algorithm a;
      a.name = ja.contains("name") ? ja["name"].get<std::string>()
                                   : ja.at("rule").get<std::string>();
      a.rule = rule_from_json(ja);
      a.mu = ja.at("mu").get<double>();
      run.algorithms.push_back(std::move(a));
    }
  }
}

} // namespace

ResolvedRun resolve_run(const std::optional<std::string>& scenario_name,
                        const std::optional<std::string>& config_text,
                        const RunOverrides& overrides) {
  json config;
  if (config_text) {
    try {
      config = json::parse(*config_text);
    } catch (const json::exception& e) {
      throw std::invalid_argument(std::string("config parse error: ") +
                                  e.what());
    }
  }

  ResolvedRun run;
  std::optional<std::string> preset_name = scenario_name;
  if (!preset_name && config.contains("scenario"))
    preset_name = config["scenario"].get<std::string>();
  if (preset_name) {
    RunPreset preset = make_preset(*preset_name);
    run.scenario_name = preset.name;
    run.scenario = std::move(preset.scenario);
    run.algorithms = std::move(preset.algorithms);
    run.record_weights = preset.record_weights;
  } else if (!config_text) {
    throw std::invalid_argument("no scenario name and no config given");
  }

  if (config_text) {
    try {
      apply_config(run, config);
    } catch (const json::exception& e) {
      throw std::invalid_argument(std::string("config error: ") + e.what());
    }
  }
  if (run.algorithms.empty())
    throw std::invalid_argument("config defines no algorithms");
  if (run.scenario.system.w_start.empty())
    throw std::invalid_argument("config defines no unknown system");

  if (overrides.trials) run.scenario.trials = *overrides.trials;
  if (overrides.horizon) run.scenario.horizon = *overrides.horizon;
  if (overrides.seed) run.base_seed = *overrides.seed;
  for (const auto& [name, mu] : overrides.mu) {
    bool found = false;
    for (Algorithm& a : run.algorithms) {
      if (a.name == name) {
        a.mu = mu;
        found = true;
      }
    }
    if (!found)
      throw std::invalid_argument("step-size override for unknown algorithm '" +
                                  name + "'");
  }

  run.scenario.validate();
  for (const Algorithm& a : run.algorithms) {
    a.rule.validate();
    if (!(a.mu > 0.0) || a.mu > 1.0)
      throw std::invalid_argument("mu of '" + a.name + "' must lie in (0, 1]");
  }
  return run;
}

std::string serialize_run(const ResolvedRun& run) {
  return run_to_json(run).dump(2) + "\n";
}

ResolvedRun parse_run(const std::string& json_text) {
  return resolve_run(std::nullopt, json_text, RunOverrides{});
}

void write_meta(const std::filesystem::path& path, const ResolvedRun& run) {
  atomic_write(path, serialize_run(run));
}

ResolvedRun read_meta(const std::filesystem::path& path) {
  return parse_run(read_file(path));
}

void write_curves_csv(const std::filesystem::path& path,
                      const std::vector<std::string>& names,
                      const std::vector<LearningCurve>& curves) {
  if (names.size() != curves.size())
    throw std::invalid_argument("write_curves_csv: name/curve count mismatch");
  std::ostringstream out;
  out << "iteration";
  for (const std::string& n : names) out << ',' << n << "_mse";
  out << '\n';
  const std::size_t horizon = curves.empty() ? 0 : curves.front().mse.size();
  for (std::size_t k = 0; k < horizon; ++k) {
    out << k;
    for (const LearningCurve& c : curves) out << ',' << format_g17(c.mse.at(k));
    out << '\n';
  }
  atomic_write(path, out.str());
}

CurveTable read_curves_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  CurveTable table;
  std::string line;
  if (!std::getline(in, line))
    throw std::runtime_error("empty curves file " + path.string());
  {
    std::istringstream header(line);
    std::string cell;
    bool first = true;
    while (std::getline(header, cell, ',')) {
      if (first) {
        first = false;
        continue;
      }
      const std::string suffix = "_mse";
      if (cell.size() > suffix.size() &&
          cell.compare(cell.size() - suffix.size(), suffix.size(), suffix) == 0)
        cell.resize(cell.size() - suffix.size());
      table.names.push_back(cell);
      table.mse.emplace_back();
    }
  }
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string cell;
    std::getline(row, cell, ','); // iteration index
    for (std::size_t a = 0; a < table.names.size(); ++a) {
      if (!std::getline(row, cell, ','))
        throw std::runtime_error("short row in " + path.string());
      table.mse[a].push_back(std::stod(cell));
    }
  }
  return table;
}

void write_weights_csv(const std::filesystem::path& path,
                       const std::vector<std::string>& names,
                       const std::vector<LearningCurve>& curves) {
  if (names.size() != curves.size())
    throw std::invalid_argument("write_weights_csv: name/curve count mismatch");
  std::size_t taps = 0;
  for (const LearningCurve& c : curves)
    if (!c.mean_weights.empty()) taps = c.mean_weights.front().size();
  std::ostringstream out;
  out << "iteration,algorithm";
  for (std::size_t i = 0; i < taps; ++i) out << ",w" << i;
  out << '\n';
  for (std::size_t a = 0; a < curves.size(); ++a) {
    const auto& traj = curves[a].mean_weights;
    for (std::size_t k = 0; k < traj.size(); ++k) {
      out << k << ',' << names[a];
      for (double wi : traj[k]) out << ',' << format_g17(wi);
      out << '\n';
    }
  }
  atomic_write(path, out.str());
}

void write_grid_csv(const std::filesystem::path& path, const ContourGrid& grid) {
  std::ostringstream out;
  out << "# axis w0: lo=" << format_g17(grid.axis0.lo)
      << " hi=" << format_g17(grid.axis0.hi) << " samples=" << grid.axis0.samples
      << '\n';
  out << "# axis w1: lo=" << format_g17(grid.axis1.lo)
      << " hi=" << format_g17(grid.axis1.hi) << " samples=" << grid.axis1.samples
      << '\n';
  out << "w0,w1,xi\n";
  for (std::size_t i = 0; i < grid.axis0.samples; ++i)
    for (std::size_t j = 0; j < grid.axis1.samples; ++j)
      out << format_g17(grid.coord0(i)) << ',' << format_g17(grid.coord1(j))
          << ',' << format_g17(grid.at(i, j)) << '\n';
  atomic_write(path, out.str());
}

ContourGrid read_grid_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  ContourGrid grid;
  std::string line;
  int axes_read = 0;
  while (std::getline(in, line)) {
    if (line.rfind("# axis", 0) == 0) {
      AxisSpec& axis = axes_read == 0 ? grid.axis0 : grid.axis1;
      const auto grab = [&line](const char* key) {
        const std::size_t pos = line.find(key);
        if (pos == std::string::npos)
          throw std::runtime_error("malformed axis metadata: " + line);
        return line.substr(pos + std::string(key).size());
      };
      axis.lo = std::stod(grab("lo="));
      axis.hi = std::stod(grab("hi="));
      axis.samples = static_cast<std::size_t>(std::stoul(grab("samples=")));
      ++axes_read;
      continue;
    }
    break; // column header line
  }
  if (axes_read != 2)
    throw std::runtime_error("grid file missing axis metadata: " +
                             path.string());
  grid.xi.reserve(grid.axis0.samples * grid.axis1.samples);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string cell;
    std::getline(row, cell, ','); // w0
    std::getline(row, cell, ','); // w1
    if (!std::getline(row, cell, ','))
      throw std::runtime_error("short row in " + path.string());
    grid.xi.push_back(std::stod(cell));
  }
  if (grid.xi.size() != grid.axis0.samples * grid.axis1.samples)
    throw std::runtime_error("grid size disagrees with axis metadata: " +
                             path.string());
  return grid;
}

void write_curves_plot_script(const std::filesystem::path& path,
                              const std::string& csv_name,
                              const std::vector<std::string>& names) {
  std::ostringstream out;
  out << "# gnuplot script: run `gnuplot " << path.filename().string()
      << "` next to " << csv_name << "\n";
  out << "set datafile separator ','\n";
  out << "set terminal pngcairo size 900,600\n";
  out << "set output 'curves.png'\n";
  out << "set xlabel 'iteration k'\n";
  out << "set ylabel 'MSE [dB]'\n";
  out << "set grid\n";
  out << "plot ";
  for (std::size_t a = 0; a < names.size(); ++a) {
    if (a > 0) out << ", \\\n     ";
    out << (a == 0 ? "'" + csv_name + "'" : "''") << " every ::1 using 1:(10*log10($"
        << (a + 2) << ")) with lines lw 2 title '" << names[a] << "'";
  }
  out << "\n";
  atomic_write(path, out.str());
}

void write_grid_plot_script(const std::filesystem::path& path,
                            const std::string& csv_name,
                            const ContourGrid& grid) {
  std::ostringstream out;
  out << "# gnuplot script: run `gnuplot " << path.filename().string()
      << "` next to " << csv_name << "\n";
  out << "set datafile separator ','\n";
  out << "set terminal pngcairo size 700,600\n";
  out << "set output 'contours.png'\n";
  out << "set xlabel 'w0'\n";
  out << "set ylabel 'w1'\n";
  out << "set view map\n";
  out << "unset surface\n";
  out << "set contour base\n";
  out << "set cntrparam levels 15\n";
  out << "set dgrid3d " << grid.axis1.samples << ',' << grid.axis0.samples
      << "\n";
  out << "splot '" << csv_name << "' every ::1 using 1:2:3 with lines notitle\n";
  atomic_write(path, out.str());
}

} // namespace ptnlms
