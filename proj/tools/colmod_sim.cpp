#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "colmod/harness/config.hpp"
#include "colmod/harness/runner.hpp"
#include "colmod/harness/svg.hpp"

namespace {

enum Exit { kOk = 0, kConfig = 2, kViolation = 3, kResource = 4 };

using namespace colmod;
using namespace colmod::harness;

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw ConfigError("out", 0, "cannot write " + path.string());
  out << text;
}

std::string dephasing_csv(const SpecResult& result) {
  std::string out = "run_id,every,block,step,accd_residual,accd_bound,delta_norm,predicted_delta_norm,mutual_info\n";
  for (const auto& run : result.runs) {
    if (!run.dephasing) continue;
    for (const auto& b : run.dephasing->blocks) {
      out += std::to_string(run.run_id) + ',' + std::to_string(run.dephasing->every) + ',' + std::to_string(b.q) + ',' +
             std::to_string(b.n) + ',' + format_double(b.accd_residual) + ',' + format_double(b.accd_bound) + ',' +
             format_double(b.delta_norm) + ',' + format_double(b.predicted_delta_norm) + ',' +
             format_double(b.mutual_info) + '\n';
    }
  }
  return out;
}

void emit_plots(const SpecResult& result, const std::filesystem::path& csv_path) {
  std::map<std::size_t, std::vector<CsvRow>> by_run;
  for (const auto& row : result.csv.rows()) by_run[row.run_id].push_back(row);
  const auto stem = csv_path.parent_path() / csv_path.stem();
  for (const auto& [id, rows] : by_run) {
    for (const auto& [name, plot] : run_plots(rows)) {
      write_file(stem.string() + ".run" + std::to_string(id) + "." + name + ".svg", render_svg(plot));
    }
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Collision-model thermodynamics simulator"};
  std::string config_path;
  std::map<std::string, std::string> flags;
  auto value = [&](const std::string& flag, const std::string& key, const std::string& help) {
    app.add_option_function<std::string>(flag, [&flags, key](const std::string& v) { flags[key] = v; }, help);
  };
  app.add_option("--config", config_path, "key = value settings file");
  value("--preset", "preset", "fig1 or fig2");
  value("--mode", "mode", "exact, analytic or both");
  value("--theta", "theta", "collision angle");
  value("--beta", "beta", "inverse temperature (inf allowed)");
  value("--steps", "steps", "exact collisions");
  value("--dim", "dim", "local dimension");
  value("--bloch", "bloch", "initial Bloch vector x,y,z");
  value("--populations", "populations", "diagonal initial state p0,p1,...");
  value("--energies", "energies", "diagonal Hamiltonian e0,e1,...");
  value("--dephase-every", "dephase_every", "dephase the system after every k collisions");
  value("--memory-cap", "memory_cap", "largest joint dimension allowed");
  value("--mi-raw-cap", "mi_raw_cap", "largest joint dimension for the direct S_AB eigensolve");
  value("--sweep-theta", "sweep_theta", "theta list");
  value("--sweep-beta", "sweep_beta", "beta list");
  value("--sweep-bloch", "sweep_bloch", "Bloch vectors x,y,z;x,y,z");
  value("--analytic-steps", "analytic_steps", "continue qubit runs analytically to this step");
  value("--out", "out", "CSV path (stdout when omitted)");
  value("--jobs", "jobs", "concurrent sweep entries");
  app.add_flag_callback("--factorization", [&] { flags["factorization"] = "true"; }, "R/T and product-distance columns");
  app.add_flag_callback("--plots", [&] { flags["plots"] = "true"; }, "SVG plots next to the CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }

  RunSpec spec;
  try {
    ConfigMap values;
    if (!config_path.empty()) parse_config_file(config_path, values);
    for (const auto& [key, text] : flags) values[key] = ConfigValue{text, 0};
    spec = build_run_spec(values);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  }

  try {
    const SpecResult result = run_spec(spec);
    if (spec.output_path.empty()) {
      result.csv.write(std::cout);
    } else {
      const std::filesystem::path out(spec.output_path);
      write_file(out, result.csv.str());
      const std::string dephasing = dephasing_csv(result);
      if (dephasing.find('\n') + 1 < dephasing.size()) write_file(out.string() + ".dephasing.csv", dephasing);
      if (spec.emit_plots) emit_plots(result, out);
    }
    const auto violations = result.violations();
    for (const auto& v : violations) std::cerr << "violation: " << v << '\n';
    return violations.empty() ? kOk : kViolation;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const ResourceError& e) {
    std::cerr << "resource cap: " << e.what() << '\n';
    return kResource;
  } catch (const InvariantViolation& e) {
    std::cerr << "invariant violation: " << e.what() << '\n';
    return kViolation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
