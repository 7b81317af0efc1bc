// parsefit - best approximation of frames by Parseval frames.
//
// Subcommands: analyze | canonical | approx | oracle | connect.
// Machine-readable JSON goes to stdout, human diagnostics to stderr.

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include "parsefit/io.hpp"
#include "parsefit/report.hpp"

namespace {

using namespace parsefit;

constexpr int kExitOk = 0;
constexpr int kExitSchema = 2;
constexpr int kExitNumeric = 3;
constexpr int kExitInfeasible = 4;
constexpr int kExitResource = 5;
constexpr int kExitMismatch = 6;

Tolerances tolerances_from_env() {
  const char* raw = std::getenv("FRAME_TOL_OVERRIDE");
  if (raw == nullptr || raw[0] == '\0') return {};
  Json overrides;
  try {
    overrides = Json::parse(raw);
  } catch (const Json::exception& e) {
    throw SchemaError(std::string("FRAME_TOL_OVERRIDE: ") + e.what());
  }
  return tolerances_from_json(overrides);
}

void emit(const Json& report) { std::cout << report.dump(2) << "\n"; }

std::string fmt12(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

void human_analyze_summary(const Json& report) {
  std::cerr << "component report: n1=" << report["component"]["n1"]
            << " n2=" << report["component"]["n2"]
            << " n3=" << report["component"]["n3"] << " index set ["
            << report["component"]["indexSet"]["lower"] << ", "
            << report["component"]["indexSet"]["upper"] << "]\n";
  if (report.contains("perComponent")) {
    std::cerr << "  k   squared distance   uniqueness\n";
    for (const auto& row : report["perComponent"]) {
      std::cerr << "  " << row["k"].get<long>() << "   "
                << fmt12(row["squaredDistance"].get<double>()) << "   "
                << row["uniqueness"]["kind"].get<std::string>() << "\n";
    }
  }
  if (report.contains("global") && report["global"].is_object()) {
    const auto& g = report["global"];
    std::cerr << "global: k=" << g["k"].get<long>()
              << " d2=" << fmt12(g["squaredDistance"].get<double>())
              << " uniqueness=" << g["uniqueness"]["kind"].get<std::string>();
    if (g.value("boundary", false)) std::cerr << " [1/2-threshold boundary]";
    std::cerr << "\n";
  }
}

int dispatch(int argc, char** argv) {
  CLI::App app{"best approximation of frames by Parseval frames"};
  app.require_subcommand(1);

  std::string input_path;
  std::string path_x, path_y, path_f;
  int component = 0;
  bool global_mode = false;
  bool has_component = false;
  int enumerate_limit = 0;
  std::uint64_t seed = 0;
  int samples = 9;
  int k_lo = -8, k_hi = 8;
  bool no_oracle = false;
  std::optional<int> oracle_k;

  auto* analyze = app.add_subcommand("analyze", "component report, distances and global result");
  analyze->add_option("input", input_path, "frame or diagonal-model JSON")->required();
  analyze->add_option("--kmin", k_lo, "lowest component in the table");
  analyze->add_option("--kmax", k_hi, "highest component in the table");
  analyze->add_flag("--no-oracle", no_oracle, "skip the brute-force cross-check");

  auto* canonical = app.add_subcommand("canonical", "canonical Parseval frame as a frame document");
  canonical->add_option("input", input_path, "frame JSON")->required();

  auto* approx = app.add_subcommand("approx", "best Parseval frame per component or globally");
  approx->add_option("input", input_path, "frame or diagonal-model JSON")->required();
  auto* comp_opt = approx->add_option("--component", component, "component index k");
  approx->add_flag("--global", global_mode, "global best over all components");
  approx->add_option("--enumerate", enumerate_limit, "embed up to this many family members");
  approx->add_option("--seed", seed, "seed for sampled family members");

  auto* oracle = app.add_subcommand("oracle", "diff closed forms against the brute-force oracle");
  oracle->add_option("input", input_path, "diagonal matrix or diagonal-model JSON")->required();
  int oracle_k_value = 0;
  auto* oracle_k_opt = oracle->add_option("--k", oracle_k_value, "check a single component");

  auto* connect_cmd = app.add_subcommand("connect", "same-component connectivity certificate");
  connect_cmd->add_option("x", path_x, "Parseval frame JSON")->required();
  connect_cmd->add_option("y", path_y, "Parseval frame JSON")->required();
  connect_cmd->add_option("f", path_f, "reference frame JSON")->required();
  connect_cmd->add_option("--samples", samples, "path sample count");

  CLI11_PARSE(app, argc, argv);

  const Tolerances tol = tolerances_from_env();

  if (analyze->parsed()) {
    AnalyzeOptions opt;
    opt.k_lo = k_lo;
    opt.k_hi = k_hi;
    opt.run_oracle = !no_oracle;
    const Json report =
        build_analyze_report(load_frame_document(input_path), input_path, opt, tol);
    emit(report);
    human_analyze_summary(report);
    return kExitOk;
  }

  if (canonical->parsed()) {
    const FrameDocument doc = load_frame_document(input_path);
    const Frame f = doc.frame();
    const ParsevalFrame u = canonical_parseval(f, tol);
    FrameDocument out = make_matrix_document(u.synthesis, doc.label);
    emit(to_json(out));
    std::cerr << "canonical Parseval frame of " << input_path << "\n";
    return kExitOk;
  }

  if (approx->parsed()) {
    has_component = comp_opt->count() > 0;
    if (has_component == global_mode)
      throw CLI::ValidationError("approx", "pass exactly one of --component or --global");
    const Json report = build_approx_report(
        load_frame_document(input_path), input_path,
        has_component ? std::optional<int>(component) : std::nullopt,
        enumerate_limit, seed, tol);
    emit(report);
    const auto& res = report["result"];
    std::cerr << "k=" << res["k"].get<long>()
              << " d2=" << fmt12(res["squaredDistance"].get<double>())
              << " uniqueness=" << res["uniqueness"]["kind"].get<std::string>()
              << "\n";
    return kExitOk;
  }

  if (oracle->parsed()) {
    if (oracle_k_opt->count() > 0) oracle_k = oracle_k_value;
    const Json report =
        build_oracle_report(load_frame_document(input_path), input_path, oracle_k, tol);
    emit(report);
    for (const auto& row : report["perComponent"]) {
      std::cerr << (row["pass"].get<bool>() ? "PASS" : "FAIL") << " k="
                << row["k"].get<long>() << " value="
                << fmt12(row["value"].get<double>());
      if (row.value("tie", false)) std::cerr << " (tie)";
      std::cerr << "\n";
    }
    return oracle_report_passed(report) ? kExitOk : kExitNumeric;
  }

  if (connect_cmd->parsed()) {
    const Json report = build_connect_report(
        load_frame_document(path_x), load_frame_document(path_y),
        load_frame_document(path_f), samples, tol);
    emit(report);
    std::cerr << "reconstruction residual "
              << fmt12(report["reconstructionResidual"].get<double>())
              << ", max path defect "
              << fmt12(report["maxPathDefect"].get<double>()) << "\n";
    return connect_report_passed(report) ? kExitOk : kExitNumeric;
  }

  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return dispatch(argc, argv);
  } catch (const SchemaError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitSchema;
  } catch (const ComponentMismatchError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitMismatch;
  } catch (const InfeasibleComponentError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const ResourceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitResource;
  } catch (const DimensionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitSchema;
  } catch (const DegenerateFrameError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitSchema;
  } catch (const NumericError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitSchema;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumeric;
  }
}
