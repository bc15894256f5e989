// qcsim command-line front end.
//
// exit status: 0 success, 1 comparison above tolerance, 2 bad input
// (parse/validation/format), 3 solver failure.

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qcsim/io/io.hpp"

namespace {

namespace io = qcsim::io;

int run_scenario(const std::string& path, const std::string& out_dir, bool force_oracle, const std::string& plot_cols) {
  io::Scenario s = io::load_scenario(path);
  if (force_oracle) {
    s.method = io::Method::OracleDense;
    s.integrator.scheme = qcsim::TimeScheme::ExactDense;
    io::validate(s);
  }
  const auto result = io::run(s);
  const auto dir = io::output_directory(s, out_dir);
  const auto files = io::write_outputs(s, result, dir);
  std::cout << "wrote " << files.csv.string() << "\n";
  if (files.snapshot) std::cout << "wrote " << files.snapshot->string() << "\n";
  if (!plot_cols.empty()) {
    auto svg = files.csv;
    svg.replace_extension(".svg");
    io::emit_plot(result.table, io::detail::split_list(plot_cols), svg, {720, 440, s.output_name});
    std::cout << "wrote " << svg.string() << "\n";
  }
  return 0;
}

int compare(const std::string& a_path, const std::string& b_path, const std::string& cols, double tol,
            bool interpolate, const std::string& report) {
  const auto a = io::load_csv(a_path);
  const auto b = io::load_csv(b_path);
  std::vector<std::string> names = io::detail::split_list(cols);
  if (names.empty())
    for (const auto& c : a.columns)
      if (b.has(c)) names.push_back(c);
  const auto cmp = io::compare_tables(a, b, names, {interpolate, 1e-12});
  std::printf("%-18s %14s %14s %14s %14s\n", "column", "max_abs", "mean_abs", "max_rel", "mean_rel");
  for (const auto& st : cmp.stats)
    std::printf("%-18s %14.6e %14.6e %14.6e %14.6e\n", st.name.c_str(), st.max_abs, st.mean_abs, st.max_rel, st.mean_rel);
  if (!cmp.correlation_norm.empty()) {
    double m = 0.0;
    for (double v : cmp.correlation_norm) m = std::max(m, v);
    std::printf("correlation_norm (from %s): max %.6e\n", cmp.correlation_source.c_str(), m);
  }
  if (!report.empty()) {
    auto tab = cmp.as_table();
    tab.meta = {{"a", a_path + " " + a.meta_value("scenario-hash")}, {"b", b_path + " " + b.meta_value("scenario-hash")}};
    io::save_csv(tab, report);
    std::cout << "wrote " << report << "\n";
  }
  const bool ok = cmp.within(tol);
  std::printf("%s: max |d| = %.6e, tolerance %.3e\n", ok ? "PASS" : "FAIL", cmp.max_abs(), tol);
  return ok ? 0 : 1;
}

int plot(const std::string& csv, const std::string& cols, std::string out, const std::string& title) {
  const auto tab = io::load_csv(csv);
  auto names = io::detail::split_list(cols);
  if (names.empty()) names = tab.columns;
  if (out.empty()) {
    std::filesystem::path p(csv);
    p.replace_extension(".svg");
    out = p.string();
  }
  io::emit_plot(tab, names, out, {720, 440, title});
  std::cout << "wrote " << out << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qcsim: hybrid quantum-classical dynamics on grids"};
  app.require_subcommand(1);

  std::string scenario, out_dir, plot_cols;
  auto* run = app.add_subcommand("run", "run a scenario file and write CSV (and snapshot) output");
  run->add_option("scenario", scenario, "scenario file")->required()->check(CLI::ExistingFile);
  run->add_option("--output-dir", out_dir, "output directory (overrides QCSIM_OUTPUT_DIR and output.dir)");
  run->add_option("--plot", plot_cols, "also write an SVG of these comma-separated columns");

  auto* oracle = app.add_subcommand("oracle", "run a scenario through the dense exact propagator");
  oracle->add_option("scenario", scenario, "scenario file")->required()->check(CLI::ExistingFile);
  oracle->add_option("--output-dir", out_dir, "output directory");

  auto* val = app.add_subcommand("validate", "parse and validate a scenario; print the normalized dump");
  val->add_option("scenario", scenario, "scenario file")->required()->check(CLI::ExistingFile);

  std::string a, b, cols, report;
  double tol = 1e-6;
  bool interp = false;
  auto* cmp = app.add_subcommand("compare", "compare two CSV runs column by column");
  cmp->add_option("a", a, "first CSV")->required()->check(CLI::ExistingFile);
  cmp->add_option("b", b, "second CSV")->required()->check(CLI::ExistingFile);
  cmp->add_option("--columns", cols, "comma-separated columns (default: all shared)");
  cmp->add_option("--tol", tol, "max absolute discrepancy for exit status 0");
  cmp->add_flag("--interpolate", interp, "interpolate b linearly onto a's times");
  cmp->add_option("--report", report, "write per-row discrepancies to this CSV");

  std::string csv, out, title;
  auto* plt = app.add_subcommand("plot", "render CSV columns to SVG");
  plt->add_option("csv", csv, "input CSV")->required()->check(CLI::ExistingFile);
  plt->add_option("--columns", cols, "comma-separated columns (default: all)");
  plt->add_option("--out", out, "output SVG path (default: next to the CSV)");
  plt->add_option("--title", title, "plot title");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return run_scenario(scenario, out_dir, false, plot_cols);
    if (*oracle) return run_scenario(scenario, out_dir, true, {});
    if (*val) {
      std::cout << io::dump_scenario(io::load_scenario(scenario));
      return 0;
    }
    if (*cmp) return compare(a, b, cols, tol, interp, report);
    if (*plt) return plot(csv, cols, out, title);
  } catch (const qcsim::ParseError& e) {
    std::cerr << scenario << ":" << e.what() << "\n";
    return 2;
  } catch (const qcsim::ValidationError& e) {
    std::cerr << "invalid scenario: " << e.what() << "\n";
    return 2;
  } catch (const qcsim::FormatError& e) {
    std::cerr << "format error: " << e.what() << "\n";
    return 2;
  } catch (const qcsim::AlignmentError& e) {
    std::cerr << "alignment error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
