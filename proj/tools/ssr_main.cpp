#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "ssr/config.hpp"
#include "ssr/errors.hpp"
#include "ssr/experiments.hpp"
#include "ssr/parallel.hpp"
#include "ssr/plot.hpp"

namespace {

struct RunArgs {
  std::string config;
  std::optional<std::string> out;
  std::optional<std::int64_t> seeds;
  bool plot = false;
};

ssr::PlotKind plot_kind_for(ssr::ExperimentKind kind) {
  return kind == ssr::ExperimentKind::gap ? ssr::PlotKind::line_by_n : ssr::PlotKind::line_by_epsilon;
}

int run(ssr::ExperimentKind kind, const RunArgs& args) {
  ssr::ExperimentConfig cfg = ssr::load_config(args.config);
  if (cfg.experiment != kind) {
    throw ssr::ConfigError("config describes '" + std::string(ssr::to_string(cfg.experiment)) + "', not '" +
                           std::string(ssr::to_string(kind)) + "'");
  }
  if (args.out) cfg.output_dir = *args.out;
  if (args.seeds) cfg.n_seeds = *args.seeds;
  cfg.validate();
  const ssr::RunRecord record = ssr::run_experiment(cfg, ssr::thread_budget());
  const auto csv = ssr::write_record(record, cfg.output_dir);
  std::cout << "wrote " << csv.string() << " (" << record.rows.size() << " rows, " << record.skipped.size()
            << " skipped)\n";
  if (args.plot) {
    auto svg = csv;
    svg.replace_extension(".svg");
    ssr::emit_plot(csv, plot_kind_for(kind), svg);
    std::cout << "wrote " << svg.string() << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Robust semi-supervised learning simulations"};
  app.require_subcommand(1);

  RunArgs args;
  std::optional<ssr::ExperimentKind> chosen;
  for (auto kind : {ssr::ExperimentKind::enhance, ssr::ExperimentKind::sparsity, ssr::ExperimentKind::gap,
                    ssr::ExperimentKind::irrelevant, ssr::ExperimentKind::measures}) {
    auto* sub = app.add_subcommand(std::string(ssr::to_string(kind)), "run the " + std::string(ssr::to_string(kind)) +
                                                                          " experiment");
    sub->add_option("--config", args.config, "experiment config (JSON)")->required();
    sub->add_option("--out", args.out, "output directory");
    sub->add_option("--seeds", args.seeds, "override n_seeds");
    sub->add_flag("--plot", args.plot, "also write an SVG next to the CSV");
    sub->callback([&chosen, kind] { chosen = kind; });
  }

  std::string csv_path, kind_text, out_path;
  auto* plot = app.add_subcommand("plot", "render an experiment CSV as SVG");
  plot->add_option("--csv", csv_path, "input CSV")->required();
  plot->add_option("--kind", kind_text, "line_by_epsilon or line_by_n")->required();
  plot->add_option("--out", out_path, "output SVG")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (chosen) return run(*chosen, args);
    ssr::emit_plot(csv_path, ssr::plot_kind_from_string(kind_text), out_path);
    std::cout << "wrote " << out_path << "\n";
    return 0;
  } catch (const ssr::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const ssr::DegenerateRun& e) {
    std::cerr << "degenerate run: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
