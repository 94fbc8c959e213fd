#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "anast/data.hpp"
#include "anast/manifest.hpp"
#include "anast/protocol.hpp"
#include "anast/report_io.hpp"
#include "anast/snapshot.hpp"
#include "anast/verify.hpp"

namespace {

using anast::format_double;

struct GenSynthArgs {
  anast::SyntheticSpec spec;
  std::string out;
};

int cmd_gen_synth(const GenSynthArgs& args) {
  args.spec.validate();
  const anast::FeatureStore store = anast::gen_synthetic(args.spec);
  anast::save_features(store, args.out);
  std::cout << "wrote " << store.rows() << " rows: " << args.spec.classes
            << " classes x " << args.spec.samples_per_class
            << " samples, dim " << args.spec.dim << " -> " << args.out
            << "\n";
  return 0;
}

struct RunArgs {
  std::string manifest_path;
  std::string method = "anast";
  std::string out_dir = ".";
  double gamma = 0.0;
  double split_ratio = 0.0;
  std::uint64_t split_seed = 0;
  std::uint64_t expansion_seed = 0;
  std::size_t expansion_size = 0;
  std::string activation;
  // set by CLI11 when the flag was given
  bool has_gamma = false, has_split_ratio = false, has_split_seed = false;
  bool has_expansion_seed = false, has_expansion_size = false;
};

int cmd_run(const RunArgs& args) {
  anast::TaskManifest manifest = anast::load_manifest(args.manifest_path);
  std::vector<std::string> overrides;
  if (args.has_gamma) {
    manifest.gamma = args.gamma;
    overrides.push_back("gamma=" + format_double(args.gamma));
  }
  if (args.has_split_ratio) {
    manifest.split_ratio = args.split_ratio;
    overrides.push_back("split_ratio=" + format_double(args.split_ratio));
  }
  if (args.has_split_seed) {
    manifest.split_seed = args.split_seed;
    overrides.push_back("split_seed=" + std::to_string(args.split_seed));
  }
  if (args.has_expansion_size) {
    manifest.expansion.output_dim = args.expansion_size;
    overrides.push_back("expansion_size=" +
                        std::to_string(args.expansion_size));
  }
  if (args.has_expansion_seed) {
    manifest.expansion.seed = args.expansion_seed;
    overrides.push_back("expansion_seed=" +
                        std::to_string(args.expansion_seed));
  }
  if (!args.activation.empty()) {
    manifest.expansion.activation =
        anast::activation_from_string(args.activation);
    overrides.push_back("activation=" + args.activation);
  }
  manifest.validate();

  anast::AnalyticState state;
  anast::RunReport rep;
  if (args.method == "anast") {
    rep = anast::run_anast(manifest, &state);
  } else if (args.method == "naive") {
    rep = anast::run_naive(manifest, &state);
  } else {
    rep = anast::run_joint(manifest, &state);
  }
  rep.config.overrides = overrides;

  std::filesystem::create_directories(args.out_dir);
  const std::filesystem::path dir(args.out_dir);
  const std::string report_path =
      (dir / ("report_" + args.method + ".json")).string();
  const std::string table_path =
      (dir / ("accuracy_" + args.method + ".tsv")).string();
  anast::write_report_files(rep, report_path, table_path);
  std::string snapshot_path;
  if (args.method == "anast") {
    snapshot_path = (dir / "model_anast.anst").string();
    anast::save_state_file(state, snapshot_path);
  }

  std::cout << "ACC=" << format_double(rep.acc)
            << " BWT=" << format_double(rep.bwt) << "\n";
  std::cout << "report: " << report_path << "\n";
  std::cout << "table: " << table_path << "\n";
  if (!snapshot_path.empty()) std::cout << "model: " << snapshot_path << "\n";
  for (const std::string& w : rep.warnings) {
    std::cerr << "warning: " << w << "\n";
  }
  return 0;
}

struct EvalArgs {
  std::string snapshot_path;
  std::string features_path;
  std::string table_out;
};

int cmd_eval(const EvalArgs& args) {
  const anast::AnalyticState state =
      anast::load_state_file(args.snapshot_path);
  const anast::FeatureStore data = anast::load_features(args.features_path);

  std::vector<std::string> unknown;
  const double accuracy = anast::evaluate_accuracy(state, data, &unknown);
  const std::vector<std::string> predicted =
      anast::predict(state, data.features);

  // confusion[true][pred], keyed by label text so unseen labels show up too
  std::map<std::string, std::map<std::string, std::size_t>> confusion;
  std::size_t correct = 0;
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    confusion[data.labels[i]][predicted[i]] += 1;
    if (data.labels[i] == predicted[i]) ++correct;
  }

  std::cout << "accuracy=" << format_double(accuracy) << " (" << correct
            << "/" << data.rows() << ")\n";
  std::string table = "true_label\tpredicted_label\tcount\n";
  for (const auto& [truth, row] : confusion) {
    for (const auto& [pred, count] : row) {
      std::cout << "confusion " << truth << " -> " << pred << ": " << count
                << "\n";
      table += truth + "\t" + pred + "\t" + std::to_string(count) + "\n";
    }
  }
  if (!args.table_out.empty()) {
    std::ofstream out(args.table_out, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw std::runtime_error("cannot open for writing: " + args.table_out);
    }
    out << table;
  }
  if (!unknown.empty()) {
    std::cerr << "warning: labels never seen in training scored as wrong:";
    for (const std::string& u : unknown) std::cerr << " " << u;
    std::cerr << "\n";
  }
  return 0;
}

struct VerifyArgs {
  anast::VerifySpec spec;
};

int cmd_verify(const VerifyArgs& args) {
  const anast::VerifyOutcome outcome = anast::verify_equivalence(args.spec);
  std::cout << "trials=" << outcome.trials.size()
            << " failures=" << outcome.failures
            << " max_w_error=" << format_double(outcome.worst_w)
            << " max_r_error=" << format_double(outcome.worst_r)
            << " tolerance=" << format_double(args.spec.tolerance) << "\n";
  if (outcome.failures == 0) return 0;
  for (const anast::TrialRecord& rec : outcome.trials) {
    if (rec.passed) continue;
    std::cerr << "FAIL trial " << rec.index << " seed=" << rec.seed
              << " tasks=" << rec.tasks << " classes=" << rec.classes
              << " rows=" << rec.rows << " d_exp=" << rec.d_exp
              << " gamma=" << format_double(rec.gamma);
    if (rec.error.empty()) {
      std::cerr << " w_error=" << format_double(rec.w_distance)
                << " r_error=" << format_double(rec.r_distance);
    } else {
      std::cerr << " error: " << rec.error;
    }
    std::cerr << "\n";
  }
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Closed-form class-incremental ridge classifier over frozen random "
      "feature expansions"};
  app.require_subcommand(1);

  GenSynthArgs gen;
  CLI::App* gen_cmd = app.add_subcommand(
      "gen-synth", "Generate a synthetic Gaussian-blob feature file");
  gen_cmd->add_option("--classes", gen.spec.classes, "number of classes")
      ->required();
  gen_cmd
      ->add_option("--per-class", gen.spec.samples_per_class,
                   "samples per class")
      ->required();
  gen_cmd->add_option("--dim", gen.spec.dim, "feature dimension")->required();
  gen_cmd->add_option("--sep", gen.spec.separation,
                      "pairwise distance between class means")
      ->required();
  gen_cmd->add_option("--std", gen.spec.stddev,
                      "within-class standard deviation (default 1)");
  gen_cmd->add_option("--seed", gen.spec.seed, "generator seed (default 0)");
  gen_cmd->add_option("-o,--out", gen.out, "output feature file")->required();

  RunArgs run;
  CLI::App* run_cmd =
      app.add_subcommand("run", "Run a class-incremental scenario");
  run_cmd->add_option("-m,--manifest", run.manifest_path, "scenario manifest")
      ->required();
  run_cmd
      ->add_option("--method", run.method,
                   "anast (incremental), naive (per-task refit), or joint "
                   "(all tasks at once)")
      ->check(CLI::IsMember({"anast", "naive", "joint"}));
  run_cmd->add_option("-o,--out-dir", run.out_dir,
                      "output directory (default .)");
  CLI::Option* o_gamma =
      run_cmd->add_option("--gamma", run.gamma, "override: ridge strength");
  CLI::Option* o_ratio = run_cmd->add_option(
      "--split-ratio", run.split_ratio, "override: train fraction per class");
  CLI::Option* o_sseed = run_cmd->add_option("--split-seed", run.split_seed,
                                             "override: split seed");
  CLI::Option* o_esize = run_cmd->add_option(
      "--expansion-size", run.expansion_size, "override: expanded dimension");
  CLI::Option* o_eseed = run_cmd->add_option(
      "--expansion-seed", run.expansion_seed, "override: projector seed");
  run_cmd
      ->add_option("--activation", run.activation,
                   "override: expansion activation")
      ->check(CLI::IsMember({"identity", "relu"}));

  EvalArgs eval;
  CLI::App* eval_cmd = app.add_subcommand(
      "eval", "Evaluate a model snapshot on a feature file");
  eval_cmd
      ->add_option("-s,--snapshot", eval.snapshot_path, "model snapshot file")
      ->required();
  eval_cmd
      ->add_option("-f,--features", eval.features_path, "feature file")
      ->required();
  eval_cmd->add_option("--table", eval.table_out,
                       "also write the confusion counts as TSV");

  VerifyArgs verify;
  CLI::App* verify_cmd = app.add_subcommand(
      "verify",
      "Check that incremental updates reproduce joint training on "
      "randomized scenarios");
  verify_cmd->add_option("--trials", verify.spec.trials,
                         "number of scenarios (default 100)");
  verify_cmd->add_option("--seed", verify.spec.seed,
                         "base seed (default 1)");
  verify_cmd->add_option("--max-dim", verify.spec.max_dim,
                         "cap on expanded dimension (default 64)");
  verify_cmd
      ->add_flag("--corrupt-faum", verify.spec.corrupt_update,
                 "use the deliberately inconsistent inverse update "
                 "(must fail; validates the checker)")
      ->group("");  // hidden: test hook

  try {
    app.parse(argc, argv);
    run.has_gamma = o_gamma->count() > 0;
    run.has_split_ratio = o_ratio->count() > 0;
    run.has_split_seed = o_sseed->count() > 0;
    run.has_expansion_size = o_esize->count() > 0;
    run.has_expansion_seed = o_eseed->count() > 0;
    if (gen_cmd->parsed()) return cmd_gen_synth(gen);
    if (run_cmd->parsed()) return cmd_run(run);
    if (eval_cmd->parsed()) return cmd_eval(eval);
    if (verify_cmd->parsed()) return cmd_verify(verify);
    return 2;
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
