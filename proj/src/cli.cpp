#include "gridcodec/cli.hpp"

#include "gridcodec/dataio.hpp"
#include "gridcodec/evaluate.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <iomanip>
#include <ostream>

namespace gridcodec {

namespace {

struct TaskOptions {
  std::string p = "inf";
  double energy = 50.0;

  TaskSpec resolve(int dim) const {
    TaskSpec task{Exponent::parse(p), energy, dim};
    validate_task(task);
    return task;
  }
};

void add_task_options(CLI::App* cmd, TaskOptions& task) {
  cmd->add_option("--p", task.p, "Utility exponent: positive integer or 'inf'")->capture_default_str();
  cmd->add_option("--e", task.energy, "Energy budget E")->capture_default_str();
}

/// First (1 - fraction) of the rows for fitting, the rest for evaluation.
std::pair<ProfileDataset, ProfileDataset> split_holdout(const ProfileDataset& dataset, double fraction) {
  if (fraction <= 0.0) return {dataset, dataset};
  if (fraction >= 1.0) throw Error(ErrorCode::InvalidArgument, "--holdout must be in [0, 1)");
  const int held = static_cast<int>(std::ceil(fraction * dataset.size()));
  const int kept = dataset.size() - held;
  if (kept < 1 || held < 1) throw Error(ErrorCode::InvalidArgument, "--holdout leaves an empty split");

  ProfileDataset fit = dataset;
  ProfileDataset test = dataset;
  fit.profiles.assign(dataset.profiles.begin(), dataset.profiles.begin() + kept);
  test.profiles.assign(dataset.profiles.begin() + kept, dataset.profiles.end());
  return {fit, test};
}

std::string codec_name(const std::string& path) { return std::filesystem::path(path).stem().string(); }

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Utility-aware compression of load profiles", "gridcodec"};
  app.require_subcommand(1);

  // ingest
  std::string ausgrid_path;
  std::string customer;
  std::string category = "GC";
  std::string out_path;
  auto* ingest = app.add_subcommand("ingest", "Convert an Ausgrid CSV into a dataset file");
  ingest->add_option("--ausgrid", ausgrid_path, "Ausgrid solar home CSV")->required();
  ingest->add_option("--customer", customer, "Customer id (all customers if omitted)");
  ingest->add_option("--category", category, "Consumption category")->capture_default_str();
  ingest->add_option("--out", out_path, "Output dataset CSV")->required();

  // synth
  std::uint64_t seed = 0;
  int synth_count = 365;
  int synth_dim = 48;
  SynthParams synth_params;
  auto* synth = app.add_subcommand("synth", "Generate a synthetic dataset");
  synth->add_option("--seed", seed)->capture_default_str();
  synth->add_option("--t", synth_count, "Number of profiles")->capture_default_str();
  synth->add_option("--p", synth_dim, "Profile length")->capture_default_str();
  synth->add_option("--bumps", synth_params.bump_count)->capture_default_str();
  synth->add_option("--bump-scale", synth_params.bump_scale)->capture_default_str();
  synth->add_option("--noise", synth_params.noise_scale)->capture_default_str();
  synth->add_option("--out", out_path, "Output dataset CSV")->required();

  // train
  std::string codec_kind = "linear";
  std::string dataset_path;
  int rank = 4;
  TaskOptions task_opts;
  std::optional<double> learning_rate;
  std::optional<int> iterations;
  int batch_size = 0;
  double init_scale = 0.1;
  double holdout = 0.0;
  bool verbose = false;
  auto* train = app.add_subcommand("train", "Fit a codec");
  train->add_option("--codec", codec_kind, "Codec type")
      ->check(CLI::IsMember({"klt", "linear", "ae"}))
      ->capture_default_str();
  train->add_option("--dataset", dataset_path, "Dataset CSV")->required();
  train->add_option("--n", rank, "Rank limit N")->capture_default_str();
  add_task_options(train, task_opts);
  train->add_option("--lr", learning_rate, "Learning rate (linear 0.05, ae 0.01)");
  train->add_option("--iters", iterations, "Iterations / epochs (linear 200, ae 500)");
  train->add_option("--seed", seed)->capture_default_str();
  train->add_option("--batch", batch_size, "Autoencoder batch size, 0 = full batch")->capture_default_str();
  train->add_option("--init-scale", init_scale, "Autoencoder weight init range")->capture_default_str();
  train->add_option("--holdout", holdout, "Fraction of trailing profiles excluded from fitting")
      ->capture_default_str();
  train->add_flag("--verbose", verbose, "Print the loss after every iteration");
  train->add_option("--out", out_path, "Output codec JSON")->required();

  // eval
  std::vector<std::string> codec_paths;
  std::optional<int> eval_bits;
  std::string csv_path;
  auto* eval = app.add_subcommand("eval", "Report optimality loss of one or more codecs");
  eval->add_option("--codec", codec_paths, "Codec JSON files, comma separated")->required()->delimiter(',');
  eval->add_option("--dataset", dataset_path, "Dataset CSV")->required();
  add_task_options(eval, task_opts);
  eval->add_option("--bits", eval_bits, "Quantize each coefficient to this many bits");
  eval->add_option("--holdout", holdout, "Evaluate on this trailing fraction only")->capture_default_str();
  eval->add_option("--out", out_path, "Report JSON")->required();
  eval->add_option("--csv", csv_path, "Optional CSV export");

  // sweep
  std::vector<int> bits_list{1, 2, 3, 4, 5, 6, 7, 8};
  auto* sweep = app.add_subcommand("sweep", "Rate sweep over quantizer bit depths");
  sweep->add_option("--codec", codec_paths, "Codec JSON files, comma separated")->required()->delimiter(',');
  sweep->add_option("--dataset", dataset_path, "Dataset CSV")->required();
  add_task_options(sweep, task_opts);
  sweep->add_option("--bits", bits_list, "Bit depths, comma separated")->delimiter(',')->capture_default_str();
  sweep->add_option("--holdout", holdout, "Evaluate on this trailing fraction only")->capture_default_str();
  sweep->add_option("--out", out_path, "Report JSON")->required();
  sweep->add_option("--csv", csv_path, "Optional CSV export");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "gridcodec: usage error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (ingest->parsed()) {
      const auto filter = customer.empty() ? std::nullopt : std::optional<std::string>(customer);
      const ProfileDataset dataset = load_ausgrid(ausgrid_path, filter, category);
      save_dataset(out_path, dataset);
      out << "wrote " << dataset.size() << " profiles of length " << dataset.dim << " to " << out_path << "\n";
    } else if (synth->parsed()) {
      const ProfileDataset dataset = synth_generate(seed, synth_count, synth_dim, synth_params);
      save_dataset(out_path, dataset);
      out << "wrote " << dataset.size() << " synthetic profiles of length " << dataset.dim << " to " << out_path
          << "\n";
    } else if (train->parsed()) {
      const ProfileDataset full = load_dataset(dataset_path);
      const ProfileDataset fit = split_holdout(full, holdout).first;
      const TaskSpec task = task_opts.resolve(fit.dim);
      ProgressFn progress;
      if (verbose) {
        progress = [&](int it, double loss) {
          err << "iter " << it << " loss " << std::setprecision(10) << loss << "\n";
        };
      }

      Codec codec;
      if (codec_kind == "klt") {
        codec = klt_fit(fit, rank);
        out << "klt: loss " << empirical_loss(std::get<LinearCodec>(codec), fit, task) << "\n";
      } else if (codec_kind == "linear") {
        auto [linear, report] =
            fit_utility_linear(fit, task, rank, iterations.value_or(200), learning_rate.value_or(0.05), progress);
        out << "linear: loss " << report.loss_trace.front() << " -> " << report.loss_trace[report.best_iteration]
            << " after " << report.iterations << " iterations (" << to_string(report.stop_reason) << ")\n";
        codec = std::move(linear);
      } else {
        TrainConfig config;
        config.width = rank;
        config.epochs = iterations.value_or(config.epochs);
        config.learning_rate = learning_rate.value_or(config.learning_rate);
        config.batch_size = batch_size;
        config.seed = seed;
        config.init_scale = init_scale;
        auto [ae, report] = ae_train(fit, task, config, progress);
        out << "ae: loss " << report.loss_trace.front() << " -> " << report.loss_trace[report.best_iteration]
            << " after " << report.iterations << " epochs\n";
        codec = std::move(ae);
      }
      save_codec(out_path, codec);
    } else if (eval->parsed() || sweep->parsed()) {
      const ProfileDataset full = load_dataset(dataset_path);
      const auto [calibration, test] = split_holdout(full, holdout);
      EvalReport report;
      report.task = task_opts.resolve(full.dim);
      for (const auto& path : codec_paths) {
        const Codec codec = load_codec(path);
        if (sweep->parsed()) {
          report.codecs.push_back(sweep_bits(codec, test, calibration, report.task, bits_list, codec_name(path)));
        } else {
          std::optional<QuantizerSetting> quantizer;
          if (eval_bits) quantizer = QuantizerSetting{default_quantizer(codec, calibration), *eval_bits};
          report.codecs.push_back(eval_codec(codec, test, report.task, quantizer, codec_name(path)));
        }
      }
      const nlohmann::json json = report_to_json(report);
      validate_report_json(json);
      write_text(out_path, json.dump(2) + "\n");
      if (!csv_path.empty()) write_text(csv_path, report_to_csv(report));
      for (const auto& c : report.codecs) {
        out << c.name << ": mse_loss " << c.mse_loss << ", relative " << c.relative_percent << "%\n";
      }
    }
  } catch (const std::exception& e) {
    err << "gridcodec: error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace gridcodec
