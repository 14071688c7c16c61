#include "commands.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>

#include <CLI11.hpp>
#include <json.hpp>

#include "honeygraph/honeygraph.hpp"

namespace honeygraph::cli {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

namespace {

void guard_output(const fs::path& path, bool force) {
  if (fs::exists(path) && !force) {
    throw Error(ErrorKind::Io, path.string() + " exists (use --force to overwrite)");
  }
}

void write_output(const fs::path& path, std::string_view text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  write_text_file(path, text);
}

LatentSampling parse_sampling(const std::string& s) {
  if (s == "prior") return LatentSampling::Prior;
  if (s == "aggregated" || s == "aggregated_posterior") return LatentSampling::AggregatedPosterior;
  throw Error(ErrorKind::InvalidArgument, "unknown sampling mode '" + s + "'");
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

ordered_json opt_number(const std::optional<double>& v) {
  return v ? ordered_json(*v) : ordered_json(nullptr);
}

// Copies generated attributes onto the new nodes so the extended graph is
// self-describing.
ADGraph attach_records(const ADGraph& g, const std::vector<HoneyuserRecord>& records) {
  std::vector<Node> nodes = g.nodes();
  for (const auto& r : records) {
    for (Node& n : nodes) {
      if (n.id != r.node_id) continue;
      n.attributes["name"] = r.cn;
      n.attributes["samAccountName"] = r.sam_account_name;
      n.attributes["distinguishedName"] = r.distinguished_name;
      n.attributes["displayName"] = r.display_name;
      n.attributes["userPrincipalName"] = r.user_principal_name;
      n.attributes["description"] = r.description;
    }
  }
  return ADGraph(std::move(nodes), g.edges());
}

}  // namespace

int cmd_dataset(const DatasetArgs& a, std::ostream& out) {
  Dataset ds;
  if (a.kind == "grid") {
    GridSpec spec;
    spec.n_samples = a.count;
    spec.min_side = a.min_side;
    spec.max_side = a.max_side;
    spec.seed = a.seed;
    spec.validation_fraction = a.validation_fraction;
    ds = generate_grid_dataset(spec);
  } else {
    DatasetSpec spec = preset_spec(a.size, a.count, a.seed);
    spec.validation_fraction = a.validation_fraction;
    ds = generate_dataset(spec);
  }
  save_dataset(ds, a.out, a.force);
  const DatasetStats st = dataset_stats(ds.graphs);
  out << "wrote " << ds.graphs.size() << " " << ds.kind << " graphs to " << a.out.string() << " (train "
      << ds.indices(Split::Train).size() << ", validation " << ds.indices(Split::Validation).size()
      << ", test " << ds.indices(Split::Test).size() << ")\n"
      << "mean |V| " << fmt("%.2f", st.mean_nodes) << ", mean |E| " << fmt("%.2f", st.mean_edges) << "\n";
  return kExitOk;
}

int cmd_train(const TrainArgs& a, std::ostream& out) {
  const fs::path history = a.history ? *a.history : fs::path(a.out).replace_extension(".history.csv");
  guard_output(a.out, a.force);
  guard_output(history, a.force);

  const Dataset ds = load_dataset(a.data);
  ModelConfig config;
  TrainOptions options;
  if (a.resume) {
    Checkpoint ck = load_checkpoint(*a.resume);
    config = ck.config;
    options.initial = std::move(ck.params);
  }
  if (a.latent_dim) config.latent_dim = *a.latent_dim;
  if (a.gru_units) config.gru_units = *a.gru_units;
  if (a.epochs) config.epochs = *a.epochs;
  if (a.seed) config.seed = *a.seed;
  if (a.lr) config.lr_initial = *a.lr;
  if (a.decay_rate) config.lr_decay_rate = *a.decay_rate;
  if (a.decay_steps) config.lr_decay_steps = *a.decay_steps;
  if (a.batch_size) config.batch_size = *a.batch_size;
  if (a.kl_weight) config.kl_weight = *a.kl_weight;
  if (a.focal_alpha) config.focal_alpha = *a.focal_alpha;
  if (a.focal_gamma) config.focal_gamma = *a.focal_gamma;
  if (a.threshold) config.edge_threshold = *a.threshold;
  if (a.sampling) config.sampling = parse_sampling(*a.sampling);
  options.train_limit = a.limit;
  if (!a.quiet) {
    options.on_epoch = [&out](const EpochRecord& r) {
      out << "epoch " << r.epoch << "  train " << fmt("%.5f", r.train_loss) << "  focal "
          << fmt("%.6f", r.train_focal) << "  kl " << fmt("%.5f", r.train_kl) << "  val "
          << fmt("%.5f", r.val_loss) << "\n"
          << std::flush;
    };
  }

  TrainResult result = train(ds, config, options);
  save_checkpoint(Checkpoint{config, result.params, result.n_pad}, a.out);
  write_output(history, history_csv(result.history));
  if (result.best_epoch == 0) {
    out << "no training epochs run; wrote initial parameters to " << a.out.string() << "\n";
  } else {
    out << "best validation loss " << fmt("%.6f", result.best_val_loss) << " at epoch " << result.best_epoch
        << "; wrote " << a.out.string() << " and " << history.string() << "\n";
  }
  return kExitOk;
}

int cmd_extend(const ExtendArgs& a, std::ostream& out) {
  const fs::path graph_out = a.out / "extended_graph.json";
  const fs::path records_out = a.out / "honeyusers.json";
  const fs::path ldif_out = a.out / "honeyusers.ldif";
  const fs::path script_out = a.out / "provision_honeyusers.ps1";
  const fs::path report_out = a.out / "extension_report.json";
  for (const auto& p : {graph_out, records_out, ldif_out, script_out, report_out}) guard_output(p, a.force);

  Checkpoint ck = load_checkpoint(a.model);
  if (a.threshold) ck.config.edge_threshold = *a.threshold;
  if (a.sampling) ck.config.sampling = parse_sampling(*a.sampling);
  ck.config.validate();
  const ADGraph graph = load_graph_file(a.graph);

  Rng extend_rng = make_rng(a.seed, {1});
  const ExtensionResult x = extend_graph(ck.params, ck.config, graph, a.users, extend_rng);
  Rng name_rng = make_rng(a.seed, {2});
  const auto records = generate_attributes(x.graph, x.new_nodes, name_rng, NameCorpus::builtin());
  const ADGraph extended = attach_records(x.graph, records);

  ordered_json report{{"requested", a.users},
                      {"kept", x.new_nodes},
                      {"discarded_rows", x.discarded},
                      {"threshold", ck.config.edge_threshold},
                      {"column_order", x.column_order}};
  ordered_json scores = ordered_json::array();
  for (Eigen::Index i = 0; i < x.scores.rows(); ++i) {
    std::vector<double> row;
    row.reserve(static_cast<std::size_t>(x.scores.cols()));
    for (Eigen::Index j = 0; j < x.scores.cols(); ++j) row.push_back(x.scores(i, j));
    scores.push_back(row);
  }
  report["scores"] = scores;

  fs::create_directories(a.out);
  write_output(graph_out, to_native_json(extended));
  write_output(records_out, records_to_json(records));
  write_output(ldif_out, export_ldif(records, extended));
  write_output(script_out, export_provisioning_script(records, extended));
  write_output(report_out, report.dump(2) + "\n");

  out << "kept " << x.new_nodes.size() << " of " << a.users << " honeyusers";
  if (!x.discarded.empty()) out << " (" << x.discarded.size() << " discarded: no edge above threshold)";
  out << "\n";
  for (const auto& r : records) {
    out << "  " << r.sam_account_name << "  " << r.distinguished_name << "  groups " << r.member_of.size() << "\n";
  }
  out << "wrote " << a.out.string() << "\n";
  return kExitOk;
}

int cmd_evaluate(const EvaluateArgs& a, std::ostream& out) {
  if (a.out) guard_output(*a.out, a.force);
  if (a.pr_curve) guard_output(*a.pr_curve, a.force);

  ordered_json report;
  if (a.original) {
    const ADGraph original = load_graph_file(*a.original);
    const ADGraph extended = load_graph_file(*a.extended);
    const PairReport p = compare_graphs(original, extended);
    report = ordered_json{{"dataset", nullptr},
                          {"precision", nullptr},
                          {"recall", nullptr},
                          {"f1", nullptr},
                          {"pr_auc", nullptr},
                          {"evr", opt_number(p.evr)},
                          {"mecr", opt_number(p.mecr)},
                          {"wasserstein_new", opt_number(p.wasserstein_new)},
                          {"wasserstein_all", p.wasserstein_all},
                          {"details", {{"new_nodes", p.new_nodes}}}};
  } else {
    const Checkpoint ck = load_checkpoint(*a.model);
    const Dataset ds = load_dataset(*a.data);
    std::vector<ADGraph> graphs;
    for (std::size_t i : ds.indices(parse_split(a.split))) {
      if (a.limit && graphs.size() >= *a.limit) break;
      graphs.push_back(ds.graphs[i]);
    }
    if (graphs.empty()) throw Error(ErrorKind::EmptyInput, "no graphs in split '" + a.split + "'");
    const ReconstructionReport rec = evaluate_reconstruction(graphs, ck.params, ck.config, a.pr_curve.has_value());
    const ExtensionReport ext = evaluate_extension(graphs, ck.params, ck.config, a.users, a.seed);
    const bool any = ext.graphs_without_new_nodes < ext.graphs;
    report = ordered_json{
        {"dataset", a.data->string()},
        {"precision", rec.pooled.precision},
        {"recall", rec.pooled.recall},
        {"f1", rec.pooled.f1},
        {"pr_auc", rec.pr_auc},
        {"evr", any ? ordered_json(ext.evr) : ordered_json(nullptr)},
        {"mecr", opt_number(ext.mecr)},
        {"wasserstein_new", any ? ordered_json(ext.wasserstein_new) : ordered_json(nullptr)},
        {"wasserstein_all", any ? ordered_json(ext.wasserstein_all) : ordered_json(nullptr)},
        {"details",
         {{"split", a.split},
          {"graphs", rec.graphs},
          {"tp", rec.counts.tp},
          {"fp", rec.counts.fp},
          {"fn", rec.counts.fn},
          {"tn", rec.counts.tn},
          {"f1_per_graph_mean", rec.f1_per_graph_mean},
          {"users_per_graph", a.users},
          {"nodes_kept", ext.nodes_kept},
          {"nodes_requested", ext.nodes_requested},
          {"graphs_without_new_nodes", ext.graphs_without_new_nodes},
          {"delta_in_original", ext.mecr ? ordered_json(ext.delta_in_original) : ordered_json(nullptr)},
          {"delta_in_generated", any ? ordered_json(ext.delta_in_generated) : ordered_json(nullptr)}}}};
    if (a.pr_curve) {
      std::string csv = "threshold,recall,precision\n";
      char buf[128];
      for (const PrPoint& p : rec.curve) {
        std::snprintf(buf, sizeof buf, "%.10g,%.10g,%.10g\n", p.threshold, p.recall, p.precision);
        csv += buf;
      }
      write_output(*a.pr_curve, csv);
    }
  }
  const std::string text = report.dump(2) + "\n";
  if (a.out) write_output(*a.out, text);
  out << text;
  return kExitOk;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Honeyuser placement for Active Directory graphs"};
  app.set_config("--config", "", "TOML/INI file with option defaults; flags override it");
  app.require_subcommand(1);

  DatasetArgs ds;
  std::string ds_out;
  auto* dataset = app.add_subcommand("dataset", "Generate a synthetic dataset");
  dataset->add_option("--kind", ds.kind, "ad or grid")->check(CLI::IsMember({"ad", "grid"}));
  dataset->add_option("--size", ds.size, "Nominal graph size")->check(CLI::IsMember({15, 50, 150, 500}));
  dataset->add_option("--count", ds.count, "Number of graphs")->check(CLI::Range(std::size_t{1}, std::size_t{1000000}));
  dataset->add_option("--seed", ds.seed, "Master seed");
  dataset->add_option("--min-side", ds.min_side, "Smallest grid side")->check(CLI::Range(std::size_t{1}, std::size_t{1000}));
  dataset->add_option("--max-side", ds.max_side, "Largest grid side")->check(CLI::Range(std::size_t{1}, std::size_t{1000}));
  dataset->add_option("--validation-fraction", ds.validation_fraction, "Validation share of train+validation")
      ->check(CLI::Range(0.0, 0.99));
  dataset->add_option("--out", ds_out, "Output directory")->required();
  dataset->add_flag("--force", ds.force, "Overwrite an existing dataset");

  TrainArgs tr;
  std::string tr_data, tr_out, tr_history, tr_resume, tr_sampling;
  std::size_t tr_limit = 0, tr_epochs = 0, tr_decay_steps = 0, tr_batch = 0, tr_latent = 0, tr_units = 0;
  std::uint64_t tr_seed = 0;
  double tr_lr = 0, tr_decay = 0, tr_kl = 0, tr_alpha = 0, tr_gamma = 0, tr_threshold = 0;
  auto* train_cmd = app.add_subcommand("train", "Train a model on a dataset");
  train_cmd->add_option("--data", tr_data, "Dataset directory")->required();
  train_cmd->add_option("--out", tr_out, "Checkpoint path")->required();
  train_cmd->add_option("--history", tr_history, "History CSV (default: <out>.history.csv)");
  auto* resume = train_cmd->add_option("--resume", tr_resume, "Continue from this checkpoint");
  auto* o_limit = train_cmd->add_option("--limit", tr_limit, "Use only the first N training graphs")
                      ->check(CLI::Range(std::size_t{1}, std::numeric_limits<std::size_t>::max()));
  auto* o_epochs = train_cmd->add_option("--epochs", tr_epochs, "Epochs (default 50)");
  auto* o_seed = train_cmd->add_option("--seed", tr_seed, "Seed for init, shuffling and noise");
  auto* o_lr = train_cmd->add_option("--lr", tr_lr, "Initial learning rate")->check(CLI::PositiveNumber);
  auto* o_decay = train_cmd->add_option("--lr-decay", tr_decay, "Decay factor per decay period")
                      ->check(CLI::Range(1e-9, 1.0));
  auto* o_steps = train_cmd->add_option("--lr-decay-steps", tr_decay_steps, "Optimizer steps per decay period")
                      ->check(CLI::PositiveNumber);
  auto* o_batch = train_cmd->add_option("--batch-size", tr_batch, "Graphs per batch")->check(CLI::PositiveNumber);
  auto* o_kl = train_cmd->add_option("--kl-weight", tr_kl, "Weight of the KL term (default: latent size)")
                   ->check(CLI::NonNegativeNumber);
  auto* o_alpha = train_cmd->add_option("--focal-alpha", tr_alpha, "Focal loss alpha")->check(CLI::Range(1e-9, 1.0 - 1e-9));
  auto* o_gamma = train_cmd->add_option("--focal-gamma", tr_gamma, "Focal loss gamma")->check(CLI::NonNegativeNumber);
  auto* o_thr = train_cmd->add_option("--threshold", tr_threshold, "Edge threshold")->check(CLI::Range(1e-9, 1.0 - 1e-9));
  auto* o_sampling = train_cmd->add_option("--sampling", tr_sampling, "prior or aggregated")
                         ->check(CLI::IsMember({"prior", "aggregated"}));
  auto* o_latent = train_cmd->add_option("--latent-dim", tr_latent, "Latent size")->check(CLI::PositiveNumber)->excludes(resume);
  auto* o_units = train_cmd->add_option("--gru-units", tr_units, "GRU width")->check(CLI::PositiveNumber)->excludes(resume);
  train_cmd->add_flag("--quiet", tr.quiet, "No per-epoch output");
  train_cmd->add_flag("--force", tr.force, "Overwrite existing outputs");

  ExtendArgs ex;
  std::string ex_model, ex_graph, ex_out, ex_sampling;
  double ex_threshold = 0;
  auto* extend_cmd = app.add_subcommand("extend", "Place honeyusers in a graph and export artifacts");
  extend_cmd->add_option("--model", ex_model, "Checkpoint")->required();
  extend_cmd->add_option("--graph", ex_graph, "Native graph JSON or SharpHound export")->required();
  extend_cmd->add_option("--users", ex.users, "Honeyusers to sample")->check(CLI::Range(std::size_t{1}, std::size_t{100000}));
  extend_cmd->add_option("--out", ex_out, "Output directory")->required();
  extend_cmd->add_option("--seed", ex.seed, "Seed for sampling and names");
  auto* ex_thr = extend_cmd->add_option("--threshold", ex_threshold, "Edge threshold override")
                     ->check(CLI::Range(1e-9, 1.0 - 1e-9));
  auto* ex_samp = extend_cmd->add_option("--sampling", ex_sampling, "prior or aggregated")
                      ->check(CLI::IsMember({"prior", "aggregated"}));
  extend_cmd->add_flag("--force", ex.force, "Overwrite existing outputs");

  EvaluateArgs ev;
  std::string ev_model, ev_data, ev_original, ev_extended, ev_out, ev_curve;
  std::size_t ev_limit = 0;
  auto* eval_cmd = app.add_subcommand("evaluate", "Score a model on a dataset split, or compare two graphs");
  auto* e_model = eval_cmd->add_option("--model", ev_model, "Checkpoint (dataset mode)");
  auto* e_data = eval_cmd->add_option("--data", ev_data, "Dataset directory (dataset mode)");
  eval_cmd->add_option("--split", ev.split, "Split to score")->check(CLI::IsMember({"train", "validation", "test"}));
  auto* e_limit = eval_cmd->add_option("--limit", ev_limit, "Score at most N graphs")->check(CLI::PositiveNumber);
  eval_cmd->add_option("--users", ev.users, "Honeyusers per graph")->check(CLI::Range(std::size_t{1}, std::size_t{100000}));
  eval_cmd->add_option("--seed", ev.seed, "Seed for extension sampling");
  auto* e_orig = eval_cmd->add_option("--original", ev_original, "Original graph (pair mode)");
  auto* e_ext = eval_cmd->add_option("--extended", ev_extended, "Extended graph (pair mode)");
  auto* e_out = eval_cmd->add_option("--out", ev_out, "Write the JSON report here as well");
  auto* e_curve = eval_cmd->add_option("--pr-curve", ev_curve, "Write PR curve points as CSV (dataset mode)");
  eval_cmd->add_flag("--force", ev.force, "Overwrite existing outputs");
  e_orig->needs(e_ext);
  e_ext->needs(e_orig);
  e_orig->excludes(e_model)->excludes(e_data)->excludes(e_curve);
  e_model->needs(e_data);
  e_data->needs(e_model);

  try {
    app.parse(argc, argv);
    if (eval_cmd->parsed() && !e_orig->count() && !e_model->count()) {
      throw CLI::ValidationError("evaluate", "either --model/--data or --original/--extended is required");
    }
  } catch (const CLI::CallForHelp& e) {
    out << app.help(e.get_name() == "--help" && app.get_subcommands().size() ? app.get_subcommands().front()->get_name() : "");
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (dataset->parsed()) {
      ds.out = ds_out;
      if (ds.min_side > ds.max_side) {
        err << "usage error: --min-side exceeds --max-side\n";
        return kExitUsage;
      }
      return cmd_dataset(ds, out);
    }
    if (train_cmd->parsed()) {
      tr.data = tr_data;
      tr.out = tr_out;
      if (!tr_history.empty()) tr.history = tr_history;
      if (resume->count()) tr.resume = tr_resume;
      if (o_limit->count()) tr.limit = tr_limit;
      if (o_epochs->count()) tr.epochs = tr_epochs;
      if (o_seed->count()) tr.seed = tr_seed;
      if (o_lr->count()) tr.lr = tr_lr;
      if (o_decay->count()) tr.decay_rate = tr_decay;
      if (o_steps->count()) tr.decay_steps = tr_decay_steps;
      if (o_batch->count()) tr.batch_size = tr_batch;
      if (o_kl->count()) tr.kl_weight = tr_kl;
      if (o_alpha->count()) tr.focal_alpha = tr_alpha;
      if (o_gamma->count()) tr.focal_gamma = tr_gamma;
      if (o_thr->count()) tr.threshold = tr_threshold;
      if (o_sampling->count()) tr.sampling = tr_sampling;
      if (o_latent->count()) tr.latent_dim = tr_latent;
      if (o_units->count()) tr.gru_units = tr_units;
      return cmd_train(tr, out);
    }
    if (extend_cmd->parsed()) {
      ex.model = ex_model;
      ex.graph = ex_graph;
      ex.out = ex_out;
      if (ex_thr->count()) ex.threshold = ex_threshold;
      if (ex_samp->count()) ex.sampling = ex_sampling;
      return cmd_extend(ex, out);
    }
    if (eval_cmd->parsed()) {
      if (e_model->count()) ev.model = ev_model;
      if (e_data->count()) ev.data = ev_data;
      if (e_orig->count()) ev.original = ev_original;
      if (e_ext->count()) ev.extended = ev_extended;
      if (e_out->count()) ev.out = ev_out;
      if (e_curve->count()) ev.pr_curve = ev_curve;
      if (e_limit->count()) ev.limit = ev_limit;
      return cmd_evaluate(ev, out);
    }
  } catch (const Error& e) {
    err << "error (" << to_string(e.kind()) << "): " << e.what() << "\n";
    return kExitRuntime;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitUsage;
}

}  // namespace honeygraph::cli
