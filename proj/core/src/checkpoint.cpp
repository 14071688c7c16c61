#include "honeygraph/checkpoint.hpp"

#include <json.hpp>

#include "honeygraph/error.hpp"
#include "honeygraph/graph_io.hpp"

namespace honeygraph {

using ordered_json = nlohmann::ordered_json;

namespace {

ordered_json config_to_json(const ModelConfig& c) {
  ordered_json j{
      {"embed_dim", c.embed_dim},
      {"gru_units", c.gru_units},
      {"musigma_hidden", c.musigma_hidden},
      {"latent_dim", c.latent_dim},
      {"decoder_hidden", c.decoder_hidden},
      {"edge_threshold", c.edge_threshold},
      {"focal_alpha", c.focal_alpha},
      {"focal_gamma", c.focal_gamma},
      {"lr_initial", c.lr_initial},
      {"lr_decay_rate", c.lr_decay_rate},
      {"lr_decay_steps", c.lr_decay_steps},
      {"batch_size", c.batch_size},
      {"epochs", c.epochs},
      {"seed", c.seed},
      {"sampling", c.sampling == LatentSampling::Prior ? "prior" : "aggregated_posterior"}};
  j["kl_weight"] = c.kl_weight ? ordered_json(*c.kl_weight) : ordered_json(nullptr);
  return j;
}

ModelConfig config_from_json(const nlohmann::json& j) {
  ModelConfig c;
  c.embed_dim = j.at("embed_dim").get<std::size_t>();
  c.gru_units = j.at("gru_units").get<std::size_t>();
  c.musigma_hidden = j.at("musigma_hidden").get<std::size_t>();
  c.latent_dim = j.at("latent_dim").get<std::size_t>();
  c.decoder_hidden = j.at("decoder_hidden").get<std::vector<std::size_t>>();
  c.edge_threshold = j.at("edge_threshold").get<double>();
  c.focal_alpha = j.at("focal_alpha").get<double>();
  c.focal_gamma = j.at("focal_gamma").get<double>();
  c.lr_initial = j.at("lr_initial").get<double>();
  c.lr_decay_rate = j.at("lr_decay_rate").get<double>();
  c.lr_decay_steps = j.at("lr_decay_steps").get<std::size_t>();
  c.batch_size = j.at("batch_size").get<std::size_t>();
  c.epochs = j.at("epochs").get<std::size_t>();
  c.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("kl_weight") && !j.at("kl_weight").is_null()) c.kl_weight = j.at("kl_weight").get<double>();
  const std::string sampling = j.value("sampling", std::string("prior"));
  if (sampling == "prior") {
    c.sampling = LatentSampling::Prior;
  } else if (sampling == "aggregated_posterior") {
    c.sampling = LatentSampling::AggregatedPosterior;
  } else {
    throw Error(ErrorKind::MalformedInput, "checkpoint: unknown sampling mode '" + sampling + "'");
  }
  return c;
}

}  // namespace

std::string checkpoint_to_json(const Checkpoint& checkpoint) {
  ordered_json params = ordered_json::object();
  checkpoint.params.visit([&params](const std::string& key, const auto& a) {
    std::vector<double> data(static_cast<std::size_t>(a.size()));
    // Row-major so the archive reads naturally.
    std::size_t k = 0;
    for (Eigen::Index r = 0; r < a.rows(); ++r) {
      for (Eigen::Index c = 0; c < a.cols(); ++c) data[k++] = a(r, c);
    }
    params[key] = ordered_json{{"rows", a.rows()}, {"cols", a.cols()}, {"data", data}};
  });
  ordered_json doc{{"format_version", kCheckpointFormatVersion},
                   {"config", config_to_json(checkpoint.config)},
                   {"n_pad", checkpoint.n_pad},
                   {"params", params}};
  return doc.dump() + "\n";
}

Checkpoint checkpoint_from_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorKind::MalformedInput, std::string("checkpoint: ") + e.what());
  }
  try {
    const int version = doc.at("format_version").get<int>();
    if (version != kCheckpointFormatVersion) {
      throw Error(ErrorKind::MalformedInput,
                  "checkpoint: unsupported format_version " + std::to_string(version));
    }
    Checkpoint cp;
    cp.config = config_from_json(doc.at("config"));
    cp.config.validate();
    cp.n_pad = doc.value("n_pad", std::size_t{0});
    cp.params = ModelParams::zeros(cp.config);
    const auto& params = doc.at("params");
    cp.params.visit([&params](const std::string& key, auto& a) {
      if (!params.contains(key)) {
        throw Error(ErrorKind::MalformedInput, "checkpoint: missing parameter '" + key + "'");
      }
      const auto& entry = params.at(key);
      const auto rows = entry.at("rows").get<Eigen::Index>();
      const auto cols = entry.at("cols").get<Eigen::Index>();
      const auto data = entry.at("data").get<std::vector<double>>();
      if (rows != a.rows() || cols != a.cols() || static_cast<Eigen::Index>(data.size()) != a.size()) {
        throw Error(ErrorKind::ShapeMismatch, "checkpoint: parameter '" + key + "' has the wrong shape");
      }
      std::size_t k = 0;
      for (Eigen::Index r = 0; r < rows; ++r) {
        for (Eigen::Index c = 0; c < cols; ++c) a(r, c) = data[k++];
      }
    });
    return cp;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::MalformedInput, std::string("checkpoint: ") + e.what());
  }
}

void save_checkpoint(const Checkpoint& checkpoint, const std::filesystem::path& path) {
  write_text_file(path, checkpoint_to_json(checkpoint));
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  return checkpoint_from_json(read_text_file(path));
}

}  // namespace honeygraph
