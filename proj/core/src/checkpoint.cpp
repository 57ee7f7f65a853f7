#include "fixlab/checkpoint.hpp"

#include <fstream>

#include <json.hpp>

#include "fixlab/error.hpp"

namespace fixlab {

namespace {

using Json = nlohmann::ordered_json;

constexpr const char* kFormat = "fixlab-checkpoint";
constexpr int kVersion = 1;

Json tensor_to_json(const Tensor2D& t) {
  Json j;
  j["rows"] = t.rows;
  j["cols"] = t.cols;
  j["data"] = t.data;
  return j;
}

Tensor2D tensor_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("rows") || !j.contains("cols") || !j.contains("data")) {
    raise(ErrorCode::FormatError, "malformed tensor block");
  }
  Tensor2D t(j["rows"].get<std::size_t>(), j["cols"].get<std::size_t>());
  const Json& data = j["data"];
  if (!data.is_array() || data.size() != t.size()) {
    raise(ErrorCode::FormatError, "tensor data length disagrees with its shape");
  }
  for (std::size_t i = 0; i < t.data.size(); ++i) t.data[i] = data[i].get<double>();
  return t;
}

} // namespace

void save_checkpoint(const Checkpoint& checkpoint, const std::filesystem::path& path) {
  Json j;
  j["format"] = kFormat;
  j["version"] = kVersion;

  const StudentConfig& cfg = checkpoint.model.config;
  Json jc;
  jc["vocab_size"] = cfg.vocab_size;
  jc["embed_dim"] = cfg.embed_dim;
  jc["hidden_dim"] = cfg.hidden_dim;
  jc["max_len"] = cfg.max_len;
  jc["variant"] = to_string(cfg.variant);
  jc["lambda_reason"] = cfg.lambda_reason;
  jc["tag_threshold"] = cfg.tag_threshold;
  j["config"] = std::move(jc);

  Json params;
  for (const auto& [name, tensor] : checkpoint.model.named_parameters()) {
    params[name] = tensor_to_json(*tensor);
  }
  j["params"] = std::move(params);

  if (checkpoint.adam) {
    Json ja;
    const AdamConfig& ac = checkpoint.adam->config();
    ja["lr"] = ac.lr;
    ja["beta1"] = ac.beta1;
    ja["beta2"] = ac.beta2;
    ja["eps"] = ac.eps;
    ja["step_count"] = checkpoint.adam->step_count();
    Json m = Json::array();
    for (const Tensor2D& t : checkpoint.adam->first_moments()) m.push_back(tensor_to_json(t));
    ja["m"] = std::move(m);
    Json v = Json::array();
    for (const Tensor2D& t : checkpoint.adam->second_moments()) v.push_back(tensor_to_json(t));
    ja["v"] = std::move(v);
    j["adam"] = std::move(ja);
  } else {
    j["adam"] = nullptr;
  }

  j["vocab"] = checkpoint.vocab ? Json(checkpoint.vocab->tokens()) : Json(nullptr);

  if (checkpoint.shuffle_state) {
    Json jr;
    jr["counter"] = checkpoint.shuffle_state->counter;
    jr["have_spare"] = checkpoint.shuffle_state->have_spare;
    jr["spare"] = checkpoint.shuffle_state->spare;
    j["shuffle_state"] = std::move(jr);
  } else {
    j["shuffle_state"] = nullptr;
  }
  j["epochs_done"] = checkpoint.epochs_done;

  std::ofstream out(path, std::ios::binary);
  if (!out) raise(ErrorCode::IoError, "cannot open '" + path.string() + "' for writing");
  out << j.dump(2) << '\n';
  if (!out) raise(ErrorCode::IoError, "failed writing '" + path.string() + "'");
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(ErrorCode::IoError, "cannot open '" + path.string() + "'");
  Json j = Json::parse(in, nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    raise(ErrorCode::FormatError, "'" + path.string() + "' is not valid JSON");
  }
  if (!j.contains("format") || j["format"] != kFormat || !j.contains("version") ||
      j["version"] != kVersion) {
    raise(ErrorCode::FormatError, "'" + path.string() + "' is not a recognized checkpoint");
  }

  Checkpoint ckpt;
  const Json& jc = j.at("config");
  StudentConfig cfg;
  cfg.vocab_size = jc.at("vocab_size").get<std::size_t>();
  cfg.embed_dim = jc.at("embed_dim").get<std::size_t>();
  cfg.hidden_dim = jc.at("hidden_dim").get<std::size_t>();
  cfg.max_len = jc.at("max_len").get<std::size_t>();
  auto variant = variant_from_string(jc.at("variant").get<std::string>());
  if (!variant) raise(ErrorCode::FormatError, "unknown variant in checkpoint");
  cfg.variant = *variant;
  cfg.lambda_reason = jc.at("lambda_reason").get<double>();
  cfg.tag_threshold = jc.at("tag_threshold").get<double>();
  ckpt.model.config = cfg;

  const Json& params = j.at("params");
  for (const auto& [name, tensor] : ckpt.model.named_parameters()) {
    if (!params.contains(name)) {
      raise(ErrorCode::FormatError, std::string("checkpoint is missing parameter '") + name + "'");
    }
    *tensor = tensor_from_json(params.at(name));
  }

  if (!j.at("adam").is_null()) {
    const Json& ja = j.at("adam");
    AdamConfig ac;
    ac.lr = ja.at("lr").get<double>();
    ac.beta1 = ja.at("beta1").get<double>();
    ac.beta2 = ja.at("beta2").get<double>();
    ac.eps = ja.at("eps").get<double>();
    AdamState adam(ac);
    std::vector<Tensor2D> m, v;
    for (const Json& t : ja.at("m")) m.push_back(tensor_from_json(t));
    for (const Json& t : ja.at("v")) v.push_back(tensor_from_json(t));
    adam.restore(ja.at("step_count").get<std::int64_t>(), std::move(m), std::move(v));
    ckpt.adam = std::move(adam);
  }

  if (!j.at("vocab").is_null()) {
    std::vector<std::string> tokens;
    for (const Json& t : j.at("vocab")) tokens.push_back(t.get<std::string>());
    ckpt.vocab = Vocabulary(std::move(tokens));
  }

  if (!j.at("shuffle_state").is_null()) {
    const Json& jr = j.at("shuffle_state");
    SeededRng::State s;
    s.counter = jr.at("counter").get<std::uint64_t>();
    s.have_spare = jr.at("have_spare").get<bool>();
    s.spare = jr.at("spare").get<double>();
    ckpt.shuffle_state = s;
  }
  ckpt.epochs_done = j.value("epochs_done", std::size_t{0});
  return ckpt;
}

TrainResume as_resume(const Checkpoint& checkpoint) {
  if (!checkpoint.adam || !checkpoint.vocab || !checkpoint.shuffle_state) {
    raise(ErrorCode::ConfigError,
          "checkpoint lacks optimizer, vocabulary, or RNG state; cannot resume from it");
  }
  return {checkpoint.model, *checkpoint.vocab, *checkpoint.adam, *checkpoint.shuffle_state,
          checkpoint.epochs_done};
}

Checkpoint make_checkpoint(const TrainResult& result) {
  Checkpoint ckpt;
  ckpt.model = result.model;
  ckpt.adam = result.adam;
  ckpt.vocab = result.vocab;
  ckpt.shuffle_state = result.shuffle_state;
  ckpt.epochs_done = result.epochs_done;
  return ckpt;
}

} // namespace fixlab
