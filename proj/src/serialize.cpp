#include "ll/serialize.hpp"

#include <cstring>
#include <fstream>

namespace ll::io {

namespace {

constexpr char kB64Alphabet[] =
    "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";

template <typename Scalar>
std::string blob_encode(const Scalar* data, std::size_t count) {
  return base64_encode(reinterpret_cast<const std::uint8_t*>(data), count * sizeof(Scalar));
}

template <typename Scalar>
std::vector<Scalar> blob_decode(const std::string& text, std::size_t expect) {
  const auto bytes = base64_decode(text);
  if (bytes.size() != expect * sizeof(Scalar)) {
    throw DataError("blob length " + std::to_string(bytes.size()) + " != expected " +
                    std::to_string(expect * sizeof(Scalar)));
  }
  std::vector<Scalar> out(expect);
  std::memcpy(out.data(), bytes.data(), bytes.size());
  return out;
}

template <typename Derived>
std::string matrix_blob(const Eigen::MatrixBase<Derived>& m) {
  using Scalar = typename Derived::Scalar;
  std::vector<Scalar> flat;
  flat.reserve(m.size());
  for (int r = 0; r < m.rows(); ++r) {
    for (int c = 0; c < m.cols(); ++c) flat.push_back(m(r, c));
  }
  return blob_encode(flat.data(), flat.size());
}

template <typename Scalar>
Matrix<Scalar> matrix_from_blob(const std::string& text, int rows, int cols) {
  const auto flat = blob_decode<Scalar>(text, std::size_t(rows) * cols);
  Matrix<Scalar> m(rows, cols);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) m(r, c) = flat[std::size_t(r) * cols + c];
  }
  return m;
}

template <typename Scalar>
Vector<Scalar> vector_from_blob(const std::string& text, int n) {
  const auto flat = blob_decode<Scalar>(text, std::size_t(n));
  Vector<Scalar> v(n);
  for (int i = 0; i < n; ++i) v[i] = flat[i];
  return v;
}

Json quantized_tensor_to_json(const qnn::QuantizedTensor& t) {
  Json j;
  j["shape"] = t.shape;
  j["frac_bits"] = t.frac_bits;
  j["encoding"] = "base64";
  j["data"] = blob_encode(t.data.data(), static_cast<std::size_t>(t.data.size()));
  return j;
}

qnn::QuantizedTensor quantized_tensor_from_json(const Json& j) {
  const std::vector<int> shape = j.at("shape").get<std::vector<int>>();
  const int n = qnn::shape_size(shape);
  const auto flat = blob_decode<std::int8_t>(j.at("data").get<std::string>(), std::size_t(n));
  Vector<std::int8_t> data(n);
  for (int i = 0; i < n; ++i) data[i] = flat[i];
  return qnn::QuantizedTensor(shape, std::move(data), j.at("frac_bits").get<int>());
}

template <typename Scalar>
Json mlp_to_json(const Mlp<Scalar>& net) {
  Json layers = Json::array();
  for (const auto& layer : net.layers) {
    Json l;
    l["rows"] = layer.weight.rows();
    l["cols"] = layer.weight.cols();
    l["weight"] = matrix_blob(layer.weight);
    l["bias"] = blob_encode(layer.bias.data(), static_cast<std::size_t>(layer.bias.size()));
    l["relu"] = layer.relu;
    layers.push_back(std::move(l));
  }
  return Json{{"layers", std::move(layers)}};
}

template <typename Scalar>
Mlp<Scalar> mlp_from_json(const Json& j) {
  Mlp<Scalar> net;
  for (const auto& l : j.at("layers")) {
    typename Mlp<Scalar>::Layer layer;
    const int rows = l.at("rows").get<int>();
    const int cols = l.at("cols").get<int>();
    layer.weight = matrix_from_blob<Scalar>(l.at("weight").get<std::string>(), rows, cols);
    layer.bias = vector_from_blob<Scalar>(l.at("bias").get<std::string>(), rows);
    layer.relu = l.at("relu").get<bool>();
    net.layers.push_back(std::move(layer));
  }
  return net;
}

}  // namespace

std::string base64_encode(const std::uint8_t* data, std::size_t len) {
  std::string out;
  out.reserve(((len + 2) / 3) * 4);
  for (std::size_t i = 0; i < len; i += 3) {
    std::uint32_t chunk = std::uint32_t(data[i]) << 16;
    if (i + 1 < len) chunk |= std::uint32_t(data[i + 1]) << 8;
    if (i + 2 < len) chunk |= std::uint32_t(data[i + 2]);
    out.push_back(kB64Alphabet[(chunk >> 18) & 63]);
    out.push_back(kB64Alphabet[(chunk >> 12) & 63]);
    out.push_back(i + 1 < len ? kB64Alphabet[(chunk >> 6) & 63] : '=');
    out.push_back(i + 2 < len ? kB64Alphabet[chunk & 63] : '=');
  }
  return out;
}

std::vector<std::uint8_t> base64_decode(const std::string& text) {
  if (text.size() % 4 != 0) throw DataError("base64 length not a multiple of 4");
  auto value_of = [](char c) -> int {
    if (c >= 'A' && c <= 'Z') return c - 'A';
    if (c >= 'a' && c <= 'z') return c - 'a' + 26;
    if (c >= '0' && c <= '9') return c - '0' + 52;
    if (c == '+') return 62;
    if (c == '/') return 63;
    if (c == '=') return -1;
    throw DataError("invalid base64 character");
  };
  std::vector<std::uint8_t> out;
  out.reserve(text.size() / 4 * 3);
  for (std::size_t i = 0; i < text.size(); i += 4) {
    int v[4];
    for (int k = 0; k < 4; ++k) v[k] = value_of(text[i + k]);
    const std::uint32_t chunk = (std::uint32_t(v[0]) << 18) | (std::uint32_t(v[1]) << 12) |
                                (v[2] < 0 ? 0 : std::uint32_t(v[2]) << 6) |
                                (v[3] < 0 ? 0 : std::uint32_t(v[3]));
    out.push_back(static_cast<std::uint8_t>(chunk >> 16));
    if (v[2] >= 0) out.push_back(static_cast<std::uint8_t>(chunk >> 8));
    if (v[3] >= 0) out.push_back(static_cast<std::uint8_t>(chunk));
  }
  return out;
}

void check_version(const Json& j, const std::string& kind, int supported) {
  if (!j.contains("format_version")) {
    throw VersionError(kind + ": missing format_version field");
  }
  const int version = j.at("format_version").get<int>();
  if (version > supported) {
    throw VersionError(kind + ": format version " + std::to_string(version) +
                       " is newer than supported version " + std::to_string(supported));
  }
  if (j.contains("kind") && j.at("kind").get<std::string>() != kind) {
    throw DataError("expected document kind '" + kind + "', found '" +
                    j.at("kind").get<std::string>() + "'");
  }
}

Json victim_to_json(const qnn::TrainedVictim& victim) {
  Json j;
  j["format_version"] = kVictimFormatVersion;
  j["kind"] = "victim-model";
  j["input_frac_bits"] = victim.quantized.input_frac_bits;
  Json layers = Json::array();
  for (const auto& layer : victim.quantized.layers) {
    Json l;
    l["weight"] = quantized_tensor_to_json(layer.weight);
    l["bias"] = quantized_tensor_to_json(layer.bias);
    l["activation"] = layer.relu ? "relu" : "none";
    l["output_frac_bits"] = layer.output_frac_bits;
    layers.push_back(std::move(l));
  }
  j["layers"] = std::move(layers);
  j["shadow"] = mlp_to_json(victim.shadow);
  j["metadata"] = Json{{"seed", victim.seed},
                       {"train_accuracy", victim.train_accuracy},
                       {"test_accuracy", victim.test_accuracy},
                       {"quantized_test_accuracy", victim.quantized_test_accuracy}};
  return j;
}

qnn::TrainedVictim victim_from_json(const Json& j) {
  check_version(j, "victim-model", kVictimFormatVersion);
  qnn::TrainedVictim victim;
  victim.quantized.input_frac_bits = j.at("input_frac_bits").get<int>();
  for (const auto& l : j.at("layers")) {
    qnn::QuantizedLayer layer;
    layer.weight = quantized_tensor_from_json(l.at("weight"));
    layer.bias = quantized_tensor_from_json(l.at("bias"));
    layer.relu = l.at("activation").get<std::string>() == "relu";
    layer.output_frac_bits = l.at("output_frac_bits").get<int>();
    victim.quantized.layers.push_back(std::move(layer));
  }
  victim.shadow = mlp_from_json<double>(j.at("shadow"));
  const auto& meta = j.at("metadata");
  victim.seed = meta.at("seed").get<std::uint64_t>();
  victim.train_accuracy = meta.at("train_accuracy").get<double>();
  victim.test_accuracy = meta.at("test_accuracy").get<double>();
  victim.quantized_test_accuracy = meta.at("quantized_test_accuracy").get<double>();
  return victim;
}

Json template_model_to_json(const sca::TemplateModel& model) {
  Json j;
  j["format_version"] = kDistinguisherFormatVersion;
  j["kind"] = "distinguisher";
  j["scorer"] = "template";
  j["byte_position"] = model.byte_position;
  j["dim"] = model.dim;
  j["base_epsilon"] = model.base_epsilon;
  Json classes = Json::array();
  const int d = model.dim;
  for (const auto& tmpl : model.classes) {
    Json c;
    c["profiled"] = tmpl.profiled;
    if (tmpl.profiled) {
      c["mean"] = blob_encode(tmpl.mean.data(), static_cast<std::size_t>(d));
      // lower triangle packed row by row, the factor the scorer reloads
      std::vector<double> packed;
      packed.reserve(std::size_t(d) * (d + 1) / 2);
      for (int r = 0; r < d; ++r) {
        for (int k = 0; k <= r; ++k) packed.push_back(tmpl.chol_lower(r, k));
      }
      c["chol_lower"] = blob_encode(packed.data(), packed.size());
      c["reg_epsilon_used"] = tmpl.reg_epsilon_used;
    }
    classes.push_back(std::move(c));
  }
  j["classes"] = std::move(classes);
  return j;
}

sca::TemplateModel template_model_from_json(const Json& j) {
  check_version(j, "distinguisher", kDistinguisherFormatVersion);
  sca::TemplateModel model;
  model.byte_position = j.at("byte_position").get<int>();
  model.dim = j.at("dim").get<int>();
  model.base_epsilon = j.at("base_epsilon").get<double>();
  const int d = model.dim;
  for (const auto& c : j.at("classes")) {
    sca::ClassTemplate tmpl;
    tmpl.profiled = c.at("profiled").get<bool>();
    if (tmpl.profiled) {
      tmpl.mean = vector_from_blob<double>(c.at("mean").get<std::string>(), d);
      const auto packed =
          blob_decode<double>(c.at("chol_lower").get<std::string>(), std::size_t(d) * (d + 1) / 2);
      tmpl.chol_lower = MatrixD::Zero(d, d);
      std::size_t idx = 0;
      for (int r = 0; r < d; ++r) {
        for (int k = 0; k <= r; ++k) tmpl.chol_lower(r, k) = packed[idx++];
      }
      tmpl.log_det_half = tmpl.chol_lower.diagonal().array().log().sum();
      tmpl.reg_epsilon_used = c.at("reg_epsilon_used").get<double>();
    }
    model.classes.push_back(std::move(tmpl));
  }
  return model;
}

Json distinguisher_to_json(const sca::NeuralDistinguisher& d, const std::string& kind) {
  Json j;
  j["format_version"] = kDistinguisherFormatVersion;
  j["kind"] = "distinguisher";
  j["scorer"] = kind;
  j["byte_position"] = d.byte_position;
  j["feature_mean"] =
      blob_encode(d.feature_mean.data(), static_cast<std::size_t>(d.feature_mean.size()));
  j["feature_scale"] =
      blob_encode(d.feature_scale.data(), static_cast<std::size_t>(d.feature_scale.size()));
  j["net"] = mlp_to_json(d.net);
  j["record"] = Json{{"epochs", d.record.epochs},
                     {"batch", d.record.batch},
                     {"learning_rate", d.record.learning_rate},
                     {"seed", d.record.seed},
                     {"final_loss", d.record.final_loss},
                     {"val_accuracy", d.record.val_accuracy}};
  return j;
}

sca::NeuralDistinguisher distinguisher_from_json(const Json& j) {
  check_version(j, "distinguisher", kDistinguisherFormatVersion);
  sca::NeuralDistinguisher d;
  d.byte_position = j.at("byte_position").get<int>();
  d.net = mlp_from_json<float>(j.at("net"));
  const int dim = d.net.input_dim();
  d.feature_mean = vector_from_blob<float>(j.at("feature_mean").get<std::string>(), dim);
  d.feature_scale = vector_from_blob<float>(j.at("feature_scale").get<std::string>(), dim);
  const auto& rec = j.at("record");
  d.record.epochs = rec.at("epochs").get<int>();
  d.record.batch = rec.at("batch").get<int>();
  d.record.learning_rate = rec.at("learning_rate").get<double>();
  d.record.seed = rec.at("seed").get<std::uint64_t>();
  d.record.final_loss = rec.at("final_loss").get<double>();
  d.record.val_accuracy = rec.at("val_accuracy").get<double>();
  return d;
}

Json extractor_to_json(const extract::ProfiledExtractor& ex) {
  Json j;
  j["format_version"] = kExtractorFormatVersion;
  j["kind"] = "extractor-bundle";
  j["config_fingerprint"] = ex.config_fingerprint;
  j["traces_per_query"] = ex.traces_per_query;
  j["provenance"] = Json{{"profiling_seed", ex.provenance.profiling_seed},
                         {"n_profiling", ex.provenance.n_profiling},
                         {"snr_threshold", ex.provenance.snr_threshold},
                         {"scorer", ex.provenance.scorer}};
  Json positions = Json::array();
  for (const auto& pos : ex.positions) {
    Json p;
    p["poi"] = Json{{"threshold", pos.poi.threshold}, {"indices", pos.poi.indices}};
    p["scorer"] = extract::to_string(pos.kind);
    if (pos.kind == extract::ScorerKind::template_attack) {
      p["model"] = template_model_to_json(*pos.templates);
    } else {
      p["model"] = distinguisher_to_json(*pos.net, extract::to_string(pos.kind));
    }
    positions.push_back(std::move(p));
  }
  j["positions"] = std::move(positions);
  return j;
}

extract::ProfiledExtractor extractor_from_json(const Json& j) {
  check_version(j, "extractor-bundle", kExtractorFormatVersion);
  extract::ProfiledExtractor ex;
  ex.config_fingerprint = j.at("config_fingerprint").get<std::uint64_t>();
  ex.traces_per_query = j.at("traces_per_query").get<int>();
  const auto& prov = j.at("provenance");
  ex.provenance.profiling_seed = prov.at("profiling_seed").get<std::uint64_t>();
  ex.provenance.n_profiling = prov.at("n_profiling").get<int>();
  ex.provenance.snr_threshold = prov.at("snr_threshold").get<double>();
  ex.provenance.scorer = prov.at("scorer").get<std::string>();
  for (const auto& p : j.at("positions")) {
    extract::PositionModel pos;
    pos.poi.threshold = p.at("poi").at("threshold").get<double>();
    pos.poi.indices = p.at("poi").at("indices").get<std::vector<int>>();
    pos.kind = extract::scorer_kind_from_string(p.at("scorer").get<std::string>());
    if (pos.kind == extract::ScorerKind::template_attack) {
      pos.templates = template_model_from_json(p.at("model"));
    } else {
      pos.net = distinguisher_from_json(p.at("model"));
    }
    ex.positions.push_back(std::move(pos));
  }
  return ex;
}

Json report_to_json(const advgen::AttackReport& report, const advgen::AttackSpec& spec) {
  Json j;
  j["format_version"] = kReportFormatVersion;
  j["kind"] = "attack-report";
  j["success"] = report.success;
  j["input_rejected"] = report.input_rejected;
  j["true_class"] = report.true_class;
  j["target_class"] = report.target_class;
  j["final_class"] = report.final_class;
  j["distortion_l2"] = report.distortion;
  j["iterations"] = report.iterations;
  j["fd_queries"] = report.fd_queries;
  j["verification_queries"] = report.verification_queries;
  j["oracle_queries"] = report.oracle_queries;
  j["traces_consumed"] = report.traces_consumed;
  j["seed"] = report.seed;
  j["spec"] = Json{{"mode", spec.mode == advgen::AttackSpec::Mode::targeted ? "targeted"
                                                                            : "untargeted"},
                   {"kappa", spec.kappa},
                   {"c", spec.c},
                   {"step_h", spec.step_h},
                   {"learning_rate", spec.learning_rate},
                   {"max_iters", spec.max_iters},
                   {"coords_per_iter", spec.coords_per_iter},
                   {"box", Json::array({spec.box_lo, spec.box_hi})}};
  j["adversarial"] = std::vector<double>(report.adversarial.data(),
                                         report.adversarial.data() + report.adversarial.size());
  Json log = Json::array();
  for (const auto& entry : report.objective_log) {
    log.push_back(Json::array(
        {entry.iteration, entry.min_probe_objective, entry.mean_probe_objective,
         entry.distortion}));
  }
  j["objective_log"] = std::move(log);
  return j;
}

std::string dump_json(const Json& j) { return j.dump(1) + "\n"; }

void write_json(const std::string& path, const Json& j) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw DataError("cannot write " + path);
  out << dump_json(j);
}

Json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path);
  Json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw DataError(path + ": " + e.what());
  }
  return j;
}

}  // namespace ll::io
