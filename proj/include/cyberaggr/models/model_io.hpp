/*
 * Copyright 2026 The cyberaggr Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

// Model container:
//   "AGGRMDL1"                       8-byte magic
//   u64 little-endian                metadata length in bytes
//   UTF-8 JSON metadata
//   u64 little-endian                payload length in doubles
//   little-endian IEEE-754 doubles   parameter payload
//
// The metadata records the model type, input width, blocks,
// hyperparameters, seed, standardizer statistics and embedding provenance,
// plus the payload segment layout.

#include <bit>
#include <cstdint>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "cyberaggr/errors.hpp"
#include "cyberaggr/models/classifier.hpp"

namespace cyberaggr::models {

inline constexpr std::string_view kModelMagic = "AGGRMDL1";

namespace detail {

inline void put_u64(std::ostream& out, std::uint64_t v) {
  char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
  out.write(b, 8);
}

inline std::uint64_t get_u64(std::istream& in) {
  unsigned char b[8];
  if (!in.read(reinterpret_cast<char*>(b), 8)) {
    throw DataError("model file truncated");
  }
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  return v;
}

class Payload {
 public:
  void put(double v) { data_.push_back(v); }
  void put(const Vector& v) { data_.insert(data_.end(), v.data(), v.data() + v.size()); }
  // Row-major.
  void put(const Matrix& m) {
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      for (Eigen::Index c = 0; c < m.cols(); ++c) data_.push_back(m(r, c));
    }
  }
  std::size_t size() const { return data_.size(); }

  void write(std::ostream& out) const {
    put_u64(out, data_.size());
    for (double d : data_) put_u64(out, std::bit_cast<std::uint64_t>(d));
  }

 private:
  std::vector<double> data_;
};

class PayloadReader {
 public:
  explicit PayloadReader(std::istream& in) {
    const std::uint64_t n = get_u64(in);
    if (n > (1ull << 34)) throw DataError("model payload length implausible");
    data_.resize(n);
    for (auto& d : data_) d = std::bit_cast<double>(get_u64(in));
  }

  double get() {
    need(1);
    return data_[pos_++];
  }
  Vector vec(Eigen::Index n) {
    need(n);
    Vector v = Eigen::Map<const Vector>(data_.data() + pos_, n);
    pos_ += n;
    return v;
  }
  Matrix mat(Eigen::Index rows, Eigen::Index cols) {
    need(rows * cols);
    Matrix m(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
      for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = data_[pos_++];
    }
    return m;
  }
  bool exhausted() const { return pos_ == data_.size(); }

 private:
  void need(Eigen::Index n) {
    if (n < 0 || pos_ + static_cast<std::size_t>(n) > data_.size()) {
      throw DataError("model payload shorter than its metadata declares");
    }
  }
  std::vector<double> data_;
  std::size_t pos_ = 0;
};

inline nlohmann::json trainer_json(const NNTrainerConfig& c) {
  return {{"optimizer", "adam"},      {"learning_rate", c.learning_rate},
          {"beta1", c.beta1},         {"beta2", c.beta2},
          {"epsilon", c.epsilon},     {"epochs", c.epochs},
          {"batch_size", c.batch_size},
          {"validation_fraction", c.validation_fraction},
          {"patience", c.patience},   {"seed", c.seed},
          {"hidden_activation", "relu"}, {"init", "he_uniform"}};
}

inline NNTrainerConfig trainer_from_json(const nlohmann::json& j) {
  NNTrainerConfig c;
  c.learning_rate = j.at("learning_rate").get<double>();
  c.beta1 = j.at("beta1").get<double>();
  c.beta2 = j.at("beta2").get<double>();
  c.epsilon = j.at("epsilon").get<double>();
  c.epochs = j.at("epochs").get<int>();
  c.batch_size = j.at("batch_size").get<int>();
  c.validation_fraction = j.at("validation_fraction").get<double>();
  c.patience = j.at("patience").get<int>();
  c.seed = j.at("seed").get<std::uint64_t>();
  return c;
}

}  // namespace detail

inline void save_model(const TrainedModel& m, std::ostream& out) {
  nlohmann::json meta;
  detail::Payload payload;
  const Eigen::Index D = m.input_width();
  meta["format_version"] = 1;
  meta["type"] = std::string(model_kind_name(m.kind));
  meta["input_width"] = D;
  std::vector<std::string> blocks;
  for (auto b : m.blocks) blocks.emplace_back(features::block_name(b));
  meta["blocks"] = blocks;
  meta["standardizer"] = {
      {"mean", std::vector<double>(m.standardizer.mean.data(),
                                   m.standardizer.mean.data() + D)},
      {"sd", std::vector<double>(m.standardizer.sd.data(),
                                 m.standardizer.sd.data() + D)}};
  meta["embedding_provenance"] = m.embedding_provenance;

  if (const auto* lr = std::get_if<LRModel>(&m.params)) {
    meta["hyperparameters"] = {{"C", lr->C}, {"optimizer", "lbfgs"}};
    meta["fit"] = {{"iterations", lr->iterations},
                   {"grad_norm", lr->grad_norm},
                   {"converged", lr->converged}};
    meta["layout"] = {{"weights", {kNumClasses, D}}, {"biases", {kNumClasses}}};
    payload.put(lr->weights);
    payload.put(lr->biases);
  } else if (const auto* svm = std::get_if<SVMModel>(&m.params)) {
    meta["hyperparameters"] = {{"C", svm->C}, {"gamma", svm->gamma},
                               {"kernel", "rbf"}, {"scheme", "one_vs_rest"}};
    nlohmann::json machines = nlohmann::json::array();
    for (const auto& bm : svm->machines) {
      machines.push_back({{"support_vectors", bm.support.rows()},
                          {"bias", bm.bias},
                          {"iterations", bm.iterations},
                          {"kkt_gap", bm.kkt_gap},
                          {"converged", bm.converged}});
      payload.put(bm.support);
      payload.put(bm.coef);
    }
    meta["machines"] = machines;
    meta["warnings"] = svm->warnings;
  } else if (const auto* nn = std::get_if<NNModel>(&m.params)) {
    meta["hyperparameters"] = detail::trainer_json(nn->trainer);
    meta["seed"] = nn->trainer.seed;
    meta["widths"] = nn->widths;
    meta["param_count"] = nn->param_count();
    meta["fit"] = {{"best_epoch", nn->best_epoch},
                   {"train_loss", nn->train_loss},
                   {"val_loss", nn->val_loss}};
    payload.put(nn->params);
  }
  meta["payload_doubles"] = payload.size();

  const std::string js = meta.dump();
  out.write(kModelMagic.data(), static_cast<std::streamsize>(kModelMagic.size()));
  detail::put_u64(out, js.size());
  out.write(js.data(), static_cast<std::streamsize>(js.size()));
  payload.write(out);
  if (!out) throw DataError("failed writing model file");
}

inline TrainedModel load_model(std::istream& in) {
  char magic[8];
  if (!in.read(magic, 8) || std::string_view(magic, 8) != kModelMagic) {
    throw DataError("not a model file (bad magic)");
  }
  const std::uint64_t len = detail::get_u64(in);
  if (len > (1ull << 30)) throw DataError("model metadata length implausible");
  std::string js(len, '\0');
  if (!in.read(js.data(), static_cast<std::streamsize>(len))) {
    throw DataError("model file truncated");
  }
  TrainedModel m;
  try {
    const auto meta = nlohmann::json::parse(js);
    detail::PayloadReader pr(in);
    m.kind = parse_model_kind(meta.at("type").get<std::string>());
    const auto D = meta.at("input_width").get<Eigen::Index>();
    for (const auto& b : meta.at("blocks")) {
      m.blocks.push_back(features::parse_block(b.get<std::string>()));
    }
    const auto mean = meta.at("standardizer").at("mean").get<std::vector<double>>();
    const auto sd = meta.at("standardizer").at("sd").get<std::vector<double>>();
    if (static_cast<Eigen::Index>(mean.size()) != D ||
        static_cast<Eigen::Index>(sd.size()) != D) {
      throw DataError("standardizer width disagrees with input_width");
    }
    m.standardizer.mean = Eigen::Map<const Vector>(mean.data(), D);
    m.standardizer.sd = Eigen::Map<const Vector>(sd.data(), D);
    m.embedding_provenance = meta.value("embedding_provenance", "");

    switch (m.kind) {
      case ModelKind::kLR: {
        LRModel lr;
        lr.C = meta.at("hyperparameters").at("C").get<double>();
        lr.iterations = meta.at("fit").at("iterations").get<int>();
        lr.grad_norm = meta.at("fit").at("grad_norm").get<double>();
        lr.converged = meta.at("fit").at("converged").get<bool>();
        lr.weights = pr.mat(kNumClasses, D);
        lr.biases = pr.vec(kNumClasses);
        m.params = std::move(lr);
        break;
      }
      case ModelKind::kSVM: {
        SVMModel svm;
        svm.C = meta.at("hyperparameters").at("C").get<double>();
        svm.gamma = meta.at("hyperparameters").at("gamma").get<double>();
        svm.input_width = D;
        svm.warnings = meta.value("warnings", std::vector<std::string>{});
        const auto& machines = meta.at("machines");
        if (machines.size() != kNumClasses) throw DataError("SVM needs 3 machines");
        for (int c = 0; c < kNumClasses; ++c) {
          const auto& mj = machines[c];
          auto& bm = svm.machines[c];
          const auto nsv = mj.at("support_vectors").get<Eigen::Index>();
          bm.bias = mj.at("bias").get<double>();
          bm.iterations = mj.at("iterations").get<long>();
          bm.kkt_gap = mj.at("kkt_gap").get<double>();
          bm.converged = mj.at("converged").get<bool>();
          bm.support = pr.mat(nsv, nsv > 0 ? D : 0);
          bm.coef = pr.vec(nsv);
        }
        m.params = std::move(svm);
        break;
      }
      case ModelKind::kNN:
      case ModelKind::kAugHead: {
        NNModel nn;
        nn.widths = meta.at("widths").get<std::vector<int>>();
        if (nn.widths.empty() || nn.widths.front() != D) {
          throw DataError("NN widths disagree with input_width");
        }
        nn.trainer = detail::trainer_from_json(meta.at("hyperparameters"));
        nn.best_epoch = meta.at("fit").at("best_epoch").get<int>();
        nn.train_loss = meta.at("fit").at("train_loss").get<std::vector<double>>();
        nn.val_loss = meta.at("fit").at("val_loss").get<std::vector<double>>();
        nn.params = pr.vec(mlp_param_count(nn.widths));
        m.params = std::move(nn);
        break;
      }
    }
    if (!pr.exhausted()) throw DataError("model payload has trailing values");
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("model metadata invalid: ") + e.what());
  }
  return m;
}

}  // namespace cyberaggr::models
