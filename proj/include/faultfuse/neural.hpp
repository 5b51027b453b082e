/*
 * Copyright 2026 The FaultFuse Authors.
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

#ifndef FAULTFUSE_NEURAL_HPP_
#define FAULTFUSE_NEURAL_HPP_

// Suspiciousness models trained from scratch: a one-hidden-layer MLP and a
// stacked GRU over the three feature-family steps. Parameters live in one
// flat vector; named tensors are views into it.

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "faultfuse/features.hpp"

namespace faultfuse::neural {

inline constexpr double kProbEpsilon = 1e-7;

double Sigmoid(double z);

// Clamped binary cross-entropy of one prediction.
double Bce(double p, int y);

// -(1/N) sum [y log p + (1-y) log(1-p)] + l2 * ||params||^2 with p clamped to
// [eps, 1-eps]. Errors: kLabelOutOfRange, kLengthMismatch.
double BceLoss(std::span<const double> predictions, std::span<const int> labels, double l2,
               std::span<const double> params);

struct TensorInfo {
  std::string name;
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::size_t offset = 0;

  std::size_t size() const { return rows * cols; }
};

class Model {
 public:
  virtual ~Model() = default;

  virtual std::string_view type() const = 0;
  // Length of one flattened instance.
  virtual std::size_t input_size() const = 0;

  // Probability in (0, 1). Errors: kNonFiniteInput, kShapeMismatch.
  double Predict(std::span<const double> x) const;

  // Mean clamped BCE over the batch plus l2 * ||theta||^2. When `grad` is
  // given it receives the exact gradient of that value.
  double Loss(const std::vector<std::vector<double>>& xs, std::span<const int> labels, double l2,
              std::vector<double>* grad) const;

  std::vector<double>& parameters() { return theta_; }
  const std::vector<double>& parameters() const { return theta_; }
  const std::vector<TensorInfo>& tensors() const { return tensors_; }
  const TensorInfo& tensor(std::string_view name) const;
  std::span<double> view(std::string_view name);
  std::span<const double> view(std::string_view name) const;

  // Sets the output bias, e.g. to the logit of the class prior.
  void SetOutputBias(double b);

  // Xavier-uniform weight matrices, zero biases, zero readout.
  void InitializeWeights(std::uint64_t seed);

 protected:
  std::size_t AddTensor(std::string name, std::size_t rows, std::size_t cols);
  void Finalize() { theta_.assign(total_, 0.0); }

  virtual double Logit(std::span<const double> x) const = 0;
  // Returns the logit and adds scale * d(Bce)/d(theta) into grad.
  virtual double ForwardBackward(std::span<const double> x, int y, double scale, std::span<double> grad) const = 0;

  // d(Bce(sigmoid(logit), y)) / d(logit); 0 where the clamp is active.
  static double LogitGradient(double logit, int y);

  std::vector<double> theta_;
  std::vector<TensorInfo> tensors_;
  std::size_t total_ = 0;
};

// Tensors: W (hidden x inputs), b (hidden), w_out (1 x hidden), b_out (1).
class Mlp : public Model {
 public:
  explicit Mlp(std::size_t inputs = 3, std::size_t hidden = 128);

  std::string_view type() const override { return "mlp"; }
  std::size_t input_size() const override { return inputs_; }
  std::size_t hidden_size() const { return hidden_; }

  // Hidden activations for one input.
  std::vector<double> Hidden(std::span<const double> x) const;

 protected:
  double Logit(std::span<const double> x) const override;
  double ForwardBackward(std::span<const double> x, int y, double scale, std::span<double> grad) const override;

 private:
  std::size_t inputs_, hidden_;
};

struct GruStep {
  std::vector<double> z, r, candidate, h;
};

// Per layer l: l<l>.W_z (H x (H + d)) acting on [h, x], l<l>.b_z,
// l<l>.W_r (H x d), l<l>.U_r (H x H), l<l>.b_r, l<l>.W_h, l<l>.U_h, l<l>.b_h;
// then w_out (1 x H), b_out. An instance is `steps` consecutive vectors of
// `step_size` values.
class Gru : public Model {
 public:
  Gru(std::size_t step_size, std::size_t hidden = 64, int layers = 2, std::size_t steps = 3);

  std::string_view type() const override { return "rnn"; }
  std::size_t input_size() const override { return step_size_ * steps_; }
  std::size_t step_size() const { return step_size_; }
  std::size_t hidden_size() const { return hidden_; }
  int layers() const { return layers_; }

  // One cell update of `layer`. Errors: kShapeMismatch.
  GruStep Cell(int layer, std::span<const double> x, std::span<const double> h_prev) const;

  // Every layer's steps, layer-major.
  std::vector<std::vector<GruStep>> Trace(std::span<const double> x) const;

 protected:
  double Logit(std::span<const double> x) const override;
  double ForwardBackward(std::span<const double> x, int y, double scale, std::span<double> grad) const override;

 private:
  std::size_t LayerInput(int layer) const { return layer == 0 ? step_size_ : hidden_; }
  std::string Name(int layer, const char* tensor) const;

  std::size_t step_size_, hidden_, steps_;
  int layers_;
};

// ---------------------------------------------------------------- inputs

struct FusedColumn {
  std::size_t column = 0;
  features::Family family = features::Family::kSbfl;
  double weight = 1.0;
};

// Three per-family weight-weighted means (0 for a family with no fused
// column), or every fused value x weight when `concat`.
std::vector<double> MlpInput(std::span<const double> row, const std::vector<FusedColumn>& fused, bool concat);

// Longest per-family fused-column count (at least 1).
std::size_t SequenceStepSize(const std::vector<FusedColumn>& fused);

// SBFL, MBFL, TBFL steps of fused value x weight, each padded to
// SequenceStepSize with the mean of that step's values (0 when empty).
std::vector<double> SequenceInput(std::span<const double> row, const std::vector<FusedColumn>& fused);

// ---------------------------------------------------------------- training

struct TrainConfig {
  int epochs = 100;
  double learning_rate = 0.001;
  double l2 = 0.0;
  int batch_size = 32;  // 0 = full batch
  bool plain_sgd = false;
  int record_every = 10;
  std::uint64_t seed = 0;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double adam_epsilon = 1e-8;
};

struct LossPoint {
  int epoch = 0;
  double loss = 0.0;
};

// Errors: kDegenerateLabels, kLabelOutOfRange, kShapeMismatch.
std::vector<LossPoint> Train(Model& model, const std::vector<std::vector<double>>& xs,
                             std::span<const int> labels, const TrainConfig& config);

// Errors: kUntrainedModel when `model` is null.
std::vector<double> ScoreStatements(const Model* model, const std::vector<std::vector<double>>& xs);

}  // namespace faultfuse::neural

#endif  // FAULTFUSE_NEURAL_HPP_
