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

#include <cmath>

#include "faultfuse/error.hpp"
#include "faultfuse/kernels.hpp"
#include "faultfuse/neural.hpp"

namespace faultfuse::neural {
namespace {

constexpr const char* kModule = "neural";

}  // namespace

Gru::Gru(std::size_t step_size, std::size_t hidden, int layers, std::size_t steps)
    : step_size_(step_size), hidden_(hidden), steps_(steps), layers_(layers) {
  if (step_size == 0 || hidden == 0 || layers <= 0 || steps == 0) {
    throw Error(ErrorCode::kShapeMismatch, kModule, "empty GRU dimension");
  }
  for (int l = 0; l < layers; ++l) {
    const std::size_t d = LayerInput(l);
    AddTensor(Name(l, "W_z"), hidden, hidden + d);
    AddTensor(Name(l, "b_z"), hidden, 1);
    AddTensor(Name(l, "W_r"), hidden, d);
    AddTensor(Name(l, "U_r"), hidden, hidden);
    AddTensor(Name(l, "b_r"), hidden, 1);
    AddTensor(Name(l, "W_h"), hidden, d);
    AddTensor(Name(l, "U_h"), hidden, hidden);
    AddTensor(Name(l, "b_h"), hidden, 1);
  }
  AddTensor("w_out", 1, hidden);
  AddTensor("b_out", 1, 1);
  Finalize();
}

std::string Gru::Name(int layer, const char* tensor) const { return "l" + std::to_string(layer) + "." + tensor; }

GruStep Gru::Cell(int layer, std::span<const double> x, std::span<const double> h_prev) const {
  const std::size_t d = LayerInput(layer), H = hidden_;
  if (layer < 0 || layer >= layers_ || x.size() != d || h_prev.size() != H) {
    throw Error(ErrorCode::kShapeMismatch, kModule, "GRU cell input has the wrong shape");
  }
  GruStep s;
  std::vector<double> hx(h_prev.begin(), h_prev.end());
  hx.insert(hx.end(), x.begin(), x.end());

  const auto bz = view(Name(layer, "b_z"));
  s.z.assign(bz.begin(), bz.end());
  kernels::Gemv(view(Name(layer, "W_z")), H, H + d, hx, s.z);
  for (double& v : s.z) v = Sigmoid(v);

  const auto br = view(Name(layer, "b_r"));
  s.r.assign(br.begin(), br.end());
  kernels::Gemv(view(Name(layer, "W_r")), H, d, x, s.r);
  kernels::Gemv(view(Name(layer, "U_r")), H, H, h_prev, s.r);
  for (double& v : s.r) v = Sigmoid(v);

  std::vector<double> rh(H);
  for (std::size_t i = 0; i < H; ++i) rh[i] = s.r[i] * h_prev[i];
  const auto bh = view(Name(layer, "b_h"));
  s.candidate.assign(bh.begin(), bh.end());
  kernels::Gemv(view(Name(layer, "W_h")), H, d, x, s.candidate);
  kernels::Gemv(view(Name(layer, "U_h")), H, H, rh, s.candidate);
  for (double& v : s.candidate) v = std::tanh(v);

  s.h.resize(H);
  for (std::size_t i = 0; i < H; ++i) s.h[i] = (1.0 - s.z[i]) * h_prev[i] + s.z[i] * s.candidate[i];
  return s;
}

std::vector<std::vector<GruStep>> Gru::Trace(std::span<const double> x) const {
  if (x.size() != input_size()) throw Error(ErrorCode::kShapeMismatch, kModule, "sequence has the wrong length");
  std::vector<std::vector<GruStep>> trace(static_cast<std::size_t>(layers_));
  for (int l = 0; l < layers_; ++l) {
    std::vector<double> h(hidden_, 0.0);
    for (std::size_t t = 0; t < steps_; ++t) {
      std::span<const double> in = l == 0 ? x.subspan(t * step_size_, step_size_)
                                          : std::span<const double>(trace[l - 1][t].h);
      trace[l].push_back(Cell(l, in, h));
      h = trace[l].back().h;
    }
  }
  return trace;
}

double Gru::Logit(std::span<const double> x) const {
  const auto trace = Trace(x);
  return kernels::Dot(view("w_out"), trace.back().back().h) + view("b_out")[0];
}

double Gru::ForwardBackward(std::span<const double> x, int y, double scale, std::span<double> grad) const {
  const auto trace = Trace(x);
  const auto w_out = view("w_out");
  const std::vector<double>& h_last = trace.back().back().h;
  const double logit = kernels::Dot(w_out, h_last) + view("b_out")[0];
  const double dlogit = scale * LogitGradient(logit, y);
  if (dlogit == 0.0) return logit;

  auto g = [&](const std::string& name) {
    const TensorInfo& t = tensor(name);
    return grad.subspan(t.offset, t.size());
  };
  kernels::Axpy(dlogit, h_last, g("w_out"));
  g("b_out")[0] += dlogit;

  const std::size_t H = hidden_;
  // Gradient arriving at each step's output h from above.
  std::vector<std::vector<double>> dh_out(steps_, std::vector<double>(H, 0.0));
  for (std::size_t i = 0; i < H; ++i) dh_out.back()[i] = dlogit * w_out[i];

  const std::vector<double> zeros(H, 0.0);
  for (int l = layers_ - 1; l >= 0; --l) {
    const std::size_t d = LayerInput(l);
    const auto Wz = view(Name(l, "W_z")), Wr = view(Name(l, "W_r")), Ur = view(Name(l, "U_r"));
    const auto Wh = view(Name(l, "W_h")), Uh = view(Name(l, "U_h"));
    auto gWz = g(Name(l, "W_z")), gbz = g(Name(l, "b_z"));
    auto gWr = g(Name(l, "W_r")), gUr = g(Name(l, "U_r")), gbr = g(Name(l, "b_r"));
    auto gWh = g(Name(l, "W_h")), gUh = g(Name(l, "U_h")), gbh = g(Name(l, "b_h"));

    std::vector<std::vector<double>> dx_steps(steps_, std::vector<double>(d, 0.0));
    std::vector<double> dh_next(H, 0.0), dh(H), dz(H), dah(H), dar(H), daz(H), drh(H), rh(H), hx(H + d),
        dhx(H + d);
    for (std::size_t t = steps_; t-- > 0;) {
      const GruStep& s = trace[l][t];
      const std::vector<double>& h_prev = t > 0 ? trace[l][t - 1].h : zeros;
      std::span<const double> in = l == 0 ? x.subspan(t * step_size_, step_size_)
                                          : std::span<const double>(trace[l - 1][t].h);
      std::vector<double>& dx = dx_steps[t];
      std::vector<double> dhp(H);
      for (std::size_t i = 0; i < H; ++i) {
        dh[i] = dh_out[t][i] + dh_next[i];
        dz[i] = dh[i] * (s.candidate[i] - h_prev[i]);
        dhp[i] = dh[i] * (1.0 - s.z[i]);
        dah[i] = dh[i] * s.z[i] * (1.0 - s.candidate[i] * s.candidate[i]);
        rh[i] = s.r[i] * h_prev[i];
      }
      // candidate
      kernels::Ger(1.0, dah, in, gWh);
      kernels::Ger(1.0, dah, rh, gUh);
      kernels::Axpy(1.0, dah, gbh);
      kernels::GemvT(Wh, H, d, dah, dx);
      std::fill(drh.begin(), drh.end(), 0.0);
      kernels::GemvT(Uh, H, H, dah, drh);
      for (std::size_t i = 0; i < H; ++i) {
        dhp[i] += drh[i] * s.r[i];
        dar[i] = drh[i] * h_prev[i] * s.r[i] * (1.0 - s.r[i]);
        daz[i] = dz[i] * s.z[i] * (1.0 - s.z[i]);
      }
      // reset gate
      kernels::Ger(1.0, dar, in, gWr);
      kernels::Ger(1.0, dar, h_prev, gUr);
      kernels::Axpy(1.0, dar, gbr);
      kernels::GemvT(Wr, H, d, dar, dx);
      kernels::GemvT(Ur, H, H, dar, dhp);
      // update gate over [h_prev, x]
      std::copy(h_prev.begin(), h_prev.end(), hx.begin());
      std::copy(in.begin(), in.end(), hx.begin() + static_cast<std::ptrdiff_t>(H));
      kernels::Ger(1.0, daz, hx, gWz);
      kernels::Axpy(1.0, daz, gbz);
      std::fill(dhx.begin(), dhx.end(), 0.0);
      kernels::GemvT(Wz, H, H + d, daz, dhx);
      for (std::size_t i = 0; i < H; ++i) dhp[i] += dhx[i];
      for (std::size_t j = 0; j < d; ++j) dx[j] += dhx[H + j];
      dh_next = std::move(dhp);
    }
    if (l > 0) dh_out = std::move(dx_steps);
  }
  return logit;
}

}  // namespace faultfuse::neural
