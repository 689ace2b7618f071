// Copyright (2026) the mipdive project
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef MIPDIVE_MODEL_HPP_
#define MIPDIVE_MODEL_HPP_

#include <array>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "json.hpp"
#include "mipdive/graph.hpp"
#include "mipdive/rng.hpp"

namespace mipdive {

// Pre-activations are clamped to +-kSigmoidClamp before the sigmoid so that
// every probability stays strictly inside (0, 1) and the cross entropy stays
// finite. sigma(30) leaves a floor of about 9.36e-14 on a perfect fit.
inline constexpr double kSigmoidClamp = 30.0;

inline double clamped_sigmoid(double z) {
  const double c = std::max(-kSigmoidClamp, std::min(kSigmoidClamp, z));
  return 1.0 / (1.0 + std::exp(-c));
}

// d sigma(clamp(z)) / dz; zero outside the clamp window.
inline double clamped_sigmoid_grad(double z, double value) {
  if (z <= -kSigmoidClamp || z >= kSigmoidClamp) return 0.0;
  return value * (1.0 - value);
}

inline double bce(double a, double b) {
  return -(a * std::log(b) + (1.0 - a) * std::log(1.0 - b));
}

// d BCE(a, b) / db for a fixed target a.
inline double bce_grad(double a, double b) {
  return -(a / b) + (1.0 - a) / (1.0 - b);
}

// Dense row-major matrix; biases are single-column matrices so one visitor
// walks every tensor of the model.
struct Matrix {
  int rows = 0;
  int cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(int r, int c) : rows(r), cols(c), data(static_cast<size_t>(r) * c, 0.0) {}
  double& at(int r, int c) { return data[static_cast<size_t>(r) * cols + c]; }
  double at(int r, int c) const { return data[static_cast<size_t>(r) * cols + c]; }
};

// The five scalar heads, by role.
enum HeadId {
  kFeasThresholdHead = 0,  // coverage where fixings stop being completable
  kLpsatThresholdHead,     // coverage where the sub-LP meets the kappa bar
  kCoverageHead,           // predicted best coverage
  kFeasProbHead,           // probability that the threshold-coverage fixing is feasible
  kLpsatProbHead,          // probability that the coverage fixing meets kappa
  kNumHeads,
};

inline const char* head_name(int h) {
  static const char* names[kNumHeads] = {"feas_threshold", "lpsat_threshold",
                                         "coverage", "feas_prob", "lpsat_prob"};
  return names[h];
}

// Message-passing network over the bipartite graph: shared embeddings, L
// summed cons<->var rounds with ReLU, a per-variable Bernoulli head and five
// pooled scalar heads.
struct ModelParams {
  int hidden = 32;
  int rounds = 2;

  Matrix var_embed_w, var_embed_b;
  Matrix cons_embed_w, cons_embed_b;
  struct Round {
    Matrix cons_self_w, cons_msg_w, cons_b;
    Matrix var_self_w, var_msg_w, var_b;
  };
  std::vector<Round> round;
  Matrix out_w, out_b;
  struct Head {
    Matrix h1_w, h1_b, h2_w, h2_b;
  };
  std::array<Head, kNumHeads> head;

  template <typename Fn>
  void visit(Fn&& fn) {
    fn("var_embed_w", var_embed_w);
    fn("var_embed_b", var_embed_b);
    fn("cons_embed_w", cons_embed_w);
    fn("cons_embed_b", cons_embed_b);
    for (size_t l = 0; l < round.size(); ++l) {
      const std::string p = "round" + std::to_string(l) + "_";
      fn(p + "cons_self_w", round[l].cons_self_w);
      fn(p + "cons_msg_w", round[l].cons_msg_w);
      fn(p + "cons_b", round[l].cons_b);
      fn(p + "var_self_w", round[l].var_self_w);
      fn(p + "var_msg_w", round[l].var_msg_w);
      fn(p + "var_b", round[l].var_b);
    }
    fn("out_w", out_w);
    fn("out_b", out_b);
    for (int h = 0; h < kNumHeads; ++h) {
      const std::string p = std::string("head_") + head_name(h) + "_";
      fn(p + "h1_w", head[h].h1_w);
      fn(p + "h1_b", head[h].h1_b);
      fn(p + "h2_w", head[h].h2_w);
      fn(p + "h2_b", head[h].h2_b);
    }
  }

  template <typename Fn>
  void visit(Fn&& fn) const {
    const_cast<ModelParams*>(this)->visit(
        [&](const std::string& name, Matrix& m) { fn(name, static_cast<const Matrix&>(m)); });
  }
};

inline ModelParams zeros_like_params(int hidden = 32, int rounds = 2) {
  ModelParams p;
  p.hidden = hidden;
  p.rounds = rounds;
  p.var_embed_w = Matrix(hidden, kVarFeatures);
  p.var_embed_b = Matrix(hidden, 1);
  p.cons_embed_w = Matrix(hidden, kConsFeatures);
  p.cons_embed_b = Matrix(hidden, 1);
  p.round.resize(rounds);
  for (auto& r : p.round) {
    r.cons_self_w = Matrix(hidden, hidden);
    r.cons_msg_w = Matrix(hidden, hidden);
    r.cons_b = Matrix(hidden, 1);
    r.var_self_w = Matrix(hidden, hidden);
    r.var_msg_w = Matrix(hidden, hidden);
    r.var_b = Matrix(hidden, 1);
  }
  p.out_w = Matrix(hidden, 1);
  p.out_b = Matrix(1, 1);
  for (auto& h : p.head) {
    h.h1_w = Matrix(hidden, hidden);
    h.h1_b = Matrix(hidden, 1);
    h.h2_w = Matrix(hidden, 1);
    h.h2_b = Matrix(1, 1);
  }
  return p;
}

// Glorot-style uniform weight init, zero biases, deterministic in the seed.
inline ModelParams init_params(uint64_t seed, int hidden = 32, int rounds = 2) {
  ModelParams p = zeros_like_params(hidden, rounds);
  SplitMix64 rng(seed);
  p.visit([&](const std::string& name, Matrix& m) {
    if (name.ends_with("_b")) return;
    const double s = std::sqrt(6.0 / (m.rows + m.cols));
    for (double& v : m.data) v = rng.uniform(-s, s);
  });
  return p;
}

struct ModelOutput {
  std::vector<double> probs;  // aligned with `discrete`
  std::vector<int> discrete;
  std::array<double, kNumHeads> heads{};
};

// Everything the reverse pass needs, captured during the forward pass.
struct ForwardCache {
  // Stage s holds activations after the embedding (s=0) and after each round.
  std::vector<std::vector<double>> var_pre, var_act;    // rounds+1 of nv*H
  std::vector<std::vector<double>> cons_pre, cons_act;  // rounds+1 of nc*H
  std::vector<std::vector<double>> msg_to_cons;         // per round, nc*H
  std::vector<std::vector<double>> msg_to_var;          // per round, nv*H
  std::vector<double> pooled;                           // H
  std::array<std::vector<double>, kNumHeads> head_pre, head_act;  // H each
  std::array<double, kNumHeads> head_z{};
  std::vector<double> out_z;  // per discrete
};

namespace detail {

inline void affine(const Matrix& w, const double* x, const Matrix& b, double* y) {
  for (int r = 0; r < w.rows; ++r) {
    double s = b.data[r];
    const double* row = &w.data[static_cast<size_t>(r) * w.cols];
    for (int c = 0; c < w.cols; ++c) s += row[c] * x[c];
    y[r] = s;
  }
}

inline void add_matvec(const Matrix& w, const double* x, double* y) {
  for (int r = 0; r < w.rows; ++r) {
    double s = 0.0;
    const double* row = &w.data[static_cast<size_t>(r) * w.cols];
    for (int c = 0; c < w.cols; ++c) s += row[c] * x[c];
    y[r] += s;
  }
}

inline void add_matvec_t(const Matrix& w, const double* x, double* y) {
  for (int r = 0; r < w.rows; ++r) {
    const double xr = x[r];
    if (xr == 0.0) continue;
    const double* row = &w.data[static_cast<size_t>(r) * w.cols];
    for (int c = 0; c < w.cols; ++c) y[c] += row[c] * xr;
  }
}

inline void add_outer(Matrix& w, const double* a, const double* b) {
  for (int r = 0; r < w.rows; ++r) {
    const double ar = a[r];
    if (ar == 0.0) continue;
    double* row = &w.data[static_cast<size_t>(r) * w.cols];
    for (int c = 0; c < w.cols; ++c) row[c] += ar * b[c];
  }
}

}  // namespace detail

// Pure function of (params, graph); fills the cache when one is supplied.
inline ModelOutput forward(const ModelParams& p, const BipartiteGraph& g,
                           ForwardCache* cache = nullptr) {
  const int H = p.hidden;
  const int nv = g.num_vars;
  const int nc = g.num_cons;
  const int L = p.rounds;

  ForwardCache local;
  ForwardCache& cc = cache ? *cache : local;
  cc.var_pre.assign(L + 1, std::vector<double>(static_cast<size_t>(nv) * H, 0.0));
  cc.var_act = cc.var_pre;
  cc.cons_pre.assign(L + 1, std::vector<double>(static_cast<size_t>(nc) * H, 0.0));
  cc.cons_act = cc.cons_pre;
  cc.msg_to_cons.assign(L, std::vector<double>(static_cast<size_t>(nc) * H, 0.0));
  cc.msg_to_var.assign(L, std::vector<double>(static_cast<size_t>(nv) * H, 0.0));

  for (int j = 0; j < nv; ++j) {
    double* pre = &cc.var_pre[0][static_cast<size_t>(j) * H];
    detail::affine(p.var_embed_w, g.var_feat[j].data(), p.var_embed_b, pre);
    double* act = &cc.var_act[0][static_cast<size_t>(j) * H];
    for (int k = 0; k < H; ++k) act[k] = std::max(0.0, pre[k]);
  }
  for (int i = 0; i < nc; ++i) {
    double* pre = &cc.cons_pre[0][static_cast<size_t>(i) * H];
    detail::affine(p.cons_embed_w, g.cons_feat[i].data(), p.cons_embed_b, pre);
    double* act = &cc.cons_act[0][static_cast<size_t>(i) * H];
    for (int k = 0; k < H; ++k) act[k] = std::max(0.0, pre[k]);
  }

  for (int l = 0; l < L; ++l) {
    auto& mc = cc.msg_to_cons[l];
    for (const auto& e : g.edges) {
      const double* v = &cc.var_act[l][static_cast<size_t>(e.var) * H];
      double* m = &mc[static_cast<size_t>(e.cons) * H];
      for (int k = 0; k < H; ++k) m[k] += e.coeff * v[k];
    }
    for (int i = 0; i < nc; ++i) {
      double* pre = &cc.cons_pre[l + 1][static_cast<size_t>(i) * H];
      detail::affine(p.round[l].cons_self_w,
                     &cc.cons_act[l][static_cast<size_t>(i) * H],
                     p.round[l].cons_b, pre);
      detail::add_matvec(p.round[l].cons_msg_w, &mc[static_cast<size_t>(i) * H], pre);
      double* act = &cc.cons_act[l + 1][static_cast<size_t>(i) * H];
      for (int k = 0; k < H; ++k) act[k] = std::max(0.0, pre[k]);
    }
    auto& mv = cc.msg_to_var[l];
    for (const auto& e : g.edges) {
      const double* c = &cc.cons_act[l + 1][static_cast<size_t>(e.cons) * H];
      double* m = &mv[static_cast<size_t>(e.var) * H];
      for (int k = 0; k < H; ++k) m[k] += e.coeff * c[k];
    }
    for (int j = 0; j < nv; ++j) {
      double* pre = &cc.var_pre[l + 1][static_cast<size_t>(j) * H];
      detail::affine(p.round[l].var_self_w,
                     &cc.var_act[l][static_cast<size_t>(j) * H],
                     p.round[l].var_b, pre);
      detail::add_matvec(p.round[l].var_msg_w, &mv[static_cast<size_t>(j) * H], pre);
      double* act = &cc.var_act[l + 1][static_cast<size_t>(j) * H];
      for (int k = 0; k < H; ++k) act[k] = std::max(0.0, pre[k]);
    }
  }

  cc.pooled.assign(H, 0.0);
  for (int j = 0; j < nv; ++j) {
    const double* v = &cc.var_act[L][static_cast<size_t>(j) * H];
    for (int k = 0; k < H; ++k) cc.pooled[k] += v[k];
  }
  for (int k = 0; k < H; ++k) cc.pooled[k] /= std::max(1, nv);

  ModelOutput out;
  out.discrete = g.discrete;
  out.probs.resize(g.discrete.size());
  cc.out_z.resize(g.discrete.size());
  for (size_t d = 0; d < g.discrete.size(); ++d) {
    const double* v = &cc.var_act[L][static_cast<size_t>(g.discrete[d]) * H];
    double z = p.out_b.data[0];
    for (int k = 0; k < H; ++k) z += p.out_w.data[k] * v[k];
    cc.out_z[d] = z;
    out.probs[d] = clamped_sigmoid(z);
  }

  for (int h = 0; h < kNumHeads; ++h) {
    cc.head_pre[h].assign(H, 0.0);
    cc.head_act[h].assign(H, 0.0);
    detail::affine(p.head[h].h1_w, cc.pooled.data(), p.head[h].h1_b,
                   cc.head_pre[h].data());
    for (int k = 0; k < H; ++k)
      cc.head_act[h][k] = std::max(0.0, cc.head_pre[h][k]);
    double z = p.head[h].h2_b.data[0];
    for (int k = 0; k < H; ++k) z += p.head[h].h2_w.data[k] * cc.head_act[h][k];
    cc.head_z[h] = z;
    out.heads[h] = clamped_sigmoid(z);
  }
  return out;
}

// Gradient of a loss with respect to the model outputs; the adjoints for
// outputs a loss does not touch are simply zero.
struct OutputGrad {
  std::vector<double> dprobs;  // aligned with ModelOutput::probs, may be empty
  std::array<double, kNumHeads> dheads{};
};

// Exact reverse pass mirroring the forward computation.
inline ModelParams backward(const ModelParams& p, const BipartiteGraph& g,
                            const ForwardCache& cc, const ModelOutput& out,
                            const OutputGrad& og) {
  const int H = p.hidden;
  const int nv = g.num_vars;
  const int nc = g.num_cons;
  const int L = p.rounds;
  ModelParams grad = zeros_like_params(H, L);

  std::vector<double> dvar(static_cast<size_t>(nv) * H, 0.0);
  std::vector<double> dpooled(H, 0.0);

  for (int h = 0; h < kNumHeads; ++h) {
    const double dz = og.dheads[h] * clamped_sigmoid_grad(cc.head_z[h], out.heads[h]);
    if (dz == 0.0) continue;
    for (int k = 0; k < H; ++k) {
      grad.head[h].h2_w.data[k] += dz * cc.head_act[h][k];
    }
    grad.head[h].h2_b.data[0] += dz;
    std::vector<double> dh1(H, 0.0);
    for (int k = 0; k < H; ++k) {
      const double da = dz * p.head[h].h2_w.data[k];
      dh1[k] = cc.head_pre[h][k] > 0.0 ? da : 0.0;
    }
    detail::add_outer(grad.head[h].h1_w, dh1.data(), cc.pooled.data());
    for (int k = 0; k < H; ++k) grad.head[h].h1_b.data[k] += dh1[k];
    detail::add_matvec_t(p.head[h].h1_w, dh1.data(), dpooled.data());
  }

  for (int j = 0; j < nv; ++j) {
    double* dv = &dvar[static_cast<size_t>(j) * H];
    for (int k = 0; k < H; ++k) dv[k] += dpooled[k] / std::max(1, nv);
  }

  if (!og.dprobs.empty()) {
    for (size_t d = 0; d < g.discrete.size(); ++d) {
      const double dz =
          og.dprobs[d] * clamped_sigmoid_grad(cc.out_z[d], out.probs[d]);
      if (dz == 0.0) continue;
      const double* v = &cc.var_act[L][static_cast<size_t>(g.discrete[d]) * H];
      for (int k = 0; k < H; ++k) grad.out_w.data[k] += dz * v[k];
      grad.out_b.data[0] += dz;
      double* dv = &dvar[static_cast<size_t>(g.discrete[d]) * H];
      for (int k = 0; k < H; ++k) dv[k] += dz * p.out_w.data[k];
    }
  }

  // dcons carries the adjoint of cons_act[l+1]; at the top it is zero since
  // cons_act[L] only feeds the round-(L-1) var update handled inside the loop.
  std::vector<double> dcons(static_cast<size_t>(nc) * H, 0.0);
  for (int l = L - 1; l >= 0; --l) {
    // Var update: pre = var_self_w * v_l + var_msg_w * msg_v + b.
    std::vector<double> dvar_prev(static_cast<size_t>(nv) * H, 0.0);
    std::vector<double> dmsg_v(static_cast<size_t>(nv) * H, 0.0);
    for (int j = 0; j < nv; ++j) {
      const double* pre = &cc.var_pre[l + 1][static_cast<size_t>(j) * H];
      const double* dv = &dvar[static_cast<size_t>(j) * H];
      std::vector<double> dpre(H);
      for (int k = 0; k < H; ++k) dpre[k] = pre[k] > 0.0 ? dv[k] : 0.0;
      detail::add_outer(grad.round[l].var_self_w, dpre.data(),
                        &cc.var_act[l][static_cast<size_t>(j) * H]);
      detail::add_outer(grad.round[l].var_msg_w, dpre.data(),
                        &cc.msg_to_var[l][static_cast<size_t>(j) * H]);
      for (int k = 0; k < H; ++k) grad.round[l].var_b.data[k] += dpre[k];
      detail::add_matvec_t(p.round[l].var_self_w, dpre.data(),
                           &dvar_prev[static_cast<size_t>(j) * H]);
      detail::add_matvec_t(p.round[l].var_msg_w, dpre.data(),
                           &dmsg_v[static_cast<size_t>(j) * H]);
    }
    for (const auto& e : g.edges) {
      const double* dm = &dmsg_v[static_cast<size_t>(e.var) * H];
      double* dc = &dcons[static_cast<size_t>(e.cons) * H];
      for (int k = 0; k < H; ++k) dc[k] += e.coeff * dm[k];
    }
    // Cons update: pre = cons_self_w * c_l + cons_msg_w * msg_c + b.
    std::vector<double> dcons_prev(static_cast<size_t>(nc) * H, 0.0);
    std::vector<double> dmsg_c(static_cast<size_t>(nc) * H, 0.0);
    for (int i = 0; i < nc; ++i) {
      const double* pre = &cc.cons_pre[l + 1][static_cast<size_t>(i) * H];
      const double* dc = &dcons[static_cast<size_t>(i) * H];
      std::vector<double> dpre(H);
      for (int k = 0; k < H; ++k) dpre[k] = pre[k] > 0.0 ? dc[k] : 0.0;
      detail::add_outer(grad.round[l].cons_self_w, dpre.data(),
                        &cc.cons_act[l][static_cast<size_t>(i) * H]);
      detail::add_outer(grad.round[l].cons_msg_w, dpre.data(),
                        &cc.msg_to_cons[l][static_cast<size_t>(i) * H]);
      for (int k = 0; k < H; ++k) grad.round[l].cons_b.data[k] += dpre[k];
      detail::add_matvec_t(p.round[l].cons_self_w, dpre.data(),
                           &dcons_prev[static_cast<size_t>(i) * H]);
      detail::add_matvec_t(p.round[l].cons_msg_w, dpre.data(),
                           &dmsg_c[static_cast<size_t>(i) * H]);
    }
    for (const auto& e : g.edges) {
      const double* dm = &dmsg_c[static_cast<size_t>(e.cons) * H];
      double* dv = &dvar_prev[static_cast<size_t>(e.var) * H];
      for (int k = 0; k < H; ++k) dv[k] += e.coeff * dm[k];
    }
    dvar.swap(dvar_prev);
    dcons.swap(dcons_prev);
  }

  for (int j = 0; j < nv; ++j) {
    const double* pre = &cc.var_pre[0][static_cast<size_t>(j) * H];
    const double* dv = &dvar[static_cast<size_t>(j) * H];
    std::vector<double> dpre(H);
    for (int k = 0; k < H; ++k) dpre[k] = pre[k] > 0.0 ? dv[k] : 0.0;
    detail::add_outer(grad.var_embed_w, dpre.data(), g.var_feat[j].data());
    for (int k = 0; k < H; ++k) grad.var_embed_b.data[k] += dpre[k];
  }
  for (int i = 0; i < nc; ++i) {
    const double* pre = &cc.cons_pre[0][static_cast<size_t>(i) * H];
    const double* dc = &dcons[static_cast<size_t>(i) * H];
    std::vector<double> dpre(H);
    for (int k = 0; k < H; ++k) dpre[k] = pre[k] > 0.0 ? dc[k] : 0.0;
    detail::add_outer(grad.cons_embed_w, dpre.data(), g.cons_feat[i].data());
    for (int k = 0; k < H; ++k) grad.cons_embed_b.data[k] += dpre[k];
  }
  return grad;
}

// Mean BCE of the per-variable probabilities against a binary target over
// the masked discrete indices.
inline double loss_nd(const ModelOutput& out, const Assignment& target,
                      const std::vector<int>& mask) {
  if (mask.empty()) throw std::invalid_argument("loss_nd: empty mask");
  double total = 0.0;
  for (int var : mask) {
    const auto it = std::find(out.discrete.begin(), out.discrete.end(), var);
    if (it == out.discrete.end())
      throw std::invalid_argument("loss_nd: mask index is not discrete");
    const double a = target.values[var];
    if (a != 0.0 && a != 1.0)
      throw std::invalid_argument("loss_nd: target is not binary on the mask");
    total += bce(a, out.probs[it - out.discrete.begin()]);
  }
  return total / static_cast<double>(mask.size());
}

inline OutputGrad loss_nd_grad(const ModelOutput& out, const Assignment& target,
                               const std::vector<int>& mask) {
  OutputGrad og;
  og.dprobs.assign(out.probs.size(), 0.0);
  for (int var : mask) {
    const auto it = std::find(out.discrete.begin(), out.discrete.end(), var);
    const size_t d = it - out.discrete.begin();
    og.dprobs[d] +=
        bce_grad(target.values[var], out.probs[d]) / static_cast<double>(mask.size());
  }
  return og;
}

// Classical momentum: v <- mu v + g, p <- p - lr v.
inline void sgd_step_span(std::vector<double>& p, const std::vector<double>& g,
                          std::vector<double>& vel, double lr, double momentum) {
  for (size_t i = 0; i < p.size(); ++i) {
    vel[i] = momentum * vel[i] + g[i];
    p[i] -= lr * vel[i];
  }
}

inline void sgd_step(ModelParams& params, const ModelParams& grads,
                     ModelParams& velocity, double lr, double momentum) {
  auto* gp = const_cast<ModelParams*>(&grads);
  std::vector<Matrix*> gm, vm;
  gp->visit([&](const std::string&, Matrix& m) { gm.push_back(&m); });
  velocity.visit([&](const std::string&, Matrix& m) { vm.push_back(&m); });
  size_t i = 0;
  params.visit([&](const std::string&, Matrix& m) {
    sgd_step_span(m.data, gm[i]->data, vm[i]->data, lr, momentum);
    ++i;
  });
}

// Canonical JSON checkpoint with shape headers; lossless for doubles.
inline std::string write_params_json(const ModelParams& p) {
  nlohmann::ordered_json j;
  j["hidden"] = p.hidden;
  j["rounds"] = p.rounds;
  auto& tensors = j["tensors"] = nlohmann::ordered_json::object();
  p.visit([&](const std::string& name, const Matrix& m) {
    nlohmann::ordered_json t;
    t["shape"] = {m.rows, m.cols};
    t["data"] = m.data;
    tensors[name] = std::move(t);
  });
  return j.dump() + "\n";
}

inline ModelParams read_params_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  ModelParams p = zeros_like_params(j.at("hidden").get<int>(),
                                    j.at("rounds").get<int>());
  const auto& tensors = j.at("tensors");
  p.visit([&](const std::string& name, Matrix& m) {
    const auto& t = tensors.at(name);
    const auto shape = t.at("shape");
    if (shape[0].get<int>() != m.rows || shape[1].get<int>() != m.cols)
      throw std::runtime_error("checkpoint shape mismatch for " + name);
    m.data = t.at("data").get<std::vector<double>>();
  });
  return p;
}

}  // namespace mipdive

#endif  // MIPDIVE_MODEL_HPP_
