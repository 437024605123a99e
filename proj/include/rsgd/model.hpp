#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rsgd/sparse.hpp"

namespace rsgd {

enum class ModelKind { linear, one_hidden };

// Binary classifier producing a pre-sigmoid score. `one_hidden` is a
// single tanh layer followed by a linear readout.
struct ModelSpec {
  ModelKind kind = ModelKind::linear;
  std::uint32_t input_dim = 0;
  std::uint32_t hidden_dim = 0;  // one_hidden only
  double init_scale = 0.01;
  std::uint64_t seed = 0;

  void validate() const;  // throws std::invalid_argument
};

// Flat parameter vector; gradients share this shape.
// linear:     [w (d), b]
// one_hidden: [W (h*d row-major), c (h), v (h), b]
struct ParamVector {
  std::vector<double> values;

  std::size_t size() const { return values.size(); }
  double& operator[](std::size_t i) { return values[i]; }
  double operator[](std::size_t i) const { return values[i]; }
};

std::size_t param_count(const ModelSpec& spec);

ParamVector zero_params(const ModelSpec& spec);

// Gaussian init scaled by init_scale, keyed by spec.seed.
ParamVector init_params(const ModelSpec& spec);

struct Prediction {
  double score = 0.0;  // pre-sigmoid logit
  double prob = 0.5;   // sigmoid(score)
};

double sigmoid(double score);

Prediction forward(const ModelSpec& spec, const ParamVector& params,
                   const SparseVector& x);

// d score / d params.
ParamVector score_grad(const ModelSpec& spec, const ParamVector& params,
                       const SparseVector& x);

struct LossGrad {
  double loss = 0.0;
  ParamVector grad;
};

// Cross-entropy against y in {0,1}; log arguments clamped at 1e-12.
LossGrad ce_grad(const ModelSpec& spec, const ParamVector& params,
                 const SparseVector& x, int y);

// Fixed left-to-right accumulation; lengths must match.
double dot(const ParamVector& a, const ParamVector& b);

// base + step * direction.
ParamVector axpy(const ParamVector& base, const ParamVector& direction,
                 double step);
void axpy_inplace(ParamVector& acc, const ParamVector& direction, double step);

bool all_finite(const ParamVector& p);

}  // namespace rsgd
