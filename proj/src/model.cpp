#include "rsgd/model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "rsgd/rng.hpp"

namespace rsgd {

namespace {

constexpr std::uint64_t kStreamInit = 0x90de1'00;

void check_dims(const ModelSpec& spec, const SparseVector& x) {
  if (x.dim != spec.input_dim) {
    throw std::invalid_argument("input dimension " + std::to_string(x.dim) +
                                " does not match model input_dim " +
                                std::to_string(spec.input_dim));
  }
}

void check_lengths(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    throw std::invalid_argument(std::string(what) + ": length mismatch (" +
                                std::to_string(a) + " vs " +
                                std::to_string(b) + ")");
  }
}

}  // namespace

void ModelSpec::validate() const {
  if (input_dim < 1) throw std::invalid_argument("input_dim must be >= 1");
  if (kind == ModelKind::one_hidden && hidden_dim < 1) {
    throw std::invalid_argument("one_hidden requires hidden_dim >= 1");
  }
  if (!(init_scale > 0.0)) {
    throw std::invalid_argument("init_scale must be > 0");
  }
}

std::size_t param_count(const ModelSpec& spec) {
  if (spec.kind == ModelKind::linear) {
    return static_cast<std::size_t>(spec.input_dim) + 1;
  }
  const std::size_t h = spec.hidden_dim, d = spec.input_dim;
  return h * d + h + h + 1;
}

ParamVector zero_params(const ModelSpec& spec) {
  ParamVector p;
  p.values.assign(param_count(spec), 0.0);
  return p;
}

ParamVector init_params(const ModelSpec& spec) {
  spec.validate();
  ParamVector p = zero_params(spec);
  Rng rng = Rng::keyed(spec.seed, kStreamInit);
  for (double& v : p.values) v = spec.init_scale * rng.normal();
  return p;
}

double sigmoid(double score) {
  if (score >= 0.0) {
    return 1.0 / (1.0 + std::exp(-score));
  }
  const double e = std::exp(score);
  return e / (1.0 + e);
}

Prediction forward(const ModelSpec& spec, const ParamVector& params,
                   const SparseVector& x) {
  check_dims(spec, x);
  check_lengths(params.size(), param_count(spec), "params");

  double score = 0.0;
  if (spec.kind == ModelKind::linear) {
    const std::size_t d = spec.input_dim;
    for (std::size_t k = 0; k < x.nnz(); ++k) {
      score += params[x.indices[k]] * x.values[k];
    }
    score += params[d];  // bias
  } else {
    const std::size_t h = spec.hidden_dim, d = spec.input_dim;
    const std::size_t off_c = h * d, off_v = off_c + h, off_b = off_v + h;
    score = params[off_b];
    for (std::size_t j = 0; j < h; ++j) {
      double pre = params[off_c + j];
      const std::size_t row = j * d;
      for (std::size_t k = 0; k < x.nnz(); ++k) {
        pre += params[row + x.indices[k]] * x.values[k];
      }
      score += params[off_v + j] * std::tanh(pre);
    }
  }
  return Prediction{score, sigmoid(score)};
}

ParamVector score_grad(const ModelSpec& spec, const ParamVector& params,
                       const SparseVector& x) {
  check_dims(spec, x);
  check_lengths(params.size(), param_count(spec), "params");

  ParamVector g = zero_params(spec);
  if (spec.kind == ModelKind::linear) {
    const std::size_t d = spec.input_dim;
    for (std::size_t k = 0; k < x.nnz(); ++k) {
      g[x.indices[k]] = x.values[k];
    }
    g[d] = 1.0;
    return g;
  }

  const std::size_t h = spec.hidden_dim, d = spec.input_dim;
  const std::size_t off_c = h * d, off_v = off_c + h, off_b = off_v + h;
  for (std::size_t j = 0; j < h; ++j) {
    double pre = params[off_c + j];
    const std::size_t row = j * d;
    for (std::size_t k = 0; k < x.nnz(); ++k) {
      pre += params[row + x.indices[k]] * x.values[k];
    }
    const double a = std::tanh(pre);
    const double dpre = params[off_v + j] * (1.0 - a * a);
    for (std::size_t k = 0; k < x.nnz(); ++k) {
      g[row + x.indices[k]] = dpre * x.values[k];
    }
    g[off_c + j] = dpre;
    g[off_v + j] = a;
  }
  g[off_b] = 1.0;
  return g;
}

LossGrad ce_grad(const ModelSpec& spec, const ParamVector& params,
                 const SparseVector& x, int y) {
  if (y != 0 && y != 1) throw std::invalid_argument("label must be 0 or 1");
  const Prediction pred = forward(spec, params, x);
  if (!std::isfinite(pred.score)) {
    throw std::runtime_error("non-finite score " +
                             std::to_string(pred.score) +
                             " in cross-entropy loss");
  }

  constexpr double kLogClamp = 1e-12;
  const double p = pred.prob;
  const double loss = y == 1 ? -std::log(std::max(p, kLogClamp))
                             : -std::log(std::max(1.0 - p, kLogClamp));

  LossGrad out;
  out.loss = loss;
  out.grad = score_grad(spec, params, x);
  const double coef = p - static_cast<double>(y);
  for (double& v : out.grad.values) v *= coef;
  return out;
}

double dot(const ParamVector& a, const ParamVector& b) {
  check_lengths(a.size(), b.size(), "dot");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

ParamVector axpy(const ParamVector& base, const ParamVector& direction,
                 double step) {
  check_lengths(base.size(), direction.size(), "axpy");
  ParamVector out = base;
  for (std::size_t i = 0; i < out.size(); ++i) {
    out.values[i] += step * direction[i];
  }
  return out;
}

void axpy_inplace(ParamVector& acc, const ParamVector& direction,
                  double step) {
  check_lengths(acc.size(), direction.size(), "axpy");
  for (std::size_t i = 0; i < acc.size(); ++i) {
    acc.values[i] += step * direction[i];
  }
}

bool all_finite(const ParamVector& p) {
  for (double v : p.values) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

}  // namespace rsgd
