#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "rsgd/model.hpp"
#include "rsgd/rng.hpp"
#include "testutil.hpp"

using namespace rsgd;
using testutil::dense_vec;

namespace {

ModelSpec linear_spec(std::uint32_t d, std::uint64_t seed = 1) {
  ModelSpec spec;
  spec.kind = ModelKind::linear;
  spec.input_dim = d;
  spec.seed = seed;
  return spec;
}

ModelSpec hidden_spec(std::uint32_t d, std::uint32_t h,
                      std::uint64_t seed = 1) {
  ModelSpec spec;
  spec.kind = ModelKind::one_hidden;
  spec.input_dim = d;
  spec.hidden_dim = h;
  spec.seed = seed;
  return spec;
}

}  // namespace

TEST_CASE("zero parameters give score 0 and probability one half") {
  for (const ModelSpec& spec : {linear_spec(4), hidden_spec(4, 3)}) {
    const ParamVector p = zero_params(spec);
    const Prediction pred = forward(spec, p, dense_vec({0.3, -1.0, 2.0, 0.1}));
    CHECK(pred.score == 0.0);
    CHECK(pred.prob == 0.5);
  }
}

TEST_CASE("linear score is the dot product plus bias") {
  const ModelSpec spec = linear_spec(3);
  SparseVector x = dense_vec({0.6, 0.8, 0.0});
  ParamVector p = zero_params(spec);
  p.values[0] = 0.6;
  p.values[1] = 0.8;  // w = x, unit vector
  const Prediction pred = forward(spec, p, x);
  CHECK(pred.score == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(pred.prob == doctest::Approx(sigmoid(1.0)).epsilon(1e-12));
}

TEST_CASE("one_hidden forward matches a hand-unrolled dense computation") {
  const ModelSpec spec = hidden_spec(2, 2);
  // [W(2x2), c(2), v(2), b]
  ParamVector p;
  p.values = {0.5, -0.25, 1.5, 0.75, 0.1, -0.2, 2.0, -1.0, 0.3};
  const SparseVector x = dense_vec({0.4, -1.2});

  const double pre0 = 0.5 * 0.4 + (-0.25) * (-1.2) + 0.1;
  const double pre1 = 1.5 * 0.4 + 0.75 * (-1.2) + (-0.2);
  const double expect = 2.0 * std::tanh(pre0) - 1.0 * std::tanh(pre1) + 0.3;

  const Prediction pred = forward(spec, p, x);
  CHECK(pred.score == doctest::Approx(expect).epsilon(1e-14));
}

TEST_CASE("prediction probability is the sigmoid of the score") {
  Rng rng(5);
  const ModelSpec spec = hidden_spec(6, 4, 9);
  const ParamVector p = init_params(spec);
  for (int i = 0; i < 20; ++i) {
    const Prediction pred = forward(spec, p, testutil::random_sparse(rng, 6));
    CHECK(pred.prob ==
          doctest::Approx(1.0 / (1.0 + std::exp(-pred.score))).epsilon(1e-15));
  }
}

TEST_CASE("forward rejects mismatched dimensions naming both") {
  const ModelSpec spec = linear_spec(4);
  const ParamVector p = zero_params(spec);
  CHECK_THROWS_WITH_AS(forward(spec, p, dense_vec({1.0, 2.0})),
                       doctest::Contains("2"), std::invalid_argument);
}

TEST_CASE("cross-entropy at zero parameters is log 2") {
  const ModelSpec spec = linear_spec(3);
  const ParamVector p = zero_params(spec);
  const SparseVector x = dense_vec({1.0, -1.0, 0.5});
  for (int y : {0, 1}) {
    const LossGrad lg = ce_grad(spec, p, x, y);
    CHECK(lg.loss == doctest::Approx(std::log(2.0)).epsilon(1e-12));
  }
}

TEST_CASE("cross-entropy saturates to zero loss and gradient") {
  const ModelSpec spec = linear_spec(1);
  ParamVector p = zero_params(spec);
  p.values[0] = 50.0;  // score 50 for x=1 -> p ~ 1
  const LossGrad lg = ce_grad(spec, p, dense_vec({1.0}), 1);
  CHECK(lg.loss < 1e-20);
  CHECK(testutil::max_abs(lg.grad.values) < 1e-20);
}

TEST_CASE("gradient check: ce_grad matches central finite differences") {
  Rng rng(77);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const bool hidden = trial % 2 == 1;
    const std::uint32_t d = 2 + static_cast<std::uint32_t>(rng.bounded(8));
    const ModelSpec spec =
        hidden ? hidden_spec(d, 1 + static_cast<std::uint32_t>(rng.bounded(4)),
                             trial)
               : linear_spec(d, trial);
    const ParamVector theta =
        testutil::random_params(rng, param_count(spec), 0.8);
    const SparseVector x = testutil::random_sparse(rng, d);
    const int y = static_cast<int>(rng.bounded(2));

    const LossGrad lg = ce_grad(spec, theta, x, y);
    const ParamVector fd = testutil::finite_diff(
        theta,
        [&](const ParamVector& q) { return ce_grad(spec, q, x, y).loss; });
    worst = std::max(worst, testutil::rel_error(lg.grad, fd));
  }
  CHECK(worst < 1e-4);
}

TEST_CASE("axpy identities") {
  Rng rng(8);
  const ParamVector theta = testutil::random_params(rng, 20);
  const ParamVector g = testutil::random_params(rng, 20);

  const ParamVector same = axpy(theta, g, 0.0);
  CHECK(same.values == theta.values);

  const ParamVector back = axpy(axpy(theta, g, -0.3), g, 0.3);
  for (std::size_t i = 0; i < theta.size(); ++i) {
    CHECK(back[i] == doctest::Approx(theta[i]).epsilon(1e-12));
  }

  ParamVector zeros;
  zeros.values.assign(20, 0.0);
  CHECK(dot(axpy(zeros, g, 1.0), g) ==
        doctest::Approx(dot(g, g)).epsilon(1e-15));
}

TEST_CASE("dot basics and accumulation accuracy") {
  ParamVector e0, e1;
  e0.values = {1.0, 0.0, 0.0};
  e1.values = {0.0, 1.0, 0.0};
  CHECK(dot(e0, e1) == 0.0);

  ParamVector ones;
  ones.values.assign(37, 1.0);
  CHECK(dot(ones, ones) == 37.0);

  Rng rng(13);
  for (int trial = 0; trial < 10; ++trial) {
    const ParamVector a = testutil::random_params(rng, 500, 1.0);
    const ParamVector b = testutil::random_params(rng, 500, 1.0);
    const double plain = dot(a, b);
    const double compensated = testutil::kahan_dot(a.values, b.values);
    CHECK(std::fabs(plain - compensated) <=
          1e-10 * std::max(1.0, std::fabs(compensated)));
  }

  ParamVector short_vec;
  short_vec.values = {1.0};
  CHECK_THROWS_AS(dot(e0, short_vec), std::invalid_argument);
  CHECK_THROWS_AS(axpy(e0, short_vec, 1.0), std::invalid_argument);
}

TEST_CASE("operations are deterministic") {
  const ModelSpec spec = hidden_spec(5, 3, 42);
  const ParamVector a = init_params(spec);
  const ParamVector b = init_params(spec);
  CHECK(a.values == b.values);

  Rng rng(3);
  const SparseVector x = testutil::random_sparse(rng, 5);
  const LossGrad g1 = ce_grad(spec, a, x, 1);
  const LossGrad g2 = ce_grad(spec, a, x, 1);
  CHECK(g1.loss == g2.loss);
  CHECK(g1.grad.values == g2.grad.values);
}

TEST_CASE("init_params scales with init_scale and validates the spec") {
  ModelSpec spec = linear_spec(4, 7);
  spec.init_scale = 0.0;
  CHECK_THROWS_AS(init_params(spec), std::invalid_argument);
  spec.init_scale = 1e-3;
  const ParamVector p = init_params(spec);
  CHECK(testutil::max_abs(p.values) < 0.01);

  ModelSpec bad = hidden_spec(4, 0);
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}
