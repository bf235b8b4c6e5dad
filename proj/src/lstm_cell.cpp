#include "slf/lstm_cell.hpp"

#include <cmath>

#include "slf/activations.hpp"

namespace slf {

LstmCellParams::LstmCellParams(std::size_t input, std::size_t hidden)
    : input_size(input), hidden_size(hidden),
      w_ii(hidden, input), w_if(hidden, input), w_ig(hidden, input),
      w_io(hidden, input), w_hi(hidden, hidden), w_hf(hidden, hidden),
      w_hg(hidden, hidden), w_ho(hidden, hidden), b_i(hidden, 0.0),
      b_f(hidden, 0.0), b_g(hidden, 0.0), b_o(hidden, 0.0) {}

namespace {

void init_uniform(Array2D& w, std::size_t fan_in, Rng& rng) {
  const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
  for (double& v : w.data) v = rng.uniform(-bound, bound);
}

}  // namespace

void LstmCellParams::init(Rng& rng) {
  for (Array2D* w : {&w_ii, &w_if, &w_ig, &w_io}) init_uniform(*w, input_size, rng);
  for (Array2D* w : {&w_hi, &w_hf, &w_hg, &w_ho}) init_uniform(*w, hidden_size, rng);
  std::fill(b_i.begin(), b_i.end(), 0.0);
  std::fill(b_f.begin(), b_f.end(), 1.0);  // keeps early gradients alive
  std::fill(b_g.begin(), b_g.end(), 0.0);
  std::fill(b_o.begin(), b_o.end(), 0.0);
}

void LstmCellParams::collect(const std::string& prefix, ParamRefs& out) {
  auto mat = [&](const char* name, Array2D& a) {
    out.push_back({prefix + name, a.rows, a.cols, a.data.data()});
  };
  auto vec = [&](const char* name, std::vector<double>& v) {
    out.push_back({prefix + name, v.size(), 1, v.data()});
  };
  mat("W_ii", w_ii); mat("W_if", w_if); mat("W_ig", w_ig); mat("W_io", w_io);
  mat("W_hi", w_hi); mat("W_hf", w_hf); mat("W_hg", w_hg); mat("W_ho", w_ho);
  vec("b_i", b_i); vec("b_f", b_f); vec("b_g", b_g); vec("b_o", b_o);
}

LstmCellState lstm_cell_forward(const LstmCellParams& params,
                                std::span<const double> x,
                                const LstmCellState& prev,
                                LstmCellCache* cache) {
  const std::size_t hidden = params.hidden_size;
  require(x.size() == params.input_size, Status::Shape,
          "lstm_cell_forward: input length mismatch");
  require(prev.h.size() == hidden && prev.c.size() == hidden, Status::Shape,
          "lstm_cell_forward: state size mismatch");

  std::vector<double> gi(params.b_i), gf(params.b_f), gg(params.b_g),
      go(params.b_o);
  matvec_acc(params.w_ii, x.data(), gi.data());
  matvec_acc(params.w_if, x.data(), gf.data());
  matvec_acc(params.w_ig, x.data(), gg.data());
  matvec_acc(params.w_io, x.data(), go.data());
  matvec_acc(params.w_hi, prev.h.data(), gi.data());
  matvec_acc(params.w_hf, prev.h.data(), gf.data());
  matvec_acc(params.w_hg, prev.h.data(), gg.data());
  matvec_acc(params.w_ho, prev.h.data(), go.data());

  LstmCellState next(hidden);
  std::vector<double> tanh_c(hidden);
  for (std::size_t j = 0; j < hidden; ++j) {
    gi[j] = sigmoid(gi[j]);
    gf[j] = sigmoid(gf[j]);
    gg[j] = std::tanh(gg[j]);
    go[j] = sigmoid(go[j]);
    next.c[j] = gf[j] * prev.c[j] + gi[j] * gg[j];
    tanh_c[j] = std::tanh(next.c[j]);
    next.h[j] = go[j] * tanh_c[j];
  }

  if (cache) {
    cache->x.assign(x.begin(), x.end());
    cache->h_prev = prev.h;
    cache->c_prev = prev.c;
    cache->i = std::move(gi);
    cache->f = std::move(gf);
    cache->g = std::move(gg);
    cache->o = std::move(go);
    cache->c_new = next.c;
    cache->tanh_c_new = std::move(tanh_c);
  }
  return next;
}

void lstm_cell_backward(const LstmCellParams& params, const LstmCellCache& cache,
                        std::span<const double> grad_h,
                        std::span<const double> grad_c, LstmCellGrads& grads,
                        std::span<double> grad_x, std::span<double> grad_h_prev,
                        std::span<double> grad_c_prev) {
  const std::size_t hidden = params.hidden_size;
  require(cache.i.size() == hidden && cache.x.size() == params.input_size,
          Status::InvalidArgument,
          "lstm_cell_backward: cache does not match parameters");
  require(grad_h.size() == hidden && grad_c.size() == hidden &&
              grad_x.size() == params.input_size &&
              grad_h_prev.size() == hidden && grad_c_prev.size() == hidden,
          Status::Shape, "lstm_cell_backward: gradient size mismatch");

  std::vector<double> da_i(hidden), da_f(hidden), da_g(hidden), da_o(hidden);
  for (std::size_t j = 0; j < hidden; ++j) {
    const double i = cache.i[j], f = cache.f[j], g = cache.g[j], o = cache.o[j];
    const double tc = cache.tanh_c_new[j];
    const double dc = grad_c[j] + grad_h[j] * o * (1.0 - tc * tc);
    const double d_o = grad_h[j] * tc;
    da_o[j] = d_o * o * (1.0 - o);
    da_f[j] = dc * cache.c_prev[j] * f * (1.0 - f);
    da_i[j] = dc * g * i * (1.0 - i);
    da_g[j] = dc * i * (1.0 - g * g);
    grad_c_prev[j] = dc * f;
  }

  std::fill(grad_x.begin(), grad_x.end(), 0.0);
  std::fill(grad_h_prev.begin(), grad_h_prev.end(), 0.0);
  matvec_t_acc(params.w_ii, da_i.data(), grad_x.data());
  matvec_t_acc(params.w_if, da_f.data(), grad_x.data());
  matvec_t_acc(params.w_ig, da_g.data(), grad_x.data());
  matvec_t_acc(params.w_io, da_o.data(), grad_x.data());
  matvec_t_acc(params.w_hi, da_i.data(), grad_h_prev.data());
  matvec_t_acc(params.w_hf, da_f.data(), grad_h_prev.data());
  matvec_t_acc(params.w_hg, da_g.data(), grad_h_prev.data());
  matvec_t_acc(params.w_ho, da_o.data(), grad_h_prev.data());

  outer_acc(grads.w_ii, da_i.data(), cache.x.data());
  outer_acc(grads.w_if, da_f.data(), cache.x.data());
  outer_acc(grads.w_ig, da_g.data(), cache.x.data());
  outer_acc(grads.w_io, da_o.data(), cache.x.data());
  outer_acc(grads.w_hi, da_i.data(), cache.h_prev.data());
  outer_acc(grads.w_hf, da_f.data(), cache.h_prev.data());
  outer_acc(grads.w_hg, da_g.data(), cache.h_prev.data());
  outer_acc(grads.w_ho, da_o.data(), cache.h_prev.data());
  for (std::size_t j = 0; j < hidden; ++j) {
    grads.b_i[j] += da_i[j];
    grads.b_f[j] += da_f[j];
    grads.b_g[j] += da_g[j];
    grads.b_o[j] += da_o[j];
  }
}

}  // namespace slf
