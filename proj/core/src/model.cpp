#include <cmath>
#include <random>

#include "revmine/classifier.hpp"
#include "revmine/errors.hpp"

namespace revmine {

namespace {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;
using RowVec = Eigen::RowVectorXd;
using MapM = Eigen::Map<Mat>;
using CMapM = Eigen::Map<const Mat>;
using MapV = Eigen::Map<Vec>;
using CMapV = Eigen::Map<const Vec>;

constexpr double kLnEps = 1e-5;

// Flat-vector offsets of every parameter block.
struct Layout {
  size_t V, H, L, NH, F, T_max;
  size_t tok_emb, pos_emb, ln_emb_g, ln_emb_b;
  struct Layer {
    size_t wq, bq, wk, bk, wv, bv, wo, bo;
    size_t ln1_g, ln1_b;
    size_t w1, b1, w2, b2;
    size_t ln2_g, ln2_b;
  };
  std::vector<Layer> layers;
  size_t head_w, head_b, total;

  explicit Layout(const EncoderConfig& c)
      : V(c.vocab_size), H(c.hidden), L(c.layers), NH(c.heads), F(c.ffn),
        T_max(c.max_len) {
    size_t o = 0;
    auto take = [&o](size_t n) { size_t r = o; o += n; return r; };
    tok_emb = take(V * H);
    pos_emb = take(T_max * H);
    ln_emb_g = take(H);
    ln_emb_b = take(H);
    layers.reserve(L);
    for (size_t l = 0; l < L; ++l) {
      Layer ly;
      ly.wq = take(H * H); ly.bq = take(H);
      ly.wk = take(H * H); ly.bk = take(H);
      ly.wv = take(H * H); ly.bv = take(H);
      ly.wo = take(H * H); ly.bo = take(H);
      ly.ln1_g = take(H); ly.ln1_b = take(H);
      ly.w1 = take(H * F); ly.b1 = take(F);
      ly.w2 = take(F * H); ly.b2 = take(H);
      ly.ln2_g = take(H); ly.ln2_b = take(H);
      layers.push_back(ly);
    }
    head_w = take(H * kNumLabels);
    head_b = take(kNumLabels);
    total = o;
  }
};

double gelu(double x) { return 0.5 * x * (1.0 + std::erf(x * M_SQRT1_2)); }
double gelu_grad(double x) {
  return 0.5 * (1.0 + std::erf(x * M_SQRT1_2)) +
         x * std::exp(-0.5 * x * x) / std::sqrt(2.0 * M_PI);
}

struct LayerNormCache {
  Mat xhat;     // (x - mean) * inv_std, per row
  Vec inv_std;  // per row
};

// y = gamma .* xhat + beta, rowwise statistics.
Mat layer_norm(const Mat& x, CMapV gamma, CMapV beta, LayerNormCache& cache) {
  const auto T = x.rows();
  const auto H = x.cols();
  cache.xhat.resize(T, H);
  cache.inv_std.resize(T);
  Mat y(T, H);
  for (Eigen::Index t = 0; t < T; ++t) {
    double mean = x.row(t).mean();
    RowVec centered = x.row(t).array() - mean;
    double var = centered.squaredNorm() / static_cast<double>(H);
    double inv_std = 1.0 / std::sqrt(var + kLnEps);
    cache.inv_std(t) = inv_std;
    cache.xhat.row(t) = centered * inv_std;
    y.row(t) = cache.xhat.row(t).cwiseProduct(gamma.transpose()) + beta.transpose();
  }
  return y;
}

Mat layer_norm_backward(const Mat& dy, CMapV gamma, const LayerNormCache& cache,
                        MapV dgamma, MapV dbeta) {
  const auto T = dy.rows();
  const auto H = dy.cols();
  Mat dx(T, H);
  for (Eigen::Index t = 0; t < T; ++t) {
    RowVec g = dy.row(t).cwiseProduct(gamma.transpose());
    double g_mean = g.mean();
    double gx_mean = g.cwiseProduct(cache.xhat.row(t)).mean();
    dx.row(t) = cache.inv_std(t) *
                (g.array() - g_mean - cache.xhat.row(t).array() * gx_mean);
    dgamma += dy.row(t).cwiseProduct(cache.xhat.row(t)).transpose();
    dbeta += dy.row(t).transpose();
  }
  return dx;
}

struct LayerCache {
  Mat x_in;                 // input to the layer
  Mat q, k, v;              // T x H projections
  std::vector<Mat> attn;    // per head softmax matrices, T x T
  Mat concat;               // heads merged, T x H
  LayerNormCache ln1;
  Mat x1;                   // post-attention normalized
  Mat z1;                   // ffn pre-activation, T x F
  Mat g1;                   // gelu(z1)
  LayerNormCache ln2;
};

struct ForwardCache {
  std::vector<int32_t> ids;  // active token ids
  LayerNormCache ln_emb;
  Mat x_emb;  // normalized embedding output
  std::vector<LayerCache> layers;
  Mat x_final;
};

LabelLogits forward(const EncoderConfig& cfg, const double* p,
                    const EncodedReview& enc, ForwardCache* cache) {
  if (enc.token_ids.size() != cfg.max_len)
    throw ArgumentError("encoding length " + std::to_string(enc.token_ids.size()) +
                        " does not match model max_len " + std::to_string(cfg.max_len));
  if (enc.active_len < 1 || enc.active_len > cfg.max_len)
    throw ArgumentError("invalid active_len " + std::to_string(enc.active_len));

  const Layout lay(cfg);
  const auto T = static_cast<Eigen::Index>(enc.active_len);
  const auto H = static_cast<Eigen::Index>(lay.H);
  const size_t dk = lay.H / lay.NH;
  const double scale = 1.0 / std::sqrt(static_cast<double>(dk));

  CMapM tok_emb(p + lay.tok_emb, lay.V, lay.H);
  CMapM pos_emb(p + lay.pos_emb, lay.T_max, lay.H);

  // Only the active prefix is processed; padded positions carry no signal
  // under a prefix-of-ones mask.
  Mat x(T, H);
  for (Eigen::Index t = 0; t < T; ++t) {
    auto id = enc.token_ids[static_cast<size_t>(t)];
    if (id < 0 || static_cast<size_t>(id) >= lay.V)
      throw ArgumentError("token id " + std::to_string(id) + " outside vocabulary");
    x.row(t) = tok_emb.row(id) + pos_emb.row(t);
  }

  ForwardCache local;
  ForwardCache& fc = cache ? *cache : local;
  fc.ids.assign(enc.token_ids.begin(), enc.token_ids.begin() + T);
  fc.layers.resize(lay.L);

  x = layer_norm(x, CMapV(p + lay.ln_emb_g, H), CMapV(p + lay.ln_emb_b, H), fc.ln_emb);
  fc.x_emb = x;

  for (size_t l = 0; l < lay.L; ++l) {
    const auto& ly = lay.layers[l];
    LayerCache& lc = fc.layers[l];
    lc.x_in = x;

    lc.q = (x * CMapM(p + ly.wq, H, H)).rowwise() + CMapV(p + ly.bq, H).transpose();
    lc.k = (x * CMapM(p + ly.wk, H, H)).rowwise() + CMapV(p + ly.bk, H).transpose();
    lc.v = (x * CMapM(p + ly.wv, H, H)).rowwise() + CMapV(p + ly.bv, H).transpose();

    lc.attn.assign(lay.NH, Mat());
    lc.concat.resize(T, H);
    for (size_t h = 0; h < lay.NH; ++h) {
      auto qh = lc.q.middleCols(static_cast<Eigen::Index>(h * dk), static_cast<Eigen::Index>(dk));
      auto kh = lc.k.middleCols(static_cast<Eigen::Index>(h * dk), static_cast<Eigen::Index>(dk));
      auto vh = lc.v.middleCols(static_cast<Eigen::Index>(h * dk), static_cast<Eigen::Index>(dk));
      Mat scores = qh * kh.transpose() * scale;
      Mat& a = lc.attn[h];
      a.resize(T, T);
      for (Eigen::Index t = 0; t < T; ++t) {
        RowVec row = scores.row(t);
        double m = row.maxCoeff();
        RowVec e = (row.array() - m).exp();
        a.row(t) = e / e.sum();
      }
      lc.concat.middleCols(static_cast<Eigen::Index>(h * dk), static_cast<Eigen::Index>(dk)) = a * vh;
    }
    Mat attn_out =
        (lc.concat * CMapM(p + ly.wo, H, H)).rowwise() + CMapV(p + ly.bo, H).transpose();

    Mat r1 = x + attn_out;
    lc.x1 = layer_norm(r1, CMapV(p + ly.ln1_g, H), CMapV(p + ly.ln1_b, H), lc.ln1);

    lc.z1 = (lc.x1 * CMapM(p + ly.w1, H, static_cast<Eigen::Index>(lay.F))).rowwise() +
            CMapV(p + ly.b1, static_cast<Eigen::Index>(lay.F)).transpose();
    lc.g1 = lc.z1.unaryExpr([](double v) { return gelu(v); });
    Mat ffn_out = (lc.g1 * CMapM(p + ly.w2, static_cast<Eigen::Index>(lay.F), H)).rowwise() +
                  CMapV(p + ly.b2, H).transpose();

    Mat r2 = lc.x1 + ffn_out;
    x = layer_norm(r2, CMapV(p + ly.ln2_g, H), CMapV(p + ly.ln2_b, H), lc.ln2);
  }
  fc.x_final = x;

  CMapM head_w(p + lay.head_w, H, kNumLabels);
  CMapV head_b(p + lay.head_b, kNumLabels);
  RowVec logits = x.row(0) * head_w + head_b.transpose();

  LabelLogits out;
  for (size_t i = 0; i < kNumLabels; ++i) out[i] = logits(static_cast<Eigen::Index>(i));
  return out;
}

// Accumulates parameter gradients for dloss/dlogits into `grad`.
void backward(const EncoderConfig& cfg, const double* p, const ForwardCache& fc,
              const LabelLogits& dlogits, double* g) {
  const Layout lay(cfg);
  const auto T = static_cast<Eigen::Index>(fc.ids.size());
  const auto H = static_cast<Eigen::Index>(lay.H);
  const size_t dk = lay.H / lay.NH;
  const double scale = 1.0 / std::sqrt(static_cast<double>(dk));

  RowVec dl(kNumLabels);
  for (size_t i = 0; i < kNumLabels; ++i) dl(static_cast<Eigen::Index>(i)) = dlogits[i];

  CMapM head_w(p + lay.head_w, H, kNumLabels);
  MapM d_head_w(g + lay.head_w, H, kNumLabels);
  MapV d_head_b(g + lay.head_b, kNumLabels);

  d_head_w += fc.x_final.row(0).transpose() * dl;
  d_head_b += dl.transpose();

  Mat dx = Mat::Zero(T, H);
  dx.row(0) = dl * head_w.transpose();

  for (size_t li = lay.L; li-- > 0;) {
    const auto& ly = lay.layers[li];
    const LayerCache& lc = fc.layers[li];

    // x = LN2(x1 + ffn_out)
    Mat dr2 = layer_norm_backward(dx, CMapV(p + ly.ln2_g, H), lc.ln2,
                                  MapV(g + ly.ln2_g, H), MapV(g + ly.ln2_b, H));
    Mat dx1 = dr2;  // residual branch

    // ffn_out = gelu(x1 w1 + b1) w2 + b2
    const auto F = static_cast<Eigen::Index>(lay.F);
    MapM d_w2(g + ly.w2, F, H);
    MapV d_b2(g + ly.b2, H);
    d_w2 += lc.g1.transpose() * dr2;
    d_b2 += dr2.colwise().sum().transpose();
    Mat dg1 = dr2 * CMapM(p + ly.w2, F, H).transpose();
    Mat dz1 = dg1.cwiseProduct(lc.z1.unaryExpr([](double v) { return gelu_grad(v); }));
    MapM d_w1(g + ly.w1, H, F);
    MapV d_b1(g + ly.b1, F);
    d_w1 += lc.x1.transpose() * dz1;
    d_b1 += dz1.colwise().sum().transpose();
    dx1 += dz1 * CMapM(p + ly.w1, H, F).transpose();

    // x1 = LN1(x_in + attn_out)
    Mat dr1 = layer_norm_backward(dx1, CMapV(p + ly.ln1_g, H), lc.ln1,
                                  MapV(g + ly.ln1_g, H), MapV(g + ly.ln1_b, H));
    dx = dr1;  // residual branch

    // attn_out = concat * wo + bo
    MapM d_wo(g + ly.wo, H, H);
    MapV d_bo(g + ly.bo, H);
    d_wo += lc.concat.transpose() * dr1;
    d_bo += dr1.colwise().sum().transpose();
    Mat d_concat = dr1 * CMapM(p + ly.wo, H, H).transpose();

    Mat dq = Mat::Zero(T, H), dkm = Mat::Zero(T, H), dv = Mat::Zero(T, H);
    for (size_t h = 0; h < lay.NH; ++h) {
      auto col0 = static_cast<Eigen::Index>(h * dk);
      auto ncol = static_cast<Eigen::Index>(dk);
      auto qh = lc.q.middleCols(col0, ncol);
      auto kh = lc.k.middleCols(col0, ncol);
      auto vh = lc.v.middleCols(col0, ncol);
      const Mat& a = lc.attn[h];
      Mat doh = d_concat.middleCols(col0, ncol);

      Mat da = doh * vh.transpose();
      dv.middleCols(col0, ncol) = a.transpose() * doh;
      // softmax backward, rowwise
      Mat ds(T, T);
      for (Eigen::Index t = 0; t < T; ++t) {
        double dot = da.row(t).dot(a.row(t));
        ds.row(t) = (a.row(t).array() * (da.row(t).array() - dot)).matrix();
      }
      dq.middleCols(col0, ncol) = ds * kh * scale;
      dkm.middleCols(col0, ncol) = ds.transpose() * qh * scale;
    }

    auto project_back = [&](const Mat& dproj, size_t w_off, size_t b_off) {
      MapM dw(g + w_off, H, H);
      MapV db(g + b_off, H);
      dw += lc.x_in.transpose() * dproj;
      db += dproj.colwise().sum().transpose();
      dx += dproj * CMapM(p + w_off, H, H).transpose();
    };
    project_back(dq, ly.wq, ly.bq);
    project_back(dkm, ly.wk, ly.bk);
    project_back(dv, ly.wv, ly.bv);
  }

  // embedding layer norm, then scatter into token/position tables
  Mat dx_emb = layer_norm_backward(dx, CMapV(p + lay.ln_emb_g, H), fc.ln_emb,
                                   MapV(g + lay.ln_emb_g, H), MapV(g + lay.ln_emb_b, H));
  MapM d_tok(g + lay.tok_emb, lay.V, lay.H);
  MapM d_pos(g + lay.pos_emb, lay.T_max, lay.H);
  for (Eigen::Index t = 0; t < T; ++t) {
    d_tok.row(fc.ids[static_cast<size_t>(t)]) += dx_emb.row(t);
    d_pos.row(t) += dx_emb.row(t);
  }
}

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

}  // namespace

void EncoderConfig::validate() const {
  if (vocab_size == 0) throw ArgumentError("vocab_size must be positive");
  if (hidden == 0 || layers == 0 || heads == 0 || ffn == 0 || max_len < 2)
    throw ArgumentError("encoder dimensions must be positive (max_len >= 2)");
  if (hidden % heads != 0)
    throw ArgumentError("hidden size must be divisible by head count");
}

void TrainConfig::validate() const {
  if (epochs < 1) throw ArgumentError("epochs must be >= 1");
  if (batch_size < 1) throw ArgumentError("batch_size must be >= 1");
  if (!(learning_rate > 0)) throw ArgumentError("learning_rate must be > 0");
  if (!(threshold > 0 && threshold < 1))
    throw ArgumentError("threshold must be in (0, 1)");
  if (gradient_accumulation < 1)
    throw ArgumentError("gradient_accumulation must be >= 1");
}

Model Model::random_init(const EncoderConfig& cfg, uint64_t seed) {
  cfg.validate();
  const Layout lay(cfg);
  Model m;
  m.cfg_ = cfg;
  m.params_ = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(lay.total));

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> init(0.0, 0.02);
  double* p = m.params_.data();
  auto randomize = [&](size_t off, size_t n) {
    for (size_t i = 0; i < n; ++i) p[off + i] = init(rng);
  };
  auto ones = [&](size_t off, size_t n) {
    for (size_t i = 0; i < n; ++i) p[off + i] = 1.0;
  };
  randomize(lay.tok_emb, lay.V * lay.H);
  randomize(lay.pos_emb, lay.T_max * lay.H);
  ones(lay.ln_emb_g, lay.H);
  for (const auto& ly : lay.layers) {
    randomize(ly.wq, lay.H * lay.H);
    randomize(ly.wk, lay.H * lay.H);
    randomize(ly.wv, lay.H * lay.H);
    randomize(ly.wo, lay.H * lay.H);
    ones(ly.ln1_g, lay.H);
    randomize(ly.w1, lay.H * lay.F);
    randomize(ly.w2, lay.F * lay.H);
    ones(ly.ln2_g, lay.H);
  }
  randomize(lay.head_w, lay.H * kNumLabels);
  return m;
}

size_t Model::head_offset() const { return Layout(cfg_).head_w; }

size_t parameter_count(const EncoderConfig& cfg) { return Layout(cfg).total; }

LabelLogits Model::predict_logits(const EncodedReview& enc) const {
  return forward(cfg_, params_.data(), enc, nullptr);
}

LabelProbs Model::predict_proba(const EncodedReview& enc) const {
  LabelLogits z = predict_logits(enc);
  LabelProbs p;
  for (size_t i = 0; i < kNumLabels; ++i) p[i] = sigmoid(z[i]);
  return p;
}

LabelSet Model::predict_labels(const EncodedReview& enc, double threshold) const {
  if (!(threshold > 0 && threshold < 1))
    throw ArgumentError("threshold must be in (0, 1)");
  LabelProbs p = predict_proba(enc);
  LabelSet out;
  for (size_t i = 0; i < kNumLabels; ++i) out.set(i, p[i] >= threshold);
  return out;
}

double multilabel_loss(const LabelLogits& logits, const LabelSet& target) {
  double sum = 0.0;
  for (size_t i = 0; i < kNumLabels; ++i) {
    double z = logits[i];
    if (!std::isfinite(z)) throw NumericError("non-finite logit in loss");
    double y = target[i] ? 1.0 : 0.0;
    // max(z,0) - z*y + log(1 + exp(-|z|))
    sum += std::max(z, 0.0) - z * y + std::log1p(std::exp(-std::abs(z)));
  }
  return sum / static_cast<double>(kNumLabels);
}

double Model::loss_and_grad(const EncodedReview& enc, const LabelSet& target,
                            Eigen::VectorXd& grad) const {
  if (grad.size() != params_.size()) {
    grad = Eigen::VectorXd::Zero(params_.size());
  }
  ForwardCache fc;
  LabelLogits logits = forward(cfg_, params_.data(), enc, &fc);
  double loss = multilabel_loss(logits, target);

  LabelLogits dlogits;
  for (size_t i = 0; i < kNumLabels; ++i) {
    double y = target[i] ? 1.0 : 0.0;
    dlogits[i] = (sigmoid(logits[i]) - y) / static_cast<double>(kNumLabels);
  }
  backward(cfg_, params_.data(), fc, dlogits, grad.data());
  return loss;
}

double gradient_check(const Model& model, const EncodedReview& enc,
                      const LabelSet& target) {
  Eigen::VectorXd grad = Eigen::VectorXd::Zero(model.params().size());
  model.loss_and_grad(enc, target, grad);

  Model probe = model;
  const double step = 1e-4;
  const size_t off = model.head_offset();
  const size_t n = model.head_param_count();
  double max_rel = 0.0;
  for (size_t i = off; i < off + n; ++i) {
    auto idx = static_cast<Eigen::Index>(i);
    double orig = probe.params()(idx);
    probe.params()(idx) = orig + step;
    double up = multilabel_loss(probe.predict_logits(enc), target);
    probe.params()(idx) = orig - step;
    double down = multilabel_loss(probe.predict_logits(enc), target);
    probe.params()(idx) = orig;
    double numeric = (up - down) / (2.0 * step);
    double analytic = grad(idx);
    double denom = std::max({std::abs(numeric), std::abs(analytic), 1e-8});
    max_rel = std::max(max_rel, std::abs(numeric - analytic) / denom);
  }
  return max_rel;
}

}  // namespace revmine
