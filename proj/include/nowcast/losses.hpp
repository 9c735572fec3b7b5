#pragma once

// Training objectives over probability tensors: positively-weighted binary
// cross-entropy, soft IoU, Dice, Focal and the Dice+Focal mix. Every loss
// comes with its analytic gradient w.r.t. the probabilities; tests check
// those against central finite differences.

#include <cmath>
#include <string>

#include "nowcast/common.hpp"
#include "nowcast/tensor.hpp"

namespace nowcast::data {
struct Dataset;
}

namespace nowcast::losses {

inline constexpr double kProbClamp = 1e-7;

enum class LossKind { bce, soft_iou, dice, focal, dice_focal };

inline std::string to_string(LossKind k) {
  switch (k) {
    case LossKind::bce: return "bce";
    case LossKind::soft_iou: return "soft_iou";
    case LossKind::dice: return "dice";
    case LossKind::focal: return "focal";
    case LossKind::dice_focal: return "dice_focal";
  }
  return "?";
}

inline LossKind loss_kind_from_string(const std::string& s) {
  if (s == "bce") return LossKind::bce;
  if (s == "soft_iou") return LossKind::soft_iou;
  if (s == "dice") return LossKind::dice;
  if (s == "focal") return LossKind::focal;
  if (s == "dice_focal") return LossKind::dice_focal;
  throw ConfigError("unknown loss kind: " + s);
}

struct LossConfig {
  LossKind kind = LossKind::bce;
  double pos_weight = 1.0;   // positive-class multiplier in bce
  double focal_gamma = 2.0;  // focusing exponent
  double focal_alpha = 0.25; // positive-class balance in focal
  double mix_weight = 0.5;   // weight of the Dice term in dice_focal
  double smooth = 1.0;       // Dice/IoU smoothing epsilon

  void validate() const {
    config_check(pos_weight > 0.0, "loss: pos_weight must be > 0");
    config_check(focal_gamma >= 0.0, "loss: focal_gamma must be >= 0");
    config_check(focal_alpha >= 0.0 && focal_alpha <= 1.0, "loss: focal_alpha in [0,1]");
    config_check(mix_weight >= 0.0 && mix_weight <= 1.0, "loss: mix_weight in [0,1]");
    config_check(smooth > 0.0, "loss: smooth must be > 0");
  }
};

namespace detail {
template <typename S>
void check_pair(const Tensor<S>& probs, const Tensor<S>& target) {
  data_check(probs.same_shape(target), "loss: probs/target shape mismatch");
  data_check(probs.size() > 0, "loss: empty tensors");
}

inline double clampp(double p) {
  return p < kProbClamp ? kProbClamp : (p > 1.0 - kProbClamp ? 1.0 - kProbClamp : p);
}
}  // namespace detail

// ---------------------------------------------------------------------------
// Weighted binary cross-entropy

template <typename S>
double bce_weighted(const Tensor<S>& probs, const Tensor<S>& target, double pos_weight) {
  detail::check_pair(probs, target);
  const S* p = probs.data();
  const S* y = target.data();
  double acc = 0;
  for (Index i = 0; i < probs.size(); ++i) {
    const double pc = detail::clampp(static_cast<double>(p[i]));
    const double yi = static_cast<double>(y[i]);
    acc -= pos_weight * yi * std::log(pc) + (1.0 - yi) * std::log(1.0 - pc);
  }
  return acc / static_cast<double>(probs.size());
}

template <typename S>
Tensor<S> bce_weighted_grad(const Tensor<S>& probs, const Tensor<S>& target, double pos_weight) {
  detail::check_pair(probs, target);
  Tensor<S> g(probs.shape());
  const double inv_n = 1.0 / static_cast<double>(probs.size());
  for (Index i = 0; i < probs.size(); ++i) {
    const double raw = static_cast<double>(probs[i]);
    if (raw < kProbClamp || raw > 1.0 - kProbClamp) {
      g[i] = S(0);  // clamp plateau
      continue;
    }
    const double yi = static_cast<double>(target[i]);
    g[i] = static_cast<S>(inv_n * (-pos_weight * yi / raw + (1.0 - yi) / (1.0 - raw)));
  }
  return g;
}

// ---------------------------------------------------------------------------
// Soft IoU:  1 - (sum(p*y) + eps) / (sum(p) + sum(y) - sum(p*y) + eps)

template <typename S>
double soft_iou_loss(const Tensor<S>& probs, const Tensor<S>& target, double smooth) {
  detail::check_pair(probs, target);
  double inter = 0, sp = 0, sy = 0;
  for (Index i = 0; i < probs.size(); ++i) {
    const double p = static_cast<double>(probs[i]), y = static_cast<double>(target[i]);
    inter += p * y;
    sp += p;
    sy += y;
  }
  const double uni = sp + sy - inter;
  return 1.0 - (inter + smooth) / (uni + smooth);
}

template <typename S>
Tensor<S> soft_iou_loss_grad(const Tensor<S>& probs, const Tensor<S>& target, double smooth) {
  detail::check_pair(probs, target);
  double inter = 0, sp = 0, sy = 0;
  for (Index i = 0; i < probs.size(); ++i) {
    const double p = static_cast<double>(probs[i]), y = static_cast<double>(target[i]);
    inter += p * y;
    sp += p;
    sy += y;
  }
  const double u = sp + sy - inter + smooth;
  const double n = inter + smooth;
  Tensor<S> g(probs.shape());
  for (Index i = 0; i < probs.size(); ++i) {
    const double yi = static_cast<double>(target[i]);
    // d inter/dp = y, d union/dp = 1 - y
    g[i] = static_cast<S>(-(yi * u - n * (1.0 - yi)) / (u * u));
  }
  return g;
}

// ---------------------------------------------------------------------------
// Dice:  1 - (2*sum(p*y) + eps) / (sum(p^2) + sum(y^2) + eps)

template <typename S>
double dice_loss(const Tensor<S>& probs, const Tensor<S>& target, double smooth) {
  detail::check_pair(probs, target);
  double inter = 0, sp2 = 0, sy2 = 0;
  for (Index i = 0; i < probs.size(); ++i) {
    const double p = static_cast<double>(probs[i]), y = static_cast<double>(target[i]);
    inter += p * y;
    sp2 += p * p;
    sy2 += y * y;
  }
  return 1.0 - (2.0 * inter + smooth) / (sp2 + sy2 + smooth);
}

template <typename S>
Tensor<S> dice_loss_grad(const Tensor<S>& probs, const Tensor<S>& target, double smooth) {
  detail::check_pair(probs, target);
  double inter = 0, sp2 = 0, sy2 = 0;
  for (Index i = 0; i < probs.size(); ++i) {
    const double p = static_cast<double>(probs[i]), y = static_cast<double>(target[i]);
    inter += p * y;
    sp2 += p * p;
    sy2 += y * y;
  }
  const double num = 2.0 * inter + smooth;
  const double den = sp2 + sy2 + smooth;
  Tensor<S> g(probs.shape());
  for (Index i = 0; i < probs.size(); ++i) {
    const double p = static_cast<double>(probs[i]), y = static_cast<double>(target[i]);
    g[i] = static_cast<S>(-(2.0 * y * den - num * 2.0 * p) / (den * den));
  }
  return g;
}

// ---------------------------------------------------------------------------
// Focal:  mean of -alpha_t * (1 - p_t)^gamma * log(p_t)

template <typename S>
double focal_loss(const Tensor<S>& probs, const Tensor<S>& target, double gamma, double alpha) {
  detail::check_pair(probs, target);
  double acc = 0;
  for (Index i = 0; i < probs.size(); ++i) {
    const double pc = detail::clampp(static_cast<double>(probs[i]));
    const bool pos = static_cast<double>(target[i]) > 0.5;
    const double pt = pos ? pc : 1.0 - pc;
    const double at = pos ? alpha : 1.0 - alpha;
    acc -= at * std::pow(1.0 - pt, gamma) * std::log(pt);
  }
  return acc / static_cast<double>(probs.size());
}

template <typename S>
Tensor<S> focal_loss_grad(const Tensor<S>& probs, const Tensor<S>& target, double gamma,
                          double alpha) {
  detail::check_pair(probs, target);
  Tensor<S> g(probs.shape());
  const double inv_n = 1.0 / static_cast<double>(probs.size());
  for (Index i = 0; i < probs.size(); ++i) {
    const double raw = static_cast<double>(probs[i]);
    if (raw < kProbClamp || raw > 1.0 - kProbClamp) {
      g[i] = S(0);
      continue;
    }
    const bool pos = static_cast<double>(target[i]) > 0.5;
    const double pt = pos ? raw : 1.0 - raw;
    const double at = pos ? alpha : 1.0 - alpha;
    // d/dpt [-at (1-pt)^g ln pt] = at*g*(1-pt)^(g-1)*ln pt - at*(1-pt)^g/pt
    const double one_m = 1.0 - pt;
    const double d_pt =
        at * gamma * (gamma == 0.0 ? 0.0 : std::pow(one_m, gamma - 1.0)) * std::log(pt) -
        at * std::pow(one_m, gamma) / pt;
    g[i] = static_cast<S>(inv_n * (pos ? d_pt : -d_pt));
  }
  return g;
}

// ---------------------------------------------------------------------------
// Dice + Focal convex combination

template <typename S>
double dice_focal(const Tensor<S>& probs, const Tensor<S>& target, const LossConfig& cfg) {
  return cfg.mix_weight * dice_loss(probs, target, cfg.smooth) +
         (1.0 - cfg.mix_weight) * focal_loss(probs, target, cfg.focal_gamma, cfg.focal_alpha);
}

template <typename S>
Tensor<S> dice_focal_grad(const Tensor<S>& probs, const Tensor<S>& target, const LossConfig& cfg) {
  Tensor<S> gd = dice_loss_grad(probs, target, cfg.smooth);
  Tensor<S> gf = focal_loss_grad(probs, target, cfg.focal_gamma, cfg.focal_alpha);
  Tensor<S> g(probs.shape());
  const double w = cfg.mix_weight;
  for (Index i = 0; i < g.size(); ++i)
    g[i] = static_cast<S>(w * static_cast<double>(gd[i]) + (1.0 - w) * static_cast<double>(gf[i]));
  return g;
}

// ---------------------------------------------------------------------------
// Config-dispatched entry points

template <typename S>
double loss_value(const LossConfig& cfg, const Tensor<S>& probs, const Tensor<S>& target) {
  switch (cfg.kind) {
    case LossKind::bce: return bce_weighted(probs, target, cfg.pos_weight);
    case LossKind::soft_iou: return soft_iou_loss(probs, target, cfg.smooth);
    case LossKind::dice: return dice_loss(probs, target, cfg.smooth);
    case LossKind::focal: return focal_loss(probs, target, cfg.focal_gamma, cfg.focal_alpha);
    case LossKind::dice_focal: return dice_focal(probs, target, cfg);
  }
  throw ConfigError("loss: bad kind");
}

template <typename S>
Tensor<S> loss_grad(const LossConfig& cfg, const Tensor<S>& probs, const Tensor<S>& target) {
  switch (cfg.kind) {
    case LossKind::bce: return bce_weighted_grad(probs, target, cfg.pos_weight);
    case LossKind::soft_iou: return soft_iou_loss_grad(probs, target, cfg.smooth);
    case LossKind::dice: return dice_loss_grad(probs, target, cfg.smooth);
    case LossKind::focal: return focal_loss_grad(probs, target, cfg.focal_gamma, cfg.focal_alpha);
    case LossKind::dice_focal: return dice_focal_grad(probs, target, cfg);
  }
  throw ConfigError("loss: bad kind");
}

}  // namespace nowcast::losses
