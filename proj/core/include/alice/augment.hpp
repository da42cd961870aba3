#pragma once

#include <utility>
#include <vector>

#include "alice/data.hpp"
#include "alice/rng.hpp"

namespace alice {

/// Label space extended with one synthetic class per unordered pair of
/// distinct base classes: C originals plus C*(C-1)/2 pair classes, the pairs
/// ordered lexicographically so the mapping is stable across runs.
struct AugmentedLabelSpace {
  int base_classes = 0;

  int synthetic_labels() const { return base_classes * (base_classes - 1) / 2; }
  int total_labels() const { return base_classes + synthetic_labels(); }
  bool is_synthetic(int label) const { return label >= base_classes; }

  /// Synthetic label for the unordered pair {i, j}, i != j.
  int encode(int i, int j) const;

  /// Inverse of encode; returns (i, j) with i < j.
  std::pair<int, int> decode(int label) const;
};

AugmentedLabelSpace build_augmented_label_space(int base_classes);

/// Elementwise lambda * x_i + (1 - lambda) * x_j. Payload shapes must match
/// and lambda must lie in [0.4, 0.6].
Payload mix_pair(const Payload& x_i, const Payload& x_j, double lambda);

/// Interpolation coefficient, uniform on [0.4, 0.6].
double sample_lambda(Rng& rng);

/// Batch of floor(mix_fraction * batch_size) cross-class interpolations
/// (labeled through the pair map, id -1) followed by plain draws from
/// base_data. Needs at least two classes whenever mix_fraction > 0.
std::vector<Sample> sample_class_augmented_batch(const std::vector<Sample>& base_data,
                                                 const AugmentedLabelSpace& space,
                                                 std::size_t batch_size, double mix_fraction,
                                                 Rng& rng);

/// Stochastic view transforms for one payload kind. Image transforms follow
/// the usual recipe (random resized crop, horizontal flip, per-channel color
/// jitter, grayscale); vector payloads get the analogous additive Gaussian
/// noise plus random coordinate masking.
struct ViewTransformSpec {
  PayloadKind kind = PayloadKind::Vector;

  // vector payloads
  double noise_sigma = 0.0;
  double mask_prob = 0.0;

  // image payloads
  bool resized_crop = false;
  double crop_scale_min = 0.6;
  double crop_scale_max = 1.0;
  bool hflip = false;
  double hflip_prob = 0.5;
  bool color_jitter = false;
  double jitter_min = 0.8;
  double jitter_max = 1.2;
  bool grayscale = false;
  double grayscale_prob = 0.2;

  static ViewTransformSpec disabled(PayloadKind kind) {
    ViewTransformSpec s;
    s.kind = kind;
    return s;
  }
};

/// Throws InvalidConfig for probabilities outside [0,1] or a crop scale range
/// not contained in (0, 1].
void validate(const ViewTransformSpec& spec);

/// One stochastic transform of x. Shape (and payload kind) are preserved.
Payload apply_view(const Payload& x, const ViewTransformSpec& spec, Rng& rng);

/// Two independent stochastic transforms of x.
std::pair<Payload, Payload> two_view(const Payload& x, const ViewTransformSpec& spec, Rng& rng);

}  // namespace alice
