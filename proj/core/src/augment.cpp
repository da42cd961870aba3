#include "alice/augment.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

namespace alice {

int AugmentedLabelSpace::encode(int i, int j) const {
  if (i == j || i < 0 || j < 0 || i >= base_classes || j >= base_classes) {
    throw Error(ErrorCode::InvalidRange,
                "pair (" + std::to_string(i) + ", " + std::to_string(j) +
                    ") invalid for " + std::to_string(base_classes) + " base classes");
  }
  if (i > j) std::swap(i, j);
  // Lexicographic offset of (i, j) among all pairs with i < j.
  const int row_start = i * base_classes - i * (i + 1) / 2;
  return base_classes + row_start + (j - i - 1);
}

std::pair<int, int> AugmentedLabelSpace::decode(int label) const {
  int k = label - base_classes;
  if (k < 0 || k >= synthetic_labels()) {
    throw Error(ErrorCode::InvalidRange,
                "label " + std::to_string(label) + " is not a synthetic label");
  }
  int i = 0;
  while (k >= base_classes - 1 - i) {
    k -= base_classes - 1 - i;
    ++i;
  }
  return {i, i + 1 + k};
}

AugmentedLabelSpace build_augmented_label_space(int base_classes) {
  if (base_classes < 1) {
    throw Error(ErrorCode::InvalidConfig,
                "label space needs at least one class, got " + std::to_string(base_classes));
  }
  return AugmentedLabelSpace{base_classes};
}

Payload mix_pair(const Payload& x_i, const Payload& x_j, double lambda) {
  if (!x_i.same_shape(x_j)) {
    throw Error(ErrorCode::ShapeMismatch, "mix_pair payload shapes differ");
  }
  if (!(lambda >= 0.4 && lambda <= 0.6)) {
    throw Error(ErrorCode::LambdaOutOfRange,
                "lambda " + std::to_string(lambda) + " outside [0.4, 0.6]");
  }
  // Evaluate with the larger weight first so that mix_pair(x, y, l) and
  // mix_pair(y, x, 1 - l) run the identical floating-point computation.
  double w_a = lambda, w_b = 1.0 - lambda;
  const Payload* a = &x_i;
  const Payload* b = &x_j;
  if (w_a < w_b) {
    std::swap(w_a, w_b);
    std::swap(a, b);
  }
  Payload out = x_i;
  for (std::size_t k = 0; k < out.values.size(); ++k) {
    const double major = w_a * a->values[k];
    const double minor = w_b * b->values[k];
    out.values[k] = major + minor;
  }
  return out;
}

double sample_lambda(Rng& rng) { return rng.uniform(0.4, 0.6); }

std::vector<Sample> sample_class_augmented_batch(const std::vector<Sample>& base_data,
                                                 const AugmentedLabelSpace& space,
                                                 std::size_t batch_size, double mix_fraction,
                                                 Rng& rng) {
  if (base_data.empty()) throw Error(ErrorCode::EmptyBatch, "no base data to sample from");
  if (!(mix_fraction >= 0.0 && mix_fraction <= 1.0)) {
    throw Error(ErrorCode::InvalidConfig, "mix_fraction must be in [0, 1]");
  }

  std::map<int, std::vector<std::size_t>> by_class;
  for (std::size_t idx = 0; idx < base_data.size(); ++idx) {
    const int label = base_data[idx].label;
    if (label < 0 || label >= space.base_classes) {
      throw Error(ErrorCode::UnknownLabel,
                  "sample label " + std::to_string(label) + " outside base label space");
    }
    by_class[label].push_back(idx);
  }

  const std::size_t mixed = static_cast<std::size_t>(
      std::floor(mix_fraction * static_cast<double>(batch_size)));
  if (mixed > 0 && by_class.size() < 2) {
    throw Error(ErrorCode::InsufficientClasses,
                "class augmentation needs >= 2 classes, got " + std::to_string(by_class.size()));
  }

  std::vector<int> classes;
  classes.reserve(by_class.size());
  for (const auto& [label, _] : by_class) classes.push_back(label);

  std::vector<Sample> batch;
  batch.reserve(batch_size);
  for (std::size_t n = 0; n < mixed; ++n) {
    const std::size_t a = rng.uniform_index(classes.size());
    std::size_t b = rng.uniform_index(classes.size() - 1);
    if (b >= a) ++b;
    const auto& ia = by_class[classes[a]];
    const auto& ib = by_class[classes[b]];
    const Sample& si = base_data[ia[rng.uniform_index(ia.size())]];
    const Sample& sj = base_data[ib[rng.uniform_index(ib.size())]];
    Sample s;
    s.id = -1;
    s.label = space.encode(si.label, sj.label);
    s.payload = mix_pair(si.payload, sj.payload, sample_lambda(rng));
    batch.push_back(std::move(s));
  }
  for (std::size_t n = mixed; n < batch_size; ++n) {
    batch.push_back(base_data[rng.uniform_index(base_data.size())]);
  }
  return batch;
}

void validate(const ViewTransformSpec& spec) {
  auto check_prob = [](double p, const char* name) {
    if (!(p >= 0.0 && p <= 1.0)) {
      throw Error(ErrorCode::InvalidConfig, std::string(name) + " must be in [0, 1]");
    }
  };
  check_prob(spec.mask_prob, "mask_prob");
  check_prob(spec.hflip_prob, "hflip_prob");
  check_prob(spec.grayscale_prob, "grayscale_prob");
  if (!(spec.noise_sigma >= 0.0)) {
    throw Error(ErrorCode::InvalidConfig, "noise_sigma must be >= 0");
  }
  if (!(spec.crop_scale_min > 0.0 && spec.crop_scale_min <= spec.crop_scale_max &&
        spec.crop_scale_max <= 1.0)) {
    throw Error(ErrorCode::InvalidConfig, "crop scale range must be within (0, 1]");
  }
  if (!(spec.jitter_min > 0.0 && spec.jitter_min <= spec.jitter_max)) {
    throw Error(ErrorCode::InvalidConfig, "color jitter range invalid");
  }
}

namespace {

// Bilinear resize of an h x w x c image (half-pixel-centered sampling).
Vec resize_bilinear(const Vec& src, int src_w, int src_h, int c, int dst_w, int dst_h) {
  Vec dst(static_cast<std::size_t>(dst_w) * dst_h * c);
  for (int y = 0; y < dst_h; ++y) {
    const double sy = (y + 0.5) * src_h / dst_h - 0.5;
    const int y0 = std::clamp(static_cast<int>(std::floor(sy)), 0, src_h - 1);
    const int y1 = std::min(y0 + 1, src_h - 1);
    const double fy = std::clamp(sy - y0, 0.0, 1.0);
    for (int x = 0; x < dst_w; ++x) {
      const double sx = (x + 0.5) * src_w / dst_w - 0.5;
      const int x0 = std::clamp(static_cast<int>(std::floor(sx)), 0, src_w - 1);
      const int x1 = std::min(x0 + 1, src_w - 1);
      const double fx = std::clamp(sx - x0, 0.0, 1.0);
      for (int k = 0; k < c; ++k) {
        const double v00 = src[(static_cast<std::size_t>(y0) * src_w + x0) * c + k];
        const double v01 = src[(static_cast<std::size_t>(y0) * src_w + x1) * c + k];
        const double v10 = src[(static_cast<std::size_t>(y1) * src_w + x0) * c + k];
        const double v11 = src[(static_cast<std::size_t>(y1) * src_w + x1) * c + k];
        dst[(static_cast<std::size_t>(y) * dst_w + x) * c + k] =
            (1 - fy) * ((1 - fx) * v00 + fx * v01) + fy * ((1 - fx) * v10 + fx * v11);
      }
    }
  }
  return dst;
}

Payload apply_vector_view(const Payload& x, const ViewTransformSpec& spec, Rng& rng) {
  Payload out = x;
  if (spec.noise_sigma > 0.0) {
    for (double& v : out.values) v += spec.noise_sigma * rng.normal();
  }
  if (spec.mask_prob > 0.0) {
    for (double& v : out.values) {
      if (rng.bernoulli(spec.mask_prob)) v = 0.0;
    }
  }
  return out;
}

Payload apply_image_view(const Payload& x, const ViewTransformSpec& spec, Rng& rng) {
  const int w = x.width, h = x.height, c = x.channels;
  Payload out = x;

  if (spec.resized_crop) {
    const double area = rng.uniform(spec.crop_scale_min,
                                    std::nextafter(spec.crop_scale_max, 2.0));
    const double side = std::sqrt(area);
    const int cw = std::max(1, static_cast<int>(std::lround(side * w)));
    const int ch = std::max(1, static_cast<int>(std::lround(side * h)));
    const int x0 = static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(w - cw + 1)));
    const int y0 = static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(h - ch + 1)));
    Vec crop(static_cast<std::size_t>(cw) * ch * c);
    for (int y = 0; y < ch; ++y) {
      for (int xx = 0; xx < cw; ++xx) {
        for (int k = 0; k < c; ++k) {
          crop[(static_cast<std::size_t>(y) * cw + xx) * c + k] =
              out.values[(static_cast<std::size_t>(y0 + y) * w + (x0 + xx)) * c + k];
        }
      }
    }
    out.values = resize_bilinear(crop, cw, ch, c, w, h);
  }

  if (spec.hflip && rng.bernoulli(spec.hflip_prob)) {
    for (int y = 0; y < h; ++y) {
      for (int xx = 0; xx < w / 2; ++xx) {
        for (int k = 0; k < c; ++k) {
          std::swap(out.values[(static_cast<std::size_t>(y) * w + xx) * c + k],
                    out.values[(static_cast<std::size_t>(y) * w + (w - 1 - xx)) * c + k]);
        }
      }
    }
  }

  if (spec.color_jitter) {
    for (int k = 0; k < c; ++k) {
      const double scale = rng.uniform(spec.jitter_min, std::nextafter(spec.jitter_max, 2.0));
      for (int p = 0; p < w * h; ++p) {
        double& v = out.values[static_cast<std::size_t>(p) * c + k];
        v = std::clamp(v * scale, 0.0, 1.0);
      }
    }
  }

  if (spec.grayscale && rng.bernoulli(spec.grayscale_prob)) {
    for (int p = 0; p < w * h; ++p) {
      double mean = 0.0;
      for (int k = 0; k < c; ++k) mean += out.values[static_cast<std::size_t>(p) * c + k];
      mean /= c;
      for (int k = 0; k < c; ++k) out.values[static_cast<std::size_t>(p) * c + k] = mean;
    }
  }

  return out;
}

}  // namespace

Payload apply_view(const Payload& x, const ViewTransformSpec& spec, Rng& rng) {
  validate(spec);
  if (x.kind != spec.kind) {
    throw Error(ErrorCode::UnsupportedPayload, "view transform spec does not match payload kind");
  }
  return x.kind == PayloadKind::Vector ? apply_vector_view(x, spec, rng)
                                       : apply_image_view(x, spec, rng);
}

std::pair<Payload, Payload> two_view(const Payload& x, const ViewTransformSpec& spec, Rng& rng) {
  Payload a = apply_view(x, spec, rng);
  Payload b = apply_view(x, spec, rng);
  return {std::move(a), std::move(b)};
}

}  // namespace alice
