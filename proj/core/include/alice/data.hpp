#pragma once

#include <cstdint>
#include <vector>

#include "alice/core_math.hpp"

namespace alice {

enum class PayloadKind { Vector, Image };

/// A datum fed to the model: either a dense feature vector or a small image
/// tensor (row-major height x width x channels, values normalized to [0, 1]).
struct Payload {
  PayloadKind kind = PayloadKind::Vector;
  int width = 0;
  int height = 0;
  int channels = 0;
  Vec values;

  static Payload vector(Vec v) {
    Payload p;
    p.kind = PayloadKind::Vector;
    p.values = std::move(v);
    return p;
  }

  static Payload image(int width, int height, int channels, Vec v) {
    Payload p;
    p.kind = PayloadKind::Image;
    p.width = width;
    p.height = height;
    p.channels = channels;
    p.values = std::move(v);
    return p;
  }

  std::size_t size() const { return values.size(); }

  bool same_shape(const Payload& other) const {
    return kind == other.kind && width == other.width && height == other.height &&
           channels == other.channels && values.size() == other.values.size();
  }
};

/// One labeled datum.
struct Sample {
  std::int64_t id = 0;
  int label = 0;
  Payload payload;
};

/// Train/test halves of a benchmark-style dataset sharing one label space.
struct Dataset {
  std::vector<Sample> train;
  std::vector<Sample> test;
};

}  // namespace alice
