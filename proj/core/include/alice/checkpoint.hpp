#pragma once

#include <string>

#include "alice/model.hpp"

namespace alice {

/// Model checkpoint, binary, little-endian:
///
///   bytes  0..7   magic "ALICECKP"
///   u32           format version (currently 1)
///   u32           extractor layer count, then per layer: u32 in, u32 out
///   u8            projection flag; if set: u32 in/out for both head layers
///   u32           classifier row count, u32 classifier dim
///   f64[]         parameters in declaration order: per extractor layer w
///                 then b, projection head w/b pairs, classifier rows
///
/// serialize/deserialize round-trip bit-exactly.
std::string serialize_model(const ModelParams& params);
ModelParams deserialize_model(const std::string& bytes);

void save_checkpoint(const ModelParams& params, const std::string& path);
ModelParams load_checkpoint(const std::string& path);

}  // namespace alice
