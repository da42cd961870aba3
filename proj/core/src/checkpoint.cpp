#include "alice/checkpoint.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>

namespace alice {

static_assert(std::endian::native == std::endian::little,
              "checkpoint format is little-endian; big-endian hosts need byte swaps");

namespace {

constexpr char kMagic[8] = {'A', 'L', 'I', 'C', 'E', 'C', 'K', 'P'};
constexpr std::uint32_t kVersion = 1;

void put_u32(std::string& out, std::uint32_t v) {
  out.append(reinterpret_cast<const char*>(&v), sizeof(v));
}

void put_doubles(std::string& out, const Vec& v) {
  out.append(reinterpret_cast<const char*>(v.data()), v.size() * sizeof(double));
}

struct Reader {
  const std::string& bytes;
  std::size_t pos = 0;

  void need(std::size_t n) const {
    if (pos + n > bytes.size()) {
      throw Error(ErrorCode::ParseError,
                  "checkpoint truncated at byte " + std::to_string(pos));
    }
  }

  std::uint32_t u32() {
    need(4);
    std::uint32_t v;
    std::memcpy(&v, bytes.data() + pos, 4);
    pos += 4;
    return v;
  }

  std::uint8_t u8() {
    need(1);
    return static_cast<std::uint8_t>(bytes[pos++]);
  }

  Vec doubles(std::size_t n) {
    need(n * sizeof(double));
    Vec v(n);
    std::memcpy(v.data(), bytes.data() + pos, n * sizeof(double));
    pos += n * sizeof(double);
    return v;
  }
};

}  // namespace

std::string serialize_model(const ModelParams& params) {
  std::string out;
  out.append(kMagic, sizeof(kMagic));
  put_u32(out, kVersion);

  put_u32(out, static_cast<std::uint32_t>(params.extractor.layers.size()));
  for (const AffineLayer& layer : params.extractor.layers) {
    put_u32(out, static_cast<std::uint32_t>(layer.in));
    put_u32(out, static_cast<std::uint32_t>(layer.out));
  }
  out.push_back(params.has_projection ? 1 : 0);
  if (params.has_projection) {
    put_u32(out, static_cast<std::uint32_t>(params.proj_in.in));
    put_u32(out, static_cast<std::uint32_t>(params.proj_in.out));
    put_u32(out, static_cast<std::uint32_t>(params.proj_out.in));
    put_u32(out, static_cast<std::uint32_t>(params.proj_out.out));
  }
  put_u32(out, static_cast<std::uint32_t>(params.classifier.size()));
  put_u32(out, params.classifier.empty()
                   ? 0
                   : static_cast<std::uint32_t>(params.classifier.front().size()));

  for (const AffineLayer& layer : params.extractor.layers) {
    put_doubles(out, layer.w);
    put_doubles(out, layer.b);
  }
  if (params.has_projection) {
    put_doubles(out, params.proj_in.w);
    put_doubles(out, params.proj_in.b);
    put_doubles(out, params.proj_out.w);
    put_doubles(out, params.proj_out.b);
  }
  for (const Vec& row : params.classifier) put_doubles(out, row);
  return out;
}

ModelParams deserialize_model(const std::string& bytes) {
  Reader r{bytes};
  r.need(sizeof(kMagic));
  if (std::memcmp(bytes.data(), kMagic, sizeof(kMagic)) != 0) {
    throw Error(ErrorCode::ParseError, "bad checkpoint magic");
  }
  r.pos = sizeof(kMagic);
  const std::uint32_t version = r.u32();
  if (version != kVersion) {
    throw Error(ErrorCode::ParseError, "unsupported checkpoint version " + std::to_string(version));
  }

  ModelParams params;
  const std::uint32_t n_layers = r.u32();
  std::vector<std::pair<std::uint32_t, std::uint32_t>> shapes(n_layers);
  for (auto& [in, out] : shapes) {
    in = r.u32();
    out = r.u32();
  }
  params.has_projection = r.u8() != 0;
  std::uint32_t p_in_i = 0, p_in_o = 0, p_out_i = 0, p_out_o = 0;
  if (params.has_projection) {
    p_in_i = r.u32();
    p_in_o = r.u32();
    p_out_i = r.u32();
    p_out_o = r.u32();
  }
  const std::uint32_t n_rows = r.u32();
  const std::uint32_t row_dim = r.u32();

  for (auto [in, out] : shapes) {
    AffineLayer layer;
    layer.in = static_cast<int>(in);
    layer.out = static_cast<int>(out);
    layer.w = r.doubles(static_cast<std::size_t>(in) * out);
    layer.b = r.doubles(out);
    params.extractor.layers.push_back(std::move(layer));
  }
  if (params.has_projection) {
    params.proj_in.in = static_cast<int>(p_in_i);
    params.proj_in.out = static_cast<int>(p_in_o);
    params.proj_in.w = r.doubles(static_cast<std::size_t>(p_in_i) * p_in_o);
    params.proj_in.b = r.doubles(p_in_o);
    params.proj_out.in = static_cast<int>(p_out_i);
    params.proj_out.out = static_cast<int>(p_out_o);
    params.proj_out.w = r.doubles(static_cast<std::size_t>(p_out_i) * p_out_o);
    params.proj_out.b = r.doubles(p_out_o);
  }
  for (std::uint32_t i = 0; i < n_rows; ++i) {
    params.classifier.push_back(r.doubles(row_dim));
  }
  if (r.pos != bytes.size()) {
    throw Error(ErrorCode::ParseError,
                "trailing bytes in checkpoint after offset " + std::to_string(r.pos));
  }
  return params;
}

void save_checkpoint(const ModelParams& params, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot open " + path + " for writing");
  const std::string bytes = serialize_model(params);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::IoError, "short write to " + path);
}

ModelParams load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return deserialize_model(bytes);
}

}  // namespace alice
