#include "semrob/model.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>

namespace semrob {

namespace {

constexpr char kMagic[4] = {'S', 'R', 'N', 'N'};

void put_u32(std::ostream& out, std::uint32_t v) {
  char b[4] = {static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff),
               static_cast<char>((v >> 16) & 0xff), static_cast<char>((v >> 24) & 0xff)};
  out.write(b, 4);
}

std::uint32_t get_u32(std::istream& in) {
  unsigned char b[4];
  in.read(reinterpret_cast<char*>(b), 4);
  if (!in) throw Error(ErrorCode::CorruptFile, "unexpected end of model file");
  return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
         (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}

void put_f32(std::ostream& out, float v) {
  std::uint32_t bits = std::bit_cast<std::uint32_t>(v);
  put_u32(out, bits);
}

float get_f32(std::istream& in) {
  return std::bit_cast<float>(get_u32(in));
}

}  // namespace

void save_model(const Classifier& net, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot write model file " + path);
  out.write(kMagic, 4);
  put_u32(out, kModelFormatVersion);
  put_u32(out, static_cast<std::uint32_t>(net.seq_len()));
  put_u32(out, static_cast<std::uint32_t>(net.emb_dim()));
  put_u32(out, static_cast<std::uint32_t>(net.layers().size()));
  for (const auto& l : net.layers()) {
    put_u32(out, static_cast<std::uint32_t>(l.in));
    put_u32(out, static_cast<std::uint32_t>(l.out));
    out.put(static_cast<char>(l.activation));
  }
  for (const auto& l : net.layers()) {
    for (float w : l.weights) put_f32(out, w);
    for (float b : l.bias) put_f32(out, b);
  }
  if (!out) throw Error(ErrorCode::IoError, "write failed for " + path);
}

Classifier load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open model file " + path);
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, kMagic, 4) != 0) {
    throw Error(ErrorCode::CorruptFile, path + " is not a model file");
  }
  const std::uint32_t version = get_u32(in);
  if (version != kModelFormatVersion) {
    throw Error(ErrorCode::VersionMismatch,
                "model format version " + std::to_string(version) + ", expected " +
                    std::to_string(kModelFormatVersion));
  }
  const std::uint32_t seq_len = get_u32(in);
  const std::uint32_t emb_dim = get_u32(in);
  const std::uint32_t n_layers = get_u32(in);
  if (seq_len == 0 || emb_dim == 0 || n_layers == 0 || n_layers > 1024) {
    throw Error(ErrorCode::CorruptFile, "implausible model header");
  }
  Classifier net;
  net.set_input_shape(seq_len, emb_dim);
  std::size_t prev = static_cast<std::size_t>(seq_len) * emb_dim;
  for (std::uint32_t l = 0; l < n_layers; ++l) {
    DenseLayerT<float> layer;
    layer.in = get_u32(in);
    layer.out = get_u32(in);
    const int act = in.get();
    if (act < 0 || act > 2) throw Error(ErrorCode::CorruptFile, "bad activation byte");
    layer.activation = static_cast<Activation>(act);
    if (layer.in != prev || layer.out == 0) {
      throw Error(ErrorCode::CorruptFile, "layer shapes do not chain");
    }
    prev = layer.out;
    net.layers().push_back(std::move(layer));
  }
  if (net.layers().back().activation != Activation::softmax) {
    throw Error(ErrorCode::CorruptFile, "final layer must be softmax");
  }
  for (auto& l : net.layers()) {
    l.weights.resize(l.in * l.out);
    l.bias.resize(l.out);
    for (float& w : l.weights) w = get_f32(in);
    for (float& b : l.bias) b = get_f32(in);
  }
  // Reject trailing bytes: a concatenated or padded file is not round-trip safe.
  in.peek();
  if (!in.eof()) throw Error(ErrorCode::CorruptFile, "trailing bytes in model file");
  return net;
}

void save_train_log(const TrainLog& log, const std::string& path,
                    const std::vector<std::string>& header_lines) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::IoError, "cannot write training log " + path);
  for (const auto& line : header_lines) out << "# " << line << "\n";
  out << "epoch\tloss\ttrain_acc\n";
  std::ostringstream row;
  for (const auto& e : log) {
    row.str("");
    row.precision(6);
    row << std::fixed << e.epoch << "\t" << e.loss << "\t" << e.accuracy;
    out << row.str() << "\n";
  }
}

}  // namespace semrob
