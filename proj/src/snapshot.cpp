#include "anast/snapshot.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "anast/binio.hpp"
#include "anast/cholesky.hpp"

namespace anast {

namespace {

constexpr char kMagic[4] = {'A', 'N', 'S', 'T'};
constexpr std::uint32_t kVersion = 1;

void write_spec(std::ostream& out, const ExpansionSpec& spec) {
  binio::write_u64(out, spec.input_dim);
  binio::write_u64(out, spec.output_dim);
  binio::write_u64(out, spec.seed);
  const std::uint8_t kind = static_cast<std::uint8_t>(spec.kind);
  const std::uint8_t act = static_cast<std::uint8_t>(spec.activation);
  binio::write_bytes(out, &kind, 1);
  binio::write_bytes(out, &act, 1);
  binio::write_f64(out, spec.scale);
}

ExpansionSpec read_spec(std::istream& in) {
  ExpansionSpec spec;
  spec.input_dim = binio::read_u64(in, "projector spec");
  spec.output_dim = binio::read_u64(in, "projector spec");
  spec.seed = binio::read_u64(in, "projector spec");
  std::uint8_t kind = 0, act = 0;
  binio::read_bytes(in, &kind, 1, "projector spec");
  binio::read_bytes(in, &act, 1, "projector spec");
  if (kind > 1) throw std::runtime_error("projector spec: bad kind code");
  if (act > 1) throw std::runtime_error("projector spec: bad activation code");
  spec.kind = static_cast<ProjectorKind>(kind);
  spec.activation = static_cast<Activation>(act);
  spec.scale = binio::read_f64(in, "projector spec");
  return spec;
}

}  // namespace

std::string save_state(const AnalyticState& state) {
  std::ostringstream out(std::ios::binary);
  binio::write_bytes(out, kMagic, sizeof(kMagic));
  binio::write_u32(out, kVersion);
  binio::write_f64(out, state.gamma);
  binio::write_u64(out, state.d_exp);
  binio::write_u64(out, state.registry.size());
  for (const auto& label : state.registry.labels())
    binio::write_string(out, label);
  write_spec(out, state.projector.spec);
  binio::write_matrix(out, state.projector.matrix);
  binio::write_matrix(out, state.w);
  binio::write_matrix(out, state.r);
  binio::write_u64(out, state.samples_seen);
  binio::write_u64(out, state.tasks_seen);
  return out.str();
}

AnalyticState load_state(const std::string& bytes) {
  std::istringstream in(bytes, std::ios::binary);

  char magic[4];
  binio::read_bytes(in, magic, sizeof(magic), "magic");
  if (std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
    throw std::runtime_error("snapshot: bad magic, not an ANST file");
  }
  const std::uint32_t version = binio::read_u32(in, "version");
  if (version != kVersion) {
    std::ostringstream msg;
    msg << "snapshot: unsupported version " << version << " (expected "
        << kVersion << ")";
    throw std::runtime_error(msg.str());
  }

  AnalyticState s;
  s.gamma = binio::read_f64(in, "gamma");
  if (!(s.gamma > 0.0) || !std::isfinite(s.gamma)) {
    throw std::runtime_error("snapshot: gamma section holds a non-positive value");
  }
  s.d_exp = binio::read_u64(in, "d_exp");

  const std::uint64_t n_classes = binio::read_u64(in, "registry");
  for (std::uint64_t i = 0; i < n_classes; ++i) {
    const std::string label = binio::read_string(in, "registry");
    if (s.registry.index_of(label)) {
      throw std::runtime_error("snapshot: registry holds duplicate label \"" +
                               label + "\"");
    }
    s.registry.add(label);
  }

  s.projector.spec = read_spec(in);
  s.projector.matrix = binio::read_matrix(in, "projector matrix");
  s.w = binio::read_matrix(in, "W");
  s.r = binio::read_matrix(in, "R");
  s.samples_seen = binio::read_u64(in, "counters");
  s.tasks_seen = binio::read_u64(in, "counters");

  // Cross-section consistency; a snapshot that fails here was tampered with
  // or produced by a different build.
  if (s.projector.matrix.rows() != s.projector.spec.input_dim ||
      s.projector.matrix.cols() != s.projector.spec.output_dim) {
    throw std::runtime_error("snapshot: projector matrix shape disagrees with spec");
  }
  if (s.w.rows() != s.d_exp || s.w.cols() != s.registry.size()) {
    throw std::runtime_error("snapshot: W shape disagrees with registry/d_exp");
  }
  if (s.r.rows() != s.d_exp || s.r.cols() != s.d_exp) {
    throw std::runtime_error("snapshot: R shape disagrees with d_exp");
  }
  if (relative_asymmetry(s.r) > Cholesky::kSymmetryTol) {
    throw std::runtime_error("snapshot: R is not symmetric");
  }
  try {
    Cholesky check(s.r);
  } catch (const NotSpdError&) {
    throw std::runtime_error("snapshot: R is not positive definite");
  }
  return s;
}

void save_state_file(const AnalyticState& state, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  const std::string bytes = save_state(state);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw std::runtime_error("write failed for " + path);
}

AnalyticState load_state_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_state(buf.str());
}

}  // namespace anast
