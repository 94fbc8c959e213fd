#pragma once

#include <string>

#include "anast/classifier.hpp"

namespace anast {

// Model snapshot, format "ANST" v1, little-endian. Section order: magic,
// version, gamma, d_exp, registry, projector spec, projector matrix, W, R,
// counters. Round trips are bit-exact.
std::string save_state(const AnalyticState& state);
AnalyticState load_state(const std::string& bytes);

void save_state_file(const AnalyticState& state, const std::string& path);
AnalyticState load_state_file(const std::string& path);

}  // namespace anast
