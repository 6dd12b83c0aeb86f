#pragma once

#include <string>

#include "csp/autodiff.hpp"

namespace csp {

/// Versioned binary checkpoint: magic + version, then per parameter a name,
/// a shape header and a little-endian 64-bit float payload.
void save_checkpoint(const ParameterStore& params, const std::string& path);

/// Reads a checkpoint written by save_checkpoint. Throws Error on a bad
/// magic/version or truncated file.
ParameterStore load_checkpoint(const std::string& path);

} // namespace csp
