#pragma once

#include <filesystem>

#include "countsim/network.hpp"

namespace countsim {

// Checkpoint file: a text manifest (layer name, dims, byte offset into the
// data section) terminated by a `data <bytes>` line, followed by the raw
// little-endian IEEE-754 float32 arrays concatenated in manifest order.
// save(load(path)) reproduces the file byte for byte.
void save_checkpoint(const NetworkParams& params, const std::filesystem::path& path);
NetworkParams load_checkpoint(const std::filesystem::path& path);

} // namespace countsim
