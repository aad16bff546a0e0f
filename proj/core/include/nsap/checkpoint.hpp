#pragma once

#include <filesystem>

#include "nsap/field.hpp"

namespace nsap {

/// Shared binary checkpoint format (version 1):
///   magic "NSAP" | u32 version | u32 N | u32 n | f64 L | f64 t |
///   N component arrays of n^N f64 real-space samples, component-major,
///   row-major within a component (last axis fastest), all little-endian.
inline constexpr std::uint32_t kCheckpointVersion = 1;

struct Checkpoint {
    double t = 0.0;
    VectorField u;
};

void write_checkpoint(const std::filesystem::path& path, const VectorField& u, double t);
Checkpoint read_checkpoint(const std::filesystem::path& path);

}  // namespace nsap
