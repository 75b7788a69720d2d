#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "strata/equilibrium.hpp"
#include "strata/forcing.hpp"
#include "strata/state.hpp"

namespace strata {

// Binary array container: magic, format version, then named records of
// 8-byte-float row-major payloads.  Shared by field dumps and checkpoints.
namespace container {

constexpr char kMagic[8] = {'S', 'T', 'R', 'A', 'F', 'L', 'D', '\0'};
constexpr std::uint32_t kVersion = 1;

struct Record {
    std::string name;
    std::vector<std::uint64_t> shape;
    std::vector<double> payload;  // row-major
};

void write_header(std::ostream& out);
void read_header(std::istream& in);  // throws CheckpointError on mismatch
void write_record(std::ostream& out, const Record& rec);
Record read_record(std::istream& in);

}  // namespace container

// Solver checkpoint: state arrays, forcing descriptor, wave speed, grid
// descriptor, profile hash, and provenance, closed by a checksum.  Reload
// reproduces residual norms bit-for-bit.
struct Checkpoint {
    Grid grid;
    State state;
    Forcing::Descriptor forcing;
    double gamma = 1.0;
    double volume_shift = 0.0;
    std::uint64_t profile_hash = 0;
    std::string provenance;
};

std::uint64_t profile_fingerprint(const PhysicalParams& params);

void save_checkpoint(const std::string& path, const Checkpoint& ckpt);
Checkpoint load_checkpoint(const std::string& path);  // throws CheckpointError

// two-column surface export: x, eta(x)
void write_surface_csv(const std::string& path, const SurfaceField& eta);

}  // namespace strata
