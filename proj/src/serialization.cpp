#include "strata/serialization.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>

#include "strata/equilibrium.hpp"
#include "strata/errors.hpp"

namespace strata {

namespace {

std::uint64_t fnv1a(const char* data, std::size_t n, std::uint64_t seed = 14695981039346656037ull) {
    std::uint64_t h = seed;
    for (std::size_t i = 0; i < n; ++i) {
        h ^= static_cast<unsigned char>(data[i]);
        h *= 1099511628211ull;
    }
    return h;
}

template <class T>
void put(std::ostream& out, const T& v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T get(std::istream& in) {
    T v{};
    in.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!in) throw CheckpointError("container: truncated stream");
    return v;
}

void put_string(std::ostream& out, const std::string& s) {
    put<std::uint32_t>(out, static_cast<std::uint32_t>(s.size()));
    out.write(s.data(), static_cast<std::streamsize>(s.size()));
}

std::string get_string(std::istream& in) {
    const auto n = get<std::uint32_t>(in);
    if (n > (1u << 20)) throw CheckpointError("container: implausible string length");
    std::string s(n, '\0');
    in.read(s.data(), n);
    if (!in) throw CheckpointError("container: truncated string");
    return s;
}

}  // namespace

namespace container {

void write_header(std::ostream& out) {
    out.write(kMagic, sizeof(kMagic));
    put<std::uint32_t>(out, kVersion);
}

void read_header(std::istream& in) {
    char magic[sizeof(kMagic)] = {};
    in.read(magic, sizeof(magic));
    if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
        throw CheckpointError("container: bad magic string");
    const auto version = get<std::uint32_t>(in);
    if (version != kVersion) throw CheckpointError("container: unsupported version");
}

void write_record(std::ostream& out, const Record& rec) {
    put_string(out, rec.name);
    put<std::uint32_t>(out, static_cast<std::uint32_t>(rec.shape.size()));
    std::uint64_t total = 1;
    for (auto d : rec.shape) {
        put<std::uint64_t>(out, d);
        total *= d;
    }
    put<std::uint8_t>(out, 0);  // element kind: 8-byte float
    if (total != rec.payload.size()) throw CheckpointError("container: shape/payload mismatch");
    out.write(reinterpret_cast<const char*>(rec.payload.data()),
              static_cast<std::streamsize>(sizeof(double) * rec.payload.size()));
}

Record read_record(std::istream& in) {
    Record rec;
    rec.name = get_string(in);
    const auto rank = get<std::uint32_t>(in);
    if (rank > 8) throw CheckpointError("container: implausible rank");
    std::uint64_t total = 1;
    for (std::uint32_t i = 0; i < rank; ++i) {
        rec.shape.push_back(get<std::uint64_t>(in));
        total *= rec.shape.back();
    }
    const auto kind = get<std::uint8_t>(in);
    if (kind != 0) throw CheckpointError("container: unknown element kind");
    if (total > (1ull << 30)) throw CheckpointError("container: implausible payload");
    rec.payload.resize(total);
    in.read(reinterpret_cast<char*>(rec.payload.data()),
            static_cast<std::streamsize>(sizeof(double) * total));
    if (!in) throw CheckpointError("container: truncated payload");
    return rec;
}

}  // namespace container

std::uint64_t profile_fingerprint(const PhysicalParams& params) {
    std::vector<double> probe = {params.depth,
                                 params.gravity,
                                 params.surface_tension,
                                 params.external_pressure,
                                 static_cast<double>(params.n)};
    for (double t : {0.5, 1.0, 2.0, 4.0}) {
        probe.push_back(params.pressure.value(t));
        probe.push_back(params.viscosity.mu(t));
        probe.push_back(params.viscosity.lambda(t));
    }
    return fnv1a(reinterpret_cast<const char*>(probe.data()), sizeof(double) * probe.size());
}

void save_checkpoint(const std::string& path, const Checkpoint& ckpt) {
    std::ostringstream body(std::ios::binary);
    container::write_header(body);

    const Grid& g = ckpt.grid;
    auto slab_record = [&](const char* name, const SlabField& f) {
        container::write_record(body, {name, {g.nz, g.nx}, f.values()});
    };
    slab_record("q", ckpt.state.q);
    slab_record("u0", ckpt.state.u[0]);
    slab_record("u1", ckpt.state.u[1]);
    container::write_record(body, {"eta", {g.nx}, ckpt.state.eta.values()});
    container::write_record(
        body, {"grid", {5}, {g.L, g.depth, double(g.nx), double(g.nz), double(g.dim)}});
    const double kind_id = ckpt.forcing.kind == "gaussian-pressure" ? 1.0 : 0.0;
    container::write_record(body, {"forcing",
                                   {6},
                                   {kind_id, ckpt.forcing.cx, ckpt.forcing.cy,
                                    ckpt.forcing.width, ckpt.forcing.amplitude, ckpt.gamma}});
    container::write_record(
        body, {"gauge", {2}, {ckpt.volume_shift, std::bit_cast<double>(ckpt.profile_hash)}});
    put_string(body, ckpt.provenance);

    const std::string bytes = body.str();
    const std::uint64_t sum = fnv1a(bytes.data(), bytes.size());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw CheckpointError("checkpoint: cannot open " + path);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    put<std::uint64_t>(out, sum);
}

Checkpoint load_checkpoint(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw CheckpointError("checkpoint: cannot open " + path);
    std::stringstream buffer(std::ios::binary | std::ios::in | std::ios::out);
    buffer << in.rdbuf();
    std::string bytes = buffer.str();
    if (bytes.size() < sizeof(std::uint64_t)) throw CheckpointError("checkpoint: truncated file");
    std::uint64_t stored = 0;
    std::memcpy(&stored, bytes.data() + bytes.size() - sizeof(stored), sizeof(stored));
    bytes.resize(bytes.size() - sizeof(stored));
    if (fnv1a(bytes.data(), bytes.size()) != stored)
        throw CheckpointError("checkpoint: checksum mismatch");

    std::istringstream body(bytes, std::ios::binary);
    container::read_header(body);
    auto q = container::read_record(body);
    auto u0 = container::read_record(body);
    auto u1 = container::read_record(body);
    auto eta = container::read_record(body);
    auto gridrec = container::read_record(body);
    auto forcing = container::read_record(body);
    auto gauge = container::read_record(body);
    const std::string provenance = get_string(body);

    Checkpoint ckpt;
    ckpt.grid = Grid(gridrec.payload[0], static_cast<std::size_t>(gridrec.payload[2]),
                     static_cast<std::size_t>(gridrec.payload[3]), gridrec.payload[1],
                     static_cast<int>(gridrec.payload[4]));
    ckpt.state = State(ckpt.grid);
    ckpt.state.q = SlabField::from_values(ckpt.grid, q.payload);
    ckpt.state.u[0] = SlabField::from_values(ckpt.grid, u0.payload);
    ckpt.state.u[1] = SlabField::from_values(ckpt.grid, u1.payload);
    ckpt.state.eta = SurfaceField::from_values(ckpt.grid, eta.payload);
    ckpt.forcing.kind = forcing.payload[0] == 1.0 ? "gaussian-pressure" : "zero";
    ckpt.forcing.cx = forcing.payload[1];
    ckpt.forcing.cy = forcing.payload[2];
    ckpt.forcing.width = forcing.payload[3];
    ckpt.forcing.amplitude = forcing.payload[4];
    ckpt.gamma = forcing.payload[5];
    ckpt.volume_shift = gauge.payload[0];
    ckpt.profile_hash = std::bit_cast<std::uint64_t>(gauge.payload[1]);
    ckpt.provenance = provenance;
    return ckpt;
}

void write_surface_csv(const std::string& path, const SurfaceField& eta) {
    std::ofstream out(path);
    if (!out) throw CheckpointError("csv: cannot open " + path);
    out << "x,eta\n";
    out.precision(17);
    const Grid& g = eta.grid();
    for (std::size_t ix = 0; ix < g.nx; ++ix) out << g.x(ix) << "," << eta.value(ix) << "\n";
}

}  // namespace strata
