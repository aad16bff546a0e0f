#include "nsap/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace nsap {

namespace {

static_assert(std::endian::native == std::endian::little,
              "checkpoint IO assumes a little-endian host");

void put_u32(std::ostream& os, std::uint32_t v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof v);
}

void put_f64(std::ostream& os, double v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof v);
}

std::uint32_t get_u32(std::istream& is) {
    std::uint32_t v = 0;
    if (!is.read(reinterpret_cast<char*>(&v), sizeof v))
        throw std::runtime_error("checkpoint: truncated file");
    return v;
}

double get_f64(std::istream& is) {
    double v = 0;
    if (!is.read(reinterpret_cast<char*>(&v), sizeof v))
        throw std::runtime_error("checkpoint: truncated file");
    return v;
}

}  // namespace

void write_checkpoint(const std::filesystem::path& path, const VectorField& u, double t) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("checkpoint: cannot open " + path.string() + " for write");
    os.write("NSAP", 4);
    put_u32(os, kCheckpointVersion);
    put_u32(os, static_cast<std::uint32_t>(u.grid->dim()));
    put_u32(os, static_cast<std::uint32_t>(u.grid->n()));
    put_f64(os, u.grid->box_length());
    put_f64(os, t);
    for (const auto& c : u.comp)
        os.write(reinterpret_cast<const char*>(c.values.data()),
                 static_cast<std::streamsize>(c.values.size() * sizeof(double)));
    if (!os) throw std::runtime_error("checkpoint: write failed for " + path.string());
}

Checkpoint read_checkpoint(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("checkpoint: cannot open " + path.string());
    char magic[4] = {};
    if (!is.read(magic, 4) || std::memcmp(magic, "NSAP", 4) != 0)
        throw std::runtime_error("checkpoint: bad magic in " + path.string());
    const std::uint32_t version = get_u32(is);
    if (version != kCheckpointVersion)
        throw std::runtime_error("checkpoint: unsupported version " + std::to_string(version));
    const int dim = static_cast<int>(get_u32(is));
    const int n = static_cast<int>(get_u32(is));
    const double L = get_f64(is);
    const double t = get_f64(is);

    GridPtr grid = make_grid(dim, n, L);
    std::vector<std::vector<double>> comps;
    comps.reserve(static_cast<std::size_t>(dim));
    for (int c = 0; c < dim; ++c) {
        std::vector<double> vals(grid->point_count());
        if (!is.read(reinterpret_cast<char*>(vals.data()),
                     static_cast<std::streamsize>(vals.size() * sizeof(double))))
            throw std::runtime_error("checkpoint: truncated field data in " + path.string());
        comps.push_back(std::move(vals));
    }

    Checkpoint ck;
    ck.t = t;
    ck.u = vector_from_values(grid, std::move(comps));
    ck.u.solenoidal = divergence_residual(ck.u) <= 1e-10;
    return ck;
}

}  // namespace nsap
