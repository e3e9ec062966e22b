#include "qfb/io.hpp"

#include <bit>
#include <cstdio>
#include <fstream>

#include <json.hpp>

namespace qfb::io {

namespace {

static_assert(std::endian::native == std::endian::little,
              "binary dumps are written in the native byte order and documented little-endian");

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::ofstream open_out(const std::filesystem::path& path, std::ios::openmode mode) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, mode);
    if (!out) throw Error("cannot open " + path.string() + " for writing");
    return out;
}

}  // namespace

void write_csv_channel(const std::filesystem::path& path, const ComplexTrajectory& tr) {
    auto out = open_out(path, std::ios::out | std::ios::trunc);
    out << "t,re,im\n";
    for (std::size_t s = 0; s < tr.size(); ++s)
        out << fmt(tr.time_of(s)) << ',' << fmt(tr[s].real()) << ',' << fmt(tr[s].imag()) << '\n';
}

void write_csv_wide(const std::filesystem::path& path, const ComplexTrajectory& photon,
                    const ComplexTrajectory& emitter) {
    if (photon.size() != emitter.size())
        throw GridMismatch("wide CSV needs equally sampled observables");
    auto out = open_out(path, std::ios::out | std::ios::trunc);
    out << "t,photon_number,emitter_population\n";
    for (std::size_t s = 0; s < photon.size(); ++s)
        out << fmt(photon.time_of(s)) << ',' << fmt(photon[s].real()) << ','
            << fmt(emitter[s].real()) << '\n';
}

void write_binary_dump(const std::filesystem::path& path,
                       const std::vector<std::string>& channel_names,
                       const std::vector<const ComplexTrajectory*>& channels) {
    if (channel_names.size() != channels.size())
        throw Error("need one name per dumped channel");
    auto out = open_out(path, std::ios::out | std::ios::trunc | std::ios::binary);
    std::size_t steps = channels.empty() ? 0 : channels.front()->size();
    for (const auto* ch : channels) {
        if (ch->size() != steps) throw GridMismatch("dump channels must share the grid");
        for (std::size_t s = 0; s < ch->size(); ++s) {
            const double pair[2] = {(*ch)[s].real(), (*ch)[s].imag()};
            out.write(reinterpret_cast<const char*>(pair), sizeof pair);
        }
    }
    out.close();

    nlohmann::json manifest;
    manifest["layout"] = "row-major [channel][step]";
    manifest["dtype"] = "complex128 little-endian (re, im) pairs";
    manifest["channels"] = channel_names;
    manifest["steps"] = steps;
    if (!channels.empty()) {
        manifest["start_time"] = channels.front()->start_time();
        manifest["dt"] = channels.front()->dt();
    }
    auto mout = open_out(path.string() + ".manifest.json", std::ios::out | std::ios::trunc);
    mout << manifest.dump(2) << '\n';
}

std::string file_digest(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::in | std::ios::binary);
    if (!in) throw Error("cannot open " + path.string() + " for digest");
    std::uint64_t hash = 0xcbf29ce484222325ull;
    char buf[65536];
    while (in.read(buf, sizeof buf) || in.gcount() > 0) {
        const std::streamsize got = in.gcount();
        for (std::streamsize k = 0; k < got; ++k) {
            hash ^= static_cast<unsigned char>(buf[k]);
            hash *= 0x100000001b3ull;
        }
    }
    char hex[17];
    std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(hash));
    return hex;
}

}  // namespace qfb::io
