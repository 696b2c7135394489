// SPDX-License-Identifier: Apache-2.0
#include "checkpoint.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>

namespace machlim {

namespace {

constexpr char kMagic[4] = {'M', 'L', 'I', 'M'};
constexpr std::uint32_t kVersion = 1;

static_assert(std::endian::native == std::endian::little,
              "checkpoint io assumes a little-endian host");

struct Header {
    std::uint32_t n;
    double L;
};

void write_header(std::ofstream& out, const Grid& g) {
    out.write(kMagic, 4);
    const std::uint32_t ver = kVersion;
    const std::uint32_t n = static_cast<std::uint32_t>(g.n());
    const double L = g.length();
    out.write(reinterpret_cast<const char*>(&ver), sizeof(ver));
    out.write(reinterpret_cast<const char*>(&n), sizeof(n));
    out.write(reinterpret_cast<const char*>(&L), sizeof(L));
}

Header read_header(std::ifstream& in, const std::string& path,
                   std::optional<int> expected_n) {
    char magic[4];
    std::uint32_t ver = 0, n = 0;
    double L = 0.0;
    in.read(magic, 4);
    in.read(reinterpret_cast<char*>(&ver), sizeof(ver));
    in.read(reinterpret_cast<char*>(&n), sizeof(n));
    in.read(reinterpret_cast<char*>(&L), sizeof(L));
    if (!in) throw FormatError("checkpoint truncated (header): " + path);
    if (std::memcmp(magic, kMagic, 4) != 0)
        throw FormatError("checkpoint magic mismatch: " + path);
    if (ver != kVersion)
        throw FormatError("checkpoint version mismatch (" + std::to_string(ver) + "): " + path);
    if (expected_n && static_cast<int>(n) != *expected_n)
        throw FormatError("checkpoint dimension mismatch: file has n=" + std::to_string(n) +
                          ", run expects n=" + std::to_string(*expected_n));
    return Header{n, L};
}

void write_field(std::ofstream& out, const ScalarField& f) {
    out.write(reinterpret_cast<const char*>(f.values.data()),
              static_cast<std::streamsize>(f.values.size() * sizeof(double)));
}

void read_field(std::ifstream& in, ScalarField& f, const std::string& path) {
    in.read(reinterpret_cast<char*>(f.values.data()),
            static_cast<std::streamsize>(f.values.size() * sizeof(double)));
    if (!in) throw FormatError("checkpoint truncated (field data): " + path);
}

}  // namespace

void write_checkpoint(const EpsState& st, const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw FormatError("cannot open checkpoint for writing: " + path);
    write_header(out, st.grid());
    write_field(out, st.p);
    for (int c = 0; c < 3; ++c) write_field(out, st.u[c]);
    for (int c = 0; c < 3; ++c) write_field(out, st.H[c]);
    write_field(out, st.theta);
    if (!out) throw FormatError("checkpoint write failed: " + path);
}

void write_checkpoint(const LimitState& st, const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw FormatError("cannot open checkpoint for writing: " + path);
    write_header(out, st.grid());
    for (int c = 0; c < 3; ++c) write_field(out, st.w[c]);
    for (int c = 0; c < 3; ++c) write_field(out, st.h[c]);
    write_field(out, st.vartheta);
    write_field(out, st.pi);
    if (!out) throw FormatError("checkpoint write failed: " + path);
}

EpsState read_eps_checkpoint(const std::string& path, std::optional<int> expected_n) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot open checkpoint: " + path);
    const Header h = read_header(in, path, expected_n);
    Grid grid(static_cast<int>(h.n), h.L);
    EpsState st(grid);
    read_field(in, st.p, path);
    for (int c = 0; c < 3; ++c) read_field(in, st.u[c], path);
    for (int c = 0; c < 3; ++c) read_field(in, st.H[c], path);
    read_field(in, st.theta, path);
    return st;
}

LimitState read_limit_checkpoint(const std::string& path, std::optional<int> expected_n) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot open checkpoint: " + path);
    const Header h = read_header(in, path, expected_n);
    Grid grid(static_cast<int>(h.n), h.L);
    LimitState st(grid);
    for (int c = 0; c < 3; ++c) read_field(in, st.w[c], path);
    for (int c = 0; c < 3; ++c) read_field(in, st.h[c], path);
    read_field(in, st.vartheta, path);
    read_field(in, st.pi, path);
    return st;
}

}  // namespace machlim
