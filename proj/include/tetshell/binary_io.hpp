// SPDX-License-Identifier: Apache-2.0

#ifndef TETSHELL_BINARY_IO_HPP
#define TETSHELL_BINARY_IO_HPP

#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>
#include <string>

#include "tetshell/error.hpp"

namespace tetshell {

// Little-endian primitives for the TGRD/THIE/TTSF/TPCN containers.

inline void write_u16(std::ostream& out, uint16_t v) {
    const unsigned char b[2] = {(unsigned char)(v & 0xff), (unsigned char)(v >> 8)};
    out.write(reinterpret_cast<const char*>(b), 2);
}

inline void write_u32(std::ostream& out, uint32_t v) {
    unsigned char b[4];
    for (int i = 0; i < 4; ++i) b[i] = (unsigned char)(v >> (8 * i));
    out.write(reinterpret_cast<const char*>(b), 4);
}

inline void write_u64(std::ostream& out, uint64_t v) {
    unsigned char b[8];
    for (int i = 0; i < 8; ++i) b[i] = (unsigned char)(v >> (8 * i));
    out.write(reinterpret_cast<const char*>(b), 8);
}

inline void write_f32(std::ostream& out, float v) {
    uint32_t u;
    std::memcpy(&u, &v, 4);
    write_u32(out, u);
}

inline uint16_t read_u16(std::istream& in, const std::string& name) {
    unsigned char b[2];
    if (!in.read(reinterpret_cast<char*>(b), 2)) throw InputError(name + ": truncated file");
    return uint16_t(b[0] | (uint16_t(b[1]) << 8));
}

inline uint32_t read_u32(std::istream& in, const std::string& name) {
    unsigned char b[4];
    if (!in.read(reinterpret_cast<char*>(b), 4)) throw InputError(name + ": truncated file");
    uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= uint32_t(b[i]) << (8 * i);
    return v;
}

inline uint64_t read_u64(std::istream& in, const std::string& name) {
    unsigned char b[8];
    if (!in.read(reinterpret_cast<char*>(b), 8)) throw InputError(name + ": truncated file");
    uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= uint64_t(b[i]) << (8 * i);
    return v;
}

inline float read_f32(std::istream& in, const std::string& name) {
    const uint32_t u = read_u32(in, name);
    float v;
    std::memcpy(&v, &u, 4);
    return v;
}

inline void expect_magic(std::istream& in, const char magic[4], const std::string& name) {
    char got[4];
    if (!in.read(got, 4) || std::memcmp(got, magic, 4) != 0)
        throw InputError(name + ": bad magic, expected " + std::string(magic, 4));
}

}  // namespace tetshell

#endif
