// Copyright Contributors to the voxup project
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <voxup/error.h>

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>
#include <string>
#include <type_traits>

namespace voxup {

// Little-endian fixed-width encoding shared by the VMSH, SVOX and VMSK formats.

template <typename T>
std::array<char, sizeof(T)>
toLittleEndian(T value) {
    static_assert(std::is_trivially_copyable_v<T>);
    std::array<char, sizeof(T)> bytes{};
    std::memcpy(bytes.data(), &value, sizeof(T));
    if constexpr (std::endian::native == std::endian::big)
        std::reverse(bytes.begin(), bytes.end());
    return bytes;
}

class BinaryWriter {
public:
    explicit BinaryWriter(std::ostream &out) : mOut(out) {}

    template <typename T>
    void write(T value) {
        const auto bytes = toLittleEndian(value);
        mOut.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    }

    void writeMagic(const char (&magic)[4]) { mOut.write(magic, 4); }

private:
    std::ostream &mOut;
};

class BinaryReader {
public:
    BinaryReader(std::istream &in, std::string source) : mIn(in), mSource(std::move(source)) {
        const auto pos = mIn.tellg();
        mIn.seekg(0, std::ios::end);
        mSize = static_cast<std::uint64_t>(mIn.tellg() - pos);
        mIn.seekg(pos);
    }

    template <typename T>
    T read() {
        std::array<char, sizeof(T)> bytes{};
        mIn.read(bytes.data(), static_cast<std::streamsize>(bytes.size()));
        if (mIn.gcount() != static_cast<std::streamsize>(bytes.size()))
            throw Error(ErrorCode::ParseError, mSource + ": unexpected end of file");
        mConsumed += sizeof(T);
        if constexpr (std::endian::native == std::endian::big)
            std::reverse(bytes.begin(), bytes.end());
        T value;
        std::memcpy(&value, bytes.data(), sizeof(T));
        return value;
    }

    void expectMagic(const char (&magic)[4]) {
        char got[4] = {};
        mIn.read(got, 4);
        if (mIn.gcount() != 4 || !std::equal(got, got + 4, magic))
            throw Error(ErrorCode::ParseError, mSource + ": bad magic, expected '" + std::string(magic, 4) + "'");
        mConsumed += 4;
    }

    /// Rejects element counts that cannot fit in the remaining bytes.
    std::size_t checkedCount(std::uint64_t count, std::uint64_t elementBytes) const {
        const std::uint64_t remaining = mSize - std::min(mSize, mConsumed);
        if (elementBytes != 0 && count > remaining / elementBytes)
            throw Error(ErrorCode::ParseError, mSource + ": declared count " + std::to_string(count) +
                                                   " exceeds file size");
        return static_cast<std::size_t>(count);
    }

    bool atEnd() const { return mConsumed == mSize; }

private:
    std::istream &mIn;
    std::string mSource;
    std::uint64_t mSize = 0;
    std::uint64_t mConsumed = 0;
};

} // namespace voxup
