#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "wasmio/errors.hpp"

namespace wasmio::wasm {

// Bounds-checked little-endian / LEB128 reader over a byte span. All
// failures throw DecodeError carrying the offending offset.
class ByteReader {
  public:
    explicit ByteReader(std::span<const uint8_t> data, std::size_t base_offset = 0)
        : data_(data), base_(base_offset) {}

    std::size_t pos() const { return base_ + cur_; }
    std::size_t remaining() const { return data_.size() - cur_; }
    bool eof() const { return cur_ == data_.size(); }

    uint8_t u8() {
        need(1, "unexpected end of input");
        return data_[cur_++];
    }

    uint8_t peek_u8() const {
        if (cur_ >= data_.size()) throw DecodeError(pos(), "unexpected end of input");
        return data_[cur_];
    }

    uint32_t u32_fixed() {
        need(4, "unexpected end of input");
        uint32_t v = static_cast<uint32_t>(data_[cur_]) | (static_cast<uint32_t>(data_[cur_ + 1]) << 8) |
                     (static_cast<uint32_t>(data_[cur_ + 2]) << 16) |
                     (static_cast<uint32_t>(data_[cur_ + 3]) << 24);
        cur_ += 4;
        return v;
    }

    uint32_t leb_u32() {
        uint32_t result = 0;
        for (int shift = 0; shift < 35; shift += 7) {
            uint8_t byte = u8();
            if (shift == 28 && (byte & 0x70) != 0)
                throw DecodeError(pos() - 1, "LEB128 u32 overflow");
            result |= static_cast<uint32_t>(byte & 0x7F) << shift;
            if ((byte & 0x80) == 0) return result;
        }
        throw DecodeError(pos(), "LEB128 u32 too long");
    }

    int32_t leb_i32() {
        int64_t result = 0;
        int shift = 0;
        for (;;) {
            if (shift >= 35) throw DecodeError(pos(), "LEB128 i32 too long");
            uint8_t byte = u8();
            if (shift == 28) {
                uint8_t bits = (byte >> 3) & 0x0F;
                if (bits != 0 && bits != 0x0F) throw DecodeError(pos() - 1, "LEB128 i32 overflow");
            }
            result |= static_cast<int64_t>(byte & 0x7F) << shift;
            shift += 7;
            if ((byte & 0x80) == 0) {
                if (shift < 64 && (byte & 0x40)) result |= -(int64_t{1} << shift);
                return static_cast<int32_t>(result);
            }
        }
    }

    std::span<const uint8_t> bytes(std::size_t n, const char* what = "bytes") {
        need(n, what);
        auto out = data_.subspan(cur_, n);
        cur_ += n;
        return out;
    }

    std::string name() {
        uint32_t len = leb_u32();
        auto b = bytes(len, "name payload truncated");
        return std::string(reinterpret_cast<const char*>(b.data()), b.size());
    }

    ByteReader sub(std::size_t n, const char* what = "section payload truncated") {
        std::size_t at = pos();
        return ByteReader(bytes(n, what), at);
    }

    void check(bool cond, const char* msg) const {
        if (!cond) throw DecodeError(pos(), msg);
    }

  private:
    void need(std::size_t n, const char* msg) const {
        if (data_.size() - cur_ < n) throw DecodeError(base_ + data_.size(), msg);
    }

    std::span<const uint8_t> data_;
    std::size_t base_;
    std::size_t cur_ = 0;
};

class ByteWriter {
  public:
    void u8(uint8_t v) { out_.push_back(v); }

    void u16_le(uint16_t v) {
        out_.push_back(static_cast<uint8_t>(v));
        out_.push_back(static_cast<uint8_t>(v >> 8));
    }

    void u32_le(uint32_t v) {
        for (int i = 0; i < 4; ++i) out_.push_back(static_cast<uint8_t>(v >> (8 * i)));
    }

    void leb_u32(uint32_t v) {
        do {
            uint8_t byte = v & 0x7F;
            v >>= 7;
            if (v != 0) byte |= 0x80;
            out_.push_back(byte);
        } while (v != 0);
    }

    void leb_i32(int32_t value) {
        int32_t v = value;
        for (;;) {
            uint8_t byte = v & 0x7F;
            v >>= 7;
            bool done = (v == 0 && (byte & 0x40) == 0) || (v == -1 && (byte & 0x40) != 0);
            if (!done) byte |= 0x80;
            out_.push_back(byte);
            if (done) return;
        }
    }

    void bytes(std::span<const uint8_t> b) { out_.insert(out_.end(), b.begin(), b.end()); }

    void name(const std::string& s) {
        leb_u32(static_cast<uint32_t>(s.size()));
        out_.insert(out_.end(), s.begin(), s.end());
    }

    std::size_t size() const { return out_.size(); }
    std::vector<uint8_t> take() { return std::move(out_); }
    const std::vector<uint8_t>& data() const { return out_; }

  private:
    std::vector<uint8_t> out_;
};

}  // namespace wasmio::wasm
