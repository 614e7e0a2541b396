#ifndef SBC_BITIO_H_
#define SBC_BITIO_H_

#include <cstddef>
#include <vector>

#include "common.h"

namespace sbc {

// MSB-first bit sink. Bytes are padded with zero bits only when finished or
// explicitly aligned.
class BitWriter {
 public:
  void clear() {
    bytes_.clear();
    bitCount_ = 0;
  }

  void writeBit(int bit) {
    size_t byteIdx = bitCount_ >> 3;
    if (byteIdx == bytes_.size()) bytes_.push_back(0);
    if (bit) bytes_[byteIdx] |= static_cast<uint8_t>(0x80u >> (bitCount_ & 7));
    ++bitCount_;
  }

  // Writes the n low bits of value, most significant first. n in 0..32.
  void writeBits(uint32_t value, int n) {
    assert(n >= 0 && n <= 32);
    for (int i = n - 1; i >= 0; --i) writeBit((value >> i) & 1u);
  }

  void writeUe(uint32_t value);
  void writeSe(int32_t value);

  void byteAlign() {
    while (bitCount_ & 7) writeBit(0);
  }

  void appendWriter(const BitWriter &other);

  size_t bitCount() const { return bitCount_; }
  // Valid once byte-aligned (trailing partial byte is zero padded in store).
  const std::vector<uint8_t> &bytes() const { return bytes_; }

 private:
  std::vector<uint8_t> bytes_;
  size_t bitCount_ = 0;
};

// MSB-first bit source over an externally owned buffer. All read paths throw
// Error(kBadData) with the offending bit position on truncation or malformed
// codes.
class BitReader {
 public:
  BitReader(const uint8_t *data, size_t size)
      : data_(data), bitSize_(size * 8) {}

  int readBit() {
    if (bitPos_ >= bitSize_) {
      fail(ErrorCode::kBadData,
           "bitstream truncated at bit " + std::to_string(bitPos_));
    }
    int bit = (data_[bitPos_ >> 3] >> (7 - (bitPos_ & 7))) & 1;
    ++bitPos_;
    return bit;
  }

  uint32_t readBits(int n) {
    assert(n >= 0 && n <= 32);
    uint32_t v = 0;
    for (int i = 0; i < n; ++i) v = (v << 1) | static_cast<uint32_t>(readBit());
    return v;
  }

  uint32_t readUe();
  int32_t readSe();

  void byteAlign() { bitPos_ = (bitPos_ + 7) & ~size_t{7}; }

  size_t bitPos() const { return bitPos_; }
  size_t bitSize() const { return bitSize_; }
  size_t bitsRemaining() const { return bitSize_ - bitPos_; }

 private:
  const uint8_t *data_;
  size_t bitSize_;
  size_t bitPos_ = 0;
};

// Number of bits an order-0 exp-Golomb code spends on value.
int ueBits(uint32_t value);
int seBits(int32_t value);

// Signed exp-Golomb value mapping: v <= 0 -> -2v, v > 0 -> 2v - 1.
constexpr uint32_t seToUe(int32_t v) {
  return v <= 0 ? static_cast<uint32_t>(-2 * static_cast<int64_t>(v))
                : static_cast<uint32_t>(2 * static_cast<int64_t>(v) - 1);
}

}  // namespace sbc

#endif  // SBC_BITIO_H_
