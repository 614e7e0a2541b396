#include "bitio.h"

namespace sbc {

void BitWriter::writeUe(uint32_t value) {
  // value + 1 in binary, preceded by (bit length - 1) zeros.
  uint64_t v = static_cast<uint64_t>(value) + 1;
  int len = 0;
  while ((v >> len) != 0) ++len;
  for (int i = 0; i < len - 1; ++i) writeBit(0);
  for (int i = len - 1; i >= 0; --i) writeBit((v >> i) & 1);
}

void BitWriter::writeSe(int32_t value) { writeUe(seToUe(value)); }

void BitWriter::appendWriter(const BitWriter &other) {
  size_t n = other.bitCount_;
  if ((bitCount_ & 7) == 0) {
    // Aligned fast path: splice whole bytes.
    size_t fullBytes = n >> 3;
    bytes_.insert(bytes_.end(), other.bytes_.begin(),
                  other.bytes_.begin() + fullBytes);
    bitCount_ += fullBytes * 8;
    for (size_t i = fullBytes * 8; i < n; ++i) {
      writeBit((other.bytes_[i >> 3] >> (7 - (i & 7))) & 1);
    }
    return;
  }
  for (size_t i = 0; i < n; ++i) {
    writeBit((other.bytes_[i >> 3] >> (7 - (i & 7))) & 1);
  }
}

uint32_t BitReader::readUe() {
  int zeros = 0;
  while (readBit() == 0) {
    if (++zeros > 32) {
      fail(ErrorCode::kBadData,
           "malformed exp-Golomb prefix at bit " + std::to_string(bitPos_));
    }
  }
  uint64_t v = 1;
  for (int i = 0; i < zeros; ++i) v = (v << 1) | static_cast<uint64_t>(readBit());
  return static_cast<uint32_t>(v - 1);
}

int32_t BitReader::readSe() {
  uint32_t u = readUe();
  // Inverse of seToUe.
  if (u & 1) return static_cast<int32_t>((u + 1) >> 1);
  return -static_cast<int32_t>(u >> 1);
}

int ueBits(uint32_t value) {
  uint64_t v = static_cast<uint64_t>(value) + 1;
  int len = 0;
  while ((v >> len) != 0) ++len;
  return 2 * len - 1;
}

int seBits(int32_t value) { return ueBits(seToUe(value)); }

}  // namespace sbc
