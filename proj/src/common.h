#ifndef SBC_COMMON_H_
#define SBC_COMMON_H_

#include <cassert>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace sbc {

enum class ErrorCode {
  kInvalidArgument,
  kIo,
  kBadData,
  kUnsupported,
  kInternal,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string &what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string &msg) {
  throw Error(code, msg);
}

template <typename T>
constexpr T clip3(T lo, T hi, T v) {
  return v < lo ? lo : (v > hi ? hi : v);
}

// Clamp to a signed 16-bit value. All transform-path intermediates are
// required to stay within this range.
constexpr int32_t clip16(int64_t v) {
  return static_cast<int32_t>(clip3<int64_t>(INT16_MIN, INT16_MAX, v));
}

constexpr bool isPowerOfTwo(int v) { return v > 0 && (v & (v - 1)) == 0; }

constexpr int intLog2(int v) {
  int n = 0;
  while ((1 << n) < v) ++n;
  return n;
}

constexpr int ceilDiv(int a, int b) { return (a + b - 1) / b; }

struct Rect {
  int x = 0;
  int y = 0;
  int w = 0;
  int h = 0;
};

}  // namespace sbc

#endif  // SBC_COMMON_H_
