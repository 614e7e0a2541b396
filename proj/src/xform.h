#ifndef SBC_XFORM_H_
#define SBC_XFORM_H_

#include <array>
#include <cstdint>

#include "common.h"

namespace sbc {

inline constexpr int kMaxTuSize = 32;
inline constexpr int kMinTuSize = 4;

// Forward quantizer scaling factors f(QP%6) and their de-quantization
// counterparts g(QP%6). f(i) * g(i) is approximately 2^20.
inline constexpr std::array<int32_t, 6> kQuantScale = {26214, 23302, 20560,
                                                       18396, 16384, 14564};
inline constexpr std::array<int32_t, 6> kDequantScale = {40, 45, 51, 57, 64,
                                                         72};

// Integer core transform matrix for n in {4, 8, 16, 32}, row major. Row k
// approximates the scaled DCT-II basis 64*sqrt(N)*T(k, j); the nominal
// scale factor 1/(64*sqrt(N)) per application is folded into the shift
// schedule of the transform stages.
const int16_t *coreMatrix(int n);

struct QuantParams {
  int qp = 0;
  int n = 0;
  int bitDepth = 8;
  bool sliceIsIntra = false;
  int iQBits = 0;          // forward quantizer shift
  int64_t roundOffset = 0; // deadzone offset applied before the shift
  int32_t fwdScale = 0;    // f(qp % 6)
  int32_t invScale = 0;    // g(qp % 6)
  int dequantShift = 0;    // may be negative (left shift on dequant)
  // Exact quantization step as a fraction: 2^(qp/6) * 2^14 / f(qp%6).
  int64_t qstepNum = 0;
  int64_t qstepDen = 1;
  double qstep() const {
    return static_cast<double>(qstepNum) / static_cast<double>(qstepDen);
  }
};

QuantParams deriveQuantParams(int qp, bool sliceIsIntra, int n, int bitDepth);

// Two-stage integer forward transform of an n x n residual block. Every
// stage output is rounded (add half, arithmetic shift) and clamped to 16
// signed bits. residual and coeff are n*n row-major arrays.
void forwardTransform(const int32_t *residual, int n, int bitDepth,
                      int32_t *coeff);

// level = sign(y) * ((|y| * f + roundOffset) >> iQBits), clamped to 16 bits.
void quantizeBlock(const int32_t *coeff, const QuantParams &qp,
                   int32_t *levels);

// Inverse scaling back into the forward-transform output domain, including
// the residual scale folded in from the inverse transform derivation.
void dequantizeBlock(const int32_t *levels, const QuantParams &qp,
                     int32_t *coeff);

void inverseTransform(const int32_t *coeff, int n, int bitDepth,
                      int32_t *residual);

}  // namespace sbc

#endif  // SBC_XFORM_H_
