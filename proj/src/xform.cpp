#include "xform.h"

#include <vector>

namespace sbc {

namespace {

// Frozen basis magnitudes m[q] ~ round(64*sqrt(2)*cos(q*pi/64)), q in 1..31.
// Six entries deviate from plain rounding by +-1 (q = 8, 21, 23, 24, 25, 26)
// so that row norms stay uniform and rows stay near orthogonal; the
// generation rule is kept as a test oracle.
constexpr std::array<int16_t, 32> kBasisMagnitude = {
    0,  90, 90, 90, 89, 88, 87, 85, 83, 82, 80, 78, 75, 73, 70, 67,
    64, 61, 57, 54, 50, 46, 43, 38, 36, 31, 25, 22, 18, 13, 9,  4};

// entry(k, j) of the n-point matrix for k >= 1 is +-m[q] where the phase
// q = k * (2j + 1) * (32 / n), reduced into a quarter period of cos. Row 0
// is the all-64 DC row.
constexpr int16_t matrixEntry(int n, int k, int j) {
  if (k == 0) return 64;
  int p = (k * (2 * j + 1) * (32 / n)) % 128;
  if (p >= 64) p = 128 - p;
  if (p > 32) return static_cast<int16_t>(-kBasisMagnitude[64 - p]);
  return kBasisMagnitude[p];
}

template <int N>
constexpr std::array<int16_t, N * N> buildMatrix() {
  std::array<int16_t, N * N> m{};
  for (int k = 0; k < N; ++k) {
    for (int j = 0; j < N; ++j) m[k * N + j] = matrixEntry(N, k, j);
  }
  return m;
}

constexpr auto kMatrix4 = buildMatrix<4>();
constexpr auto kMatrix8 = buildMatrix<8>();
constexpr auto kMatrix16 = buildMatrix<16>();
constexpr auto kMatrix32 = buildMatrix<32>();

int32_t shiftRound(int64_t v, int shift) {
  assert(shift >= 1);
  return static_cast<int32_t>((v + (int64_t{1} << (shift - 1))) >> shift);
}

}  // namespace

const int16_t *coreMatrix(int n) {
  switch (n) {
    case 4:
      return kMatrix4.data();
    case 8:
      return kMatrix8.data();
    case 16:
      return kMatrix16.data();
    case 32:
      return kMatrix32.data();
    default:
      fail(ErrorCode::kInvalidArgument,
           "unsupported transform size " + std::to_string(n));
  }
}

QuantParams deriveQuantParams(int qp, bool sliceIsIntra, int n, int bitDepth) {
  if (qp < 0 || qp > 51) {
    fail(ErrorCode::kInvalidArgument, "qp out of range 0..51");
  }
  coreMatrix(n);  // validates n
  QuantParams q;
  q.qp = qp;
  q.n = n;
  q.bitDepth = bitDepth;
  q.sliceIsIntra = sliceIsIntra;
  const int per = qp / 6;
  const int rem = qp % 6;
  q.fwdScale = kQuantScale[rem];
  q.invScale = kDequantScale[rem];
  q.iQBits = 29 - bitDepth - intLog2(n) + per;
  q.roundOffset = (int64_t{1} << q.iQBits) / (sliceIsIntra ? 3 : 6);
  q.dequantShift = bitDepth + intLog2(n) - 9 - per;
  q.qstepNum = int64_t{1} << (per + 14);
  q.qstepDen = kQuantScale[rem];
  return q;
}

void forwardTransform(const int32_t *residual, int n, int bitDepth,
                      int32_t *coeff) {
  const int16_t *c = coreMatrix(n);
  const int log2n = intLog2(n);
  const int shift1 = log2n - 1 + bitDepth - 8;
  const int shift2 = log2n + 6;
  std::vector<int32_t> stage1(static_cast<size_t>(n) * n);
  // Stage 1: C * X, transforming each column.
  for (int k = 0; k < n; ++k) {
    for (int j = 0; j < n; ++j) {
      int64_t acc = 0;
      for (int m = 0; m < n; ++m) {
        acc += static_cast<int64_t>(c[k * n + m]) * residual[m * n + j];
      }
      int32_t v = shiftRound(acc, shift1);
      assert(v >= INT16_MIN && v <= INT16_MAX);
      stage1[k * n + j] = clip16(v);
    }
  }
  // Stage 2: (stage1) * C^T, transforming each row.
  for (int k = 0; k < n; ++k) {
    for (int j = 0; j < n; ++j) {
      int64_t acc = 0;
      for (int m = 0; m < n; ++m) {
        acc += static_cast<int64_t>(stage1[k * n + m]) * c[j * n + m];
      }
      int32_t v = shiftRound(acc, shift2);
      assert(v >= INT16_MIN && v <= INT16_MAX);
      coeff[k * n + j] = clip16(v);
    }
  }
}

void quantizeBlock(const int32_t *coeff, const QuantParams &qp,
                   int32_t *levels) {
  const int count = qp.n * qp.n;
  for (int i = 0; i < count; ++i) {
    int64_t mag = std::abs(static_cast<int64_t>(coeff[i]));
    int64_t level = (mag * qp.fwdScale + qp.roundOffset) >> qp.iQBits;
    levels[i] = coeff[i] < 0 ? -clip16(level) : clip16(level);
  }
}

void dequantizeBlock(const int32_t *levels, const QuantParams &qp,
                     int32_t *coeff) {
  const int count = qp.n * qp.n;
  const int shift = qp.dequantShift;
  if (shift > 0) {
    const int64_t add = int64_t{1} << (shift - 1);
    for (int i = 0; i < count; ++i) {
      coeff[i] =
          clip16((static_cast<int64_t>(levels[i]) * qp.invScale + add) >>
                 shift);
    }
  } else {
    for (int i = 0; i < count; ++i) {
      coeff[i] =
          clip16(static_cast<int64_t>(levels[i]) * qp.invScale << (-shift));
    }
  }
}

void inverseTransform(const int32_t *coeff, int n, int bitDepth,
                      int32_t *residual) {
  const int16_t *c = coreMatrix(n);
  const int shift2 = 20 - bitDepth;
  std::vector<int32_t> stage1(static_cast<size_t>(n) * n);
  // Stage 1: C^T * Y, shift 7, clamp to 16 bits.
  for (int m = 0; m < n; ++m) {
    for (int j = 0; j < n; ++j) {
      int64_t acc = 0;
      for (int k = 0; k < n; ++k) {
        acc += static_cast<int64_t>(c[k * n + m]) * coeff[k * n + j];
      }
      stage1[m * n + j] = clip16(shiftRound(acc, 7));
    }
  }
  // Stage 2: (stage1) * C.
  for (int m = 0; m < n; ++m) {
    for (int j = 0; j < n; ++j) {
      int64_t acc = 0;
      for (int k = 0; k < n; ++k) {
        acc += static_cast<int64_t>(stage1[m * n + k]) * c[k * n + j];
      }
      residual[m * n + j] = clip16(shiftRound(acc, shift2));
    }
  }
}

}  // namespace sbc
