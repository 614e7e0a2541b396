#ifndef SBC_ALF_H_
#define SBC_ALF_H_

#include <array>
#include <vector>

#include "cu.h"
#include "plane.h"

namespace sbc {

inline constexpr int kAlfTaps = 13;       // 5x5 diamond
inline constexpr int kAlfUniqueCoeffs = 7;
inline constexpr int kAlfFracBits = 8;    // coefficients sum to 256

// Tap positions (dx, dy) of the diamond in raster order; tap i and tap
// 12 - i are point symmetric and share a coefficient.
extern const std::array<std::array<int, 2>, kAlfTaps> kAlfTapOffsets;

// Point-symmetric Wiener filter; coeff[0..5] are the six symmetric pairs,
// coeff[6] the center tap. Sum over all 13 taps is exactly 256.
struct AlfFilter {
  std::array<int32_t, kAlfUniqueCoeffs> coeff = {0, 0, 0, 0, 0, 0, 256};

  int32_t tap(int i) const { return coeff[i <= 5 ? i : (i == 6 ? 6 : 12 - i)]; }
  bool isIdentity() const {
    return coeff == std::array<int32_t, 7>{0, 0, 0, 0, 0, 0, 256};
  }
  int64_t tapSum() const {
    int64_t s = 0;
    for (int i = 0; i < kAlfTaps; ++i) s += tap(i);
    return s;
  }
};

// Least-squares fit of the diamond filter mapping rec to orig over luma
// samples with full support inside the statistics window. The normal
// equations get a diagonal regularization of 1e-6 * trace / 13; a system
// that is still singular yields the identity filter. Quantization to 8
// fractional bits repairs the sum on the center tap.
AlfFilter deriveWienerFilter(const Plane &orig, const Plane &rec,
                             Rect statsWindow);

// One on/off flag cell of a super-block, in coding order.
struct AlfCell {
  Rect rect;  // luma coordinates
};

// Flag cells for one SCU: the coded CU tree truncated at a minimum cell
// size of mCtu, visited depth first (z order).
std::vector<AlfCell> collectAlfCells(const std::vector<CuNodePtr> &forest,
                                     int mCtu);

// Per-super-block part of the frame ALF decision.
struct AlfScuDecision {
  bool superBlockFlag = false;
  bool allCuFlag = false;
  std::vector<uint8_t> cuFlags;  // one per cell; meaningful when signaled
};

struct AlfFrameDecision {
  bool sliceFlag = false;
  AlfFilter filter;
  std::vector<AlfScuDecision> scu;  // raster SCU order
};

// Improved signaling bit count for one super-block decision (the flag table:
// off = 1 bit, on+all = 2 bits, on+mixed = 2 + cells bits).
int64_t alfImprovedFlagBits(const AlfScuDecision &d);
// Fully explicit signaling of the same decision: super-block flag, all-CU
// flag and every cell flag transmitted with no inference.
int64_t alfPlainFlagBits(const AlfScuDecision &d);

// Filters the flagged cells of every plane (chroma reuses the luma flags at
// halved coordinates). Support outside the picture is edge replicated;
// filtering reads only pre-ALF samples.
void applyAlfFrame(Frame &rec, const AlfFilter &filter,
                   const std::vector<std::vector<AlfCell>> &cellsPerScu,
                   const AlfFrameDecision &dec);

struct AlfScuCost {
  AlfScuDecision decision;
  double branch1Cost = 0.0;  // per-cell min + flag bits
  double branch2Cost = 0.0;  // super-block off
  double chosenCost = 0.0;
};

// Fig-8 style decision: per cell keep min(on, off) distortion, compare the
// summed branch (plus improved-signaling bits) against super-block off.
AlfScuCost decideCuFlags(const Frame &orig, const Frame &rec,
                         const Frame &filtered,
                         const std::vector<AlfCell> &cells, Rect statsWindow,
                         double lambda);

}  // namespace sbc

#endif  // SBC_ALF_H_
