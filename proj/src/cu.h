#ifndef SBC_CU_H_
#define SBC_CU_H_

#include <array>
#include <memory>
#include <vector>

#include "predict.h"

namespace sbc {

enum class CuMode { kSkip = 0, kInter = 1, kIntra = 2 };

// Quantized levels of one transform unit, raster order. Blocks larger than
// the maximum transform size are coded as a raster grid of such units.
struct TuLevels {
  int n = 0;
  bool cbf = false;
  std::vector<int16_t> levels;  // n*n entries when cbf
};

struct CuNode {
  int x = 0;  // luma position within the frame
  int y = 0;
  int size = 0;
  bool split = false;
  std::array<std::unique_ptr<CuNode>, 4> child;  // TL, TR, BL, BR

  CuMode mode = CuMode::kIntra;
  IntraMode intraMode = IntraMode::kDc;
  Mv mvd;          // inter only; skip derives its vector from the predictor
  std::vector<TuLevels> tu[3];  // per component, raster TU order
};

using CuNodePtr = std::unique_ptr<CuNode>;

struct RdCost {
  uint64_t distortion = 0;
  int64_t bits = 0;
  double cost = 0.0;

  static RdCost of(uint64_t d, int64_t b, double lambda) {
    return RdCost{d, b, static_cast<double>(d) + lambda * static_cast<double>(b)};
  }
  // Cost first, rate as the tie-break.
  bool better(const RdCost &o) const {
    if (cost != o.cost) return cost < o.cost;
    return bits < o.bits;
  }
  RdCost plus(const RdCost &o) const {
    return RdCost{distortion + o.distortion, bits + o.bits, cost + o.cost};
  }
};

// Recursive quadrant (TL, TR, BL, BR) traversal of a power-of-two grid.
std::vector<std::pair<int, int>> zScanOrder(int gridWidth, int gridHeight);

// Transform-unit tiling: blocks wider than kMaxTuSize are split into a
// raster grid of kMaxTuSize units.
inline int tuSizeFor(int blockSize) {
  return blockSize > 32 ? 32 : blockSize;
}

}  // namespace sbc

#endif  // SBC_CU_H_
