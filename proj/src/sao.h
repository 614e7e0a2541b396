#ifndef SBC_SAO_H_
#define SBC_SAO_H_

#include <array>
#include <vector>

#include "config.h"
#include "plane.h"

namespace sbc {

enum class SaoType { kEo0 = 0, kEo90 = 1, kEo45 = 2, kEo135 = 3, kBo = 4 };
enum class SaoBlockMode { kOff = 0, kNew = 1, kMergeLeft = 2, kMergeUp = 3 };

inline int saoMaxOffset(int bitDepth) {
  return (1 << (std::min(bitDepth, 10) - 5)) - 1;
}

struct SaoParams {
  SaoBlockMode mode = SaoBlockMode::kOff;
  SaoType type = SaoType::kEo0;
  // EO: offsets for categories 1..4 (1,2 nonnegative; 3,4 nonpositive).
  // BO: signed offsets for the four consecutive bands from bandPosition.
  std::array<int, 4> offsets = {0, 0, 0, 0};
  int bandPosition = 0;

  bool operator==(const SaoParams &o) const {
    return mode == o.mode && type == o.type && offsets == o.offsets &&
           bandPosition == o.bandPosition;
  }
};

// Per SAO block: one parameter set per plane (Y, U, V).
struct SaoBlockParams {
  std::array<SaoParams, 3> plane;
};

// Frame-level SAO state: the block grid (luma geometry) plus per-SCU split
// flags in the adaptive scheme. `coded` holds the signaled parameters
// (including merge modes); `resolved` the dereferenced ones actually applied.
struct SaoFrameParams {
  int blockSize = 0;   // luma SAO block size
  int blocksX = 0;
  int blocksY = 0;
  int bitDepth = 8;
  std::vector<uint8_t> scuSplit;          // adaptive scheme only, raster SCUs
  std::vector<SaoBlockParams> coded;      // raster over blocks
  std::vector<SaoBlockParams> resolved;   // raster over blocks

  int blockIndex(int bx, int by) const { return by * blocksX + bx; }
};

// Five-way local shape classification from two directional neighbors.
int eoCategory(int current, int n0, int n1);

// 32 equal intensity bands; band k covers [k << (B-5), ((k+1) << (B-5)) - 1].
inline int boBand(int sample, int bitDepth) { return sample >> (bitDepth - 5); }

// Per-category (EO, indices 1..4) or per-band (BO, 32 entries) statistics of
// orig - rec differences over a training window.
struct SaoStats {
  std::array<int64_t, 32> count{};
  std::array<int64_t, 32> sum{};
};

// Neighbor offsets for each EO class: 0deg, 90deg, 45deg, 135deg.
std::array<std::array<int, 2>, 2> eoNeighborOffsets(SaoType type);

// Collects classification statistics for one candidate type over the block
// window intersected with the statistics window (display area). EO
// classification is restricted to samples whose neighbors stay inside the
// SCU and the picture.
SaoStats collectSaoStats(const Plane &orig, const Plane &rec, Rect block,
                         Rect scu, Rect statsWindow, SaoType type,
                         int bitDepth);

// Chosen offsets with their exact SSE change and signaling cost; used by the
// per-block and per-SCU parameter decisions.
struct SaoCandidate {
  SaoParams params;
  int64_t deltaSse = 0;  // (filtered SSE) - (unfiltered SSE), from stats
  int64_t bits = 0;      // signaling bits for this parameter set
  double cost(double lambda) const {
    return static_cast<double>(deltaSse) + lambda * static_cast<double>(bits);
  }
};

// Evaluates OFF, NEW (all EO classes, BO over the 28 band start positions,
// offset magnitudes scanned from the estimate toward zero) and available
// merges; returns the minimum-cost candidate.
SaoCandidate chooseSaoParams(const Plane &orig, const Plane &rec, Rect block,
                             Rect scu, Rect statsWindow, int bitDepth,
                             double lambda, const SaoParams *mergeLeft,
                             const SaoParams *mergeUp);

// As above but restricted to OFF/NEW; used for the unsplit whole-SCU region.
SaoCandidate chooseSaoRegionParams(const Plane &orig, const Plane &rec,
                                   Rect region, Rect scu, Rect statsWindow,
                                   int bitDepth, double lambda);

// Applies resolved parameters to the reconstruction. Classification reads
// only pre-SAO samples.
void applySaoFrame(Frame &rec, const SaoFrameParams &sao, int mScu);

int64_t saoParamsBits(const SaoParams &p);

}  // namespace sbc

#endif  // SBC_SAO_H_
