#ifndef SBC_RECON_H_
#define SBC_RECON_H_

#include <optional>
#include <vector>

#include "config.h"
#include "cu.h"
#include "plane.h"
#include "xform.h"

namespace sbc {

// Per-MCU bookkeeping of what has been coded so far in the current frame:
// drives intra neighbor availability and motion vector prediction. The
// encoder and decoder fill it in the same causal order.
class CodedGrid {
 public:
  struct Cell {
    uint8_t coded = 0;
    uint8_t hasMv = 0;  // inter or skip
    Mv mv;
  };

  CodedGrid() = default;
  CodedGrid(int frameWidth, int frameHeight, int mcuSize);

  void clear();
  void markCu(Rect lumaRect, bool hasMv, Mv mv);

  bool rangeCoded(int x, int y, int w, int h) const;  // luma sample coords
  // Motion vector of the cell covering the sample, when inter coded.
  std::optional<Mv> mvAt(int x, int y) const;

  // Trial snapshot support.
  std::vector<Cell> saveWindow(Rect lumaRect) const;
  void restoreWindow(Rect lumaRect, const std::vector<Cell> &saved);

 private:
  const Cell *cellAt(int x, int y) const;
  int gridW_ = 0;
  int gridH_ = 0;
  int log2Mcu_ = 3;
  std::vector<Cell> cells_;
};

struct ReconContext {
  Frame *recon = nullptr;
  CodedGrid *grid = nullptr;
  const RefPlanes *ref = nullptr;  // null for intra frames
  int bitDepth = 8;
  bool sliceIsIntra = false;
  // Quantization parameters per transform size (index log2(n) - 2).
  std::array<QuantParams, 4> quant;

  const QuantParams &quantFor(int n) const { return quant[intLog2(n) - 2]; }
};

ReconContext makeReconContext(Frame *recon, CodedGrid *grid,
                              const RefPlanes *ref, int qp, bool sliceIsIntra,
                              int bitDepth);

// Intra reference samples for an n x n block of the given component,
// gathered from the working reconstruction with grid-derived availability.
IntraNeighbors gatherIntraNeighbors(const ReconContext &ctx, int comp,
                                    Rect lumaRect);

// Motion vector predictor for a CU from its left, top and top-right coded
// neighbors.
Mv motionVectorPredictor(const CodedGrid &grid, Rect lumaRect);

// Dequantize + inverse transform + add prediction, clip, write back, and
// mark the grid. `leaf` must carry its mode, mvd/intra mode and TU levels;
// the actual motion vector is re-derived from the predictor. Used by the
// encoder (search and replay) and the decoder alike.
void reconstructLeaf(const CuNode &leaf, ReconContext &ctx);

// Encoder helper: renders the prediction, codes the residual through the
// forward chain into leaf->tu and reconstructs exactly like
// reconstructLeaf. Returns the derived motion vector used (inter/skip).
Mv codeLeafResiduals(CuNode &leaf, const Frame &orig, ReconContext &ctx);

}  // namespace sbc

#endif  // SBC_RECON_H_
