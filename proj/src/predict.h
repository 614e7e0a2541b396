#ifndef SBC_PREDICT_H_
#define SBC_PREDICT_H_

#include <optional>
#include <vector>

#include "plane.h"

namespace sbc {

struct Mv {
  int x = 0;
  int y = 0;
  bool operator==(const Mv &o) const { return x == o.x && y == o.y; }
};

enum class IntraMode { kDc = 0, kHorizontal = 1, kVertical = 2 };

struct IntraNeighbors {
  std::vector<uint16_t> top;   // n samples when topAvailable
  std::vector<uint16_t> left;  // n samples when leftAvailable
  bool topAvailable = false;
  bool leftAvailable = false;
  int bitDepth = 8;
};

bool intraModeEligible(IntraMode mode, const IntraNeighbors &nb);

// DC averages the available neighbor rows (midpoint value when none are
// available); HORIZONTAL replicates the left column, VERTICAL the top row.
void intraPredict(IntraMode mode, const IntraNeighbors &nb, int n,
                  uint16_t *pred);

// Reference picture padded by `pad` samples of edge replication on every
// side so that any motion-displaced window within the search range is valid.
struct RefPlanes {
  Plane luma;
  Plane cb;
  Plane cr;
  int pad = 0;

  static RefPlanes fromFrame(const Frame &f, int pad);
  const Plane &plane(int comp) const {
    return comp == 0 ? luma : (comp == 1 ? cb : cr);
  }
};

struct MotionResult {
  Mv mv;
  uint64_t sad = 0;
};

// Exhaustive full search over the +-range window, clipped to the padded
// reference bounds. Ties are broken by smaller |dx|+|dy|, then smaller dy,
// then smaller dx.
MotionResult motionSearch(const Plane &orig, Rect block, const RefPlanes &ref,
                          int range);

// Copies the mv-displaced w x h window of the selected component. Chroma
// callers must pass chroma coordinates and the halved vector.
void motionCompensate(const RefPlanes &ref, int comp, int x, int y, int w,
                      int h, Mv mv, uint16_t *pred);

// Chroma displacement for a luma vector: components halved, rounding toward
// zero.
inline Mv chromaMv(Mv mv) { return Mv{mv.x / 2, mv.y / 2}; }

// Component-wise median of the available neighbors. With none the predictor
// is (0,0); with exactly one it is that vector; with two the missing third
// candidate is taken as (0,0).
Mv predictMv(const std::optional<Mv> &left, const std::optional<Mv> &top,
             const std::optional<Mv> &topRight);

void buildResidual(const uint16_t *orig, const uint16_t *pred, int count,
                   int32_t *residual);

}  // namespace sbc

#endif  // SBC_PREDICT_H_
