#ifndef SBC_PLANE_H_
#define SBC_PLANE_H_

#include <vector>

#include "common.h"

namespace sbc {

// One sample plane, row major, no inter-row padding. Samples always fit the
// declared bit depth: 0 <= s <= (1 << bitDepth) - 1.
class Plane {
 public:
  Plane() = default;
  Plane(int width, int height, int bitDepth, uint16_t fill = 0);

  int width() const { return width_; }
  int height() const { return height_; }
  int bitDepth() const { return bitDepth_; }
  int maxValue() const { return (1 << bitDepth_) - 1; }
  bool empty() const { return samples_.empty(); }

  uint16_t at(int x, int y) const {
    assert(x >= 0 && x < width_ && y >= 0 && y < height_);
    return samples_[static_cast<size_t>(y) * width_ + x];
  }
  void set(int x, int y, uint16_t v) {
    assert(x >= 0 && x < width_ && y >= 0 && y < height_);
    samples_[static_cast<size_t>(y) * width_ + x] = v;
  }
  // Clamped fetch, used where filters reach past the edge (edge replication).
  uint16_t atClamped(int x, int y) const {
    return at(clip3(0, width_ - 1, x), clip3(0, height_ - 1, y));
  }

  const uint16_t *row(int y) const {
    assert(y >= 0 && y < height_);
    return samples_.data() + static_cast<size_t>(y) * width_;
  }
  uint16_t *row(int y) {
    assert(y >= 0 && y < height_);
    return samples_.data() + static_cast<size_t>(y) * width_;
  }

  const std::vector<uint16_t> &samples() const { return samples_; }
  std::vector<uint16_t> &samples() { return samples_; }

  // Copy out / write back a rectangular window. Throws when the window does
  // not lie fully inside the plane.
  std::vector<uint16_t> readBlock(int x, int y, int w, int h) const;
  void writeBlock(int x, int y, int w, int h, const uint16_t *block);

  bool sameGeometry(const Plane &o) const {
    return width_ == o.width_ && height_ == o.height_ &&
           bitDepth_ == o.bitDepth_;
  }

  void checkWindow(int x, int y, int w, int h) const;

 private:
  int width_ = 0;
  int height_ = 0;
  int bitDepth_ = 8;
  std::vector<uint16_t> samples_;
};

// 4:2:0 frame. Chroma planes are ceil(luma/2) in each dimension. The display
// size records the pre-padding geometry; the planes may be larger once the
// frame has been padded to the SCU grid.
struct Frame {
  Plane luma;
  Plane cb;
  Plane cr;
  int displayWidth = 0;
  int displayHeight = 0;

  Frame() = default;
  Frame(int width, int height, int bitDepth, uint16_t fill = 0);

  int bitDepth() const { return luma.bitDepth(); }
  int chromaDisplayWidth() const { return ceilDiv(displayWidth, 2); }
  int chromaDisplayHeight() const { return ceilDiv(displayHeight, 2); }

  Plane &plane(int comp) { return comp == 0 ? luma : (comp == 1 ? cb : cr); }
  const Plane &plane(int comp) const {
    return comp == 0 ? luma : (comp == 1 ? cb : cr);
  }

  bool sameGeometry(const Frame &o) const {
    return luma.sameGeometry(o.luma) && cb.sameGeometry(o.cb) &&
           cr.sameGeometry(o.cr) && displayWidth == o.displayWidth &&
           displayHeight == o.displayHeight;
  }
};

uint64_t sseInWindow(const Plane &a, const Plane &b, Rect r);

}  // namespace sbc

#endif  // SBC_PLANE_H_
