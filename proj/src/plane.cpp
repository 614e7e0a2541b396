#include "plane.h"

#include <cstring>

namespace sbc {

Plane::Plane(int width, int height, int bitDepth, uint16_t fill)
    : width_(width), height_(height), bitDepth_(bitDepth) {
  if (width <= 0 || height <= 0) {
    fail(ErrorCode::kInvalidArgument, "plane dimensions must be positive");
  }
  if (bitDepth != 8 && bitDepth != 10) {
    fail(ErrorCode::kUnsupported, "bit depth must be 8 or 10");
  }
  samples_.assign(static_cast<size_t>(width) * height, fill);
}

void Plane::checkWindow(int x, int y, int w, int h) const {
  if (x < 0 || y < 0 || w <= 0 || h <= 0 || x + w > width_ ||
      y + h > height_) {
    fail(ErrorCode::kInvalidArgument,
         "block window (" + std::to_string(x) + "," + std::to_string(y) +
             " " + std::to_string(w) + "x" + std::to_string(h) +
             ") outside plane " + std::to_string(width_) + "x" +
             std::to_string(height_));
  }
}

std::vector<uint16_t> Plane::readBlock(int x, int y, int w, int h) const {
  checkWindow(x, y, w, h);
  std::vector<uint16_t> out(static_cast<size_t>(w) * h);
  for (int j = 0; j < h; ++j) {
    std::memcpy(out.data() + static_cast<size_t>(j) * w, row(y + j) + x,
                sizeof(uint16_t) * w);
  }
  return out;
}

void Plane::writeBlock(int x, int y, int w, int h, const uint16_t *block) {
  checkWindow(x, y, w, h);
  for (int j = 0; j < h; ++j) {
    std::memcpy(row(y + j) + x, block + static_cast<size_t>(j) * w,
                sizeof(uint16_t) * w);
  }
}

Frame::Frame(int width, int height, int bitDepth, uint16_t fill)
    : luma(width, height, bitDepth, fill),
      cb(ceilDiv(width, 2), ceilDiv(height, 2), bitDepth, fill),
      cr(ceilDiv(width, 2), ceilDiv(height, 2), bitDepth, fill),
      displayWidth(width),
      displayHeight(height) {}

uint64_t sseInWindow(const Plane &a, const Plane &b, Rect r) {
  assert(a.sameGeometry(b));
  // Clip the window to the plane; callers pass CU rectangles that may stick
  // out of the display area.
  int x0 = clip3(0, a.width(), r.x);
  int y0 = clip3(0, a.height(), r.y);
  int x1 = clip3(0, a.width(), r.x + r.w);
  int y1 = clip3(0, a.height(), r.y + r.h);
  uint64_t sse = 0;
  for (int y = y0; y < y1; ++y) {
    const uint16_t *pa = a.row(y);
    const uint16_t *pb = b.row(y);
    for (int x = x0; x < x1; ++x) {
      int64_t d = static_cast<int64_t>(pa[x]) - pb[x];
      sse += static_cast<uint64_t>(d * d);
    }
  }
  return sse;
}

}  // namespace sbc
