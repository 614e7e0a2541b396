#include "frame_io.h"

#include <fstream>

namespace sbc {

namespace {

size_t planeBytes(const Plane &p, int w, int h) {
  return static_cast<size_t>(w) * h * (p.bitDepth() > 8 ? 2 : 1);
}

void readPlane(std::istream &in, Plane &plane, int frameIdx,
               const char *component) {
  const int w = plane.width();
  const int h = plane.height();
  const bool wide = plane.bitDepth() > 8;
  std::vector<uint8_t> buf(planeBytes(plane, w, 1));
  for (int y = 0; y < h; ++y) {
    in.read(reinterpret_cast<char *>(buf.data()),
            static_cast<std::streamsize>(buf.size()));
    if (static_cast<size_t>(in.gcount()) != buf.size()) {
      fail(ErrorCode::kBadData,
           std::string("truncated YUV file: frame ") +
               std::to_string(frameIdx) + ", " + component + " plane");
    }
    uint16_t *dst = plane.row(y);
    if (wide) {
      for (int x = 0; x < w; ++x) {
        uint16_t v = static_cast<uint16_t>(buf[2 * x] | (buf[2 * x + 1] << 8));
        if (v > plane.maxValue()) {
          fail(ErrorCode::kBadData,
               "sample value " + std::to_string(v) + " out of range for " +
                   std::to_string(plane.bitDepth()) + "-bit input (frame " +
                   std::to_string(frameIdx) + ")");
        }
        dst[x] = v;
      }
    } else {
      for (int x = 0; x < w; ++x) dst[x] = buf[x];
    }
  }
}

void writePlaneWindow(std::ostream &out, const Plane &plane, int w, int h) {
  const bool wide = plane.bitDepth() > 8;
  std::vector<uint8_t> buf(static_cast<size_t>(w) * (wide ? 2 : 1));
  for (int y = 0; y < h; ++y) {
    const uint16_t *src = plane.row(y);
    if (wide) {
      for (int x = 0; x < w; ++x) {
        buf[2 * x] = static_cast<uint8_t>(src[x] & 0xff);
        buf[2 * x + 1] = static_cast<uint8_t>(src[x] >> 8);
      }
    } else {
      for (int x = 0; x < w; ++x) buf[x] = static_cast<uint8_t>(src[x]);
    }
    out.write(reinterpret_cast<const char *>(buf.data()),
              static_cast<std::streamsize>(buf.size()));
  }
}

Plane padPlane(const Plane &src, int srcW, int srcH, int dstW, int dstH) {
  Plane dst(dstW, dstH, src.bitDepth());
  for (int y = 0; y < dstH; ++y) {
    const uint16_t *s = src.row(std::min(y, srcH - 1));
    uint16_t *d = dst.row(y);
    for (int x = 0; x < srcW && x < dstW; ++x) d[x] = s[x];
    uint16_t edge = s[std::min(srcW, dstW) - 1];
    for (int x = srcW; x < dstW; ++x) d[x] = edge;
  }
  return dst;
}

}  // namespace

std::vector<Frame> readYuv(const std::string &path, int width, int height,
                           int bitDepth, int frameCount) {
  if (width <= 0 || height <= 0 || frameCount < 0) {
    fail(ErrorCode::kInvalidArgument, "bad YUV geometry");
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    fail(ErrorCode::kIo, "cannot open input file " + path);
  }
  std::vector<Frame> frames;
  frames.reserve(frameCount);
  for (int i = 0; i < frameCount; ++i) {
    Frame f(width, height, bitDepth);
    readPlane(in, f.luma, i, "luma");
    readPlane(in, f.cb, i, "chroma U");
    readPlane(in, f.cr, i, "chroma V");
    frames.push_back(std::move(f));
  }
  return frames;
}

int probeYuvFrameCount(const std::string &path, int width, int height,
                       int bitDepth) {
  std::ifstream in(path, std::ios::binary | std::ios::ate);
  if (!in) {
    fail(ErrorCode::kIo, "cannot open input file " + path);
  }
  size_t bytesPerSample = bitDepth > 8 ? 2 : 1;
  size_t frameBytes =
      bytesPerSample * (static_cast<size_t>(width) * height +
                        2u * ceilDiv(width, 2) * ceilDiv(height, 2));
  return static_cast<int>(static_cast<size_t>(in.tellg()) / frameBytes);
}

void appendYuvFrame(std::ostream &out, const Frame &frame) {
  writePlaneWindow(out, frame.luma, frame.displayWidth, frame.displayHeight);
  writePlaneWindow(out, frame.cb, frame.chromaDisplayWidth(),
                   frame.chromaDisplayHeight());
  writePlaneWindow(out, frame.cr, frame.chromaDisplayWidth(),
                   frame.chromaDisplayHeight());
}

void writeYuv(const std::vector<Frame> &frames, const std::string &path) {
  for (size_t i = 1; i < frames.size(); ++i) {
    if (frames[i].displayWidth != frames[0].displayWidth ||
        frames[i].displayHeight != frames[0].displayHeight ||
        frames[i].bitDepth() != frames[0].bitDepth()) {
      fail(ErrorCode::kInvalidArgument,
           "frames in one sequence must share dimensions and bit depth");
    }
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    fail(ErrorCode::kIo, "cannot open output file " + path);
  }
  for (const Frame &f : frames) appendYuvFrame(out, f);
  out.flush();
  if (!out) {
    fail(ErrorCode::kIo, "write failed for " + path);
  }
}

Frame padToScuGrid(const Frame &frame, int mScu) {
  assert(isPowerOfTwo(mScu));
  int dw = frame.displayWidth;
  int dh = frame.displayHeight;
  int pw = ceilDiv(dw, mScu) * mScu;
  int ph = ceilDiv(dh, mScu) * mScu;
  Frame out;
  out.displayWidth = dw;
  out.displayHeight = dh;
  out.luma = padPlane(frame.luma, frame.luma.width(), frame.luma.height(), pw,
                      ph);
  out.cb = padPlane(frame.cb, frame.cb.width(), frame.cb.height(), pw / 2,
                    ph / 2);
  out.cr = padPlane(frame.cr, frame.cr.width(), frame.cr.height(), pw / 2,
                    ph / 2);
  return out;
}

}  // namespace sbc
