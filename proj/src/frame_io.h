#ifndef SBC_FRAME_IO_H_
#define SBC_FRAME_IO_H_

#include <iosfwd>
#include <string>
#include <vector>

#include "plane.h"

namespace sbc {

// Planar I420: per frame Y then U then V, frames concatenated. 10-bit files
// store each sample as 2 bytes little-endian, LSB aligned.
std::vector<Frame> readYuv(const std::string &path, int width, int height,
                           int bitDepth, int frameCount);

// Counts whole frames present in the file for the given geometry.
int probeYuvFrameCount(const std::string &path, int width, int height,
                       int bitDepth);

void writeYuv(const std::vector<Frame> &frames, const std::string &path);
void appendYuvFrame(std::ostream &out, const Frame &frame);

// Pads the frame so luma dimensions are multiples of mScu, replicating edge
// samples. The display size is preserved; padding is idempotent.
Frame padToScuGrid(const Frame &frame, int mScu);

}  // namespace sbc

#endif  // SBC_FRAME_IO_H_
