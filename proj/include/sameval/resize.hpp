#pragma once

#include "sameval/types.hpp"

namespace sameval {

// Plain bilinear resize with half-pixel center alignment, no padding and no
// aspect preservation. Output keeps the source R and bit depth provenance.
GrayImage resize_bilinear(const GrayImage& src, int out_width, int out_height);

}  // namespace sameval
