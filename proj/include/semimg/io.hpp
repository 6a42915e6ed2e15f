#pragma once

#include <filesystem>
#include <vector>

#include "semimg/image.hpp"

namespace semimg {

// Loads every PNG/PPM in `directory`, ordered by the numeric index embedded
// in the filename. Samples are scaled to [0,1] by division by 255.
FrameSequence load_frames(const std::filesystem::path& directory);

// Loads paired u_%05d.png / v_%05d.png flow images and decodes them with
// the symmetric map sample*40/255 - 20, clipped to [-20, 20].
std::vector<FlowField> load_flows(const std::filesystem::path& directory);

EncodedImage load_png(const std::filesystem::path& file);
void save_png(const std::filesystem::path& file, const EncodedImage& image);

// Raw little-endian float32 dump: magic "SEMI", u32 height, width, channels
// (16-byte header), then height*width*channels samples.
void write_float_dump(const std::filesystem::path& file, const Image& image);
Image read_float_dump(const std::filesystem::path& file);

// Feature-map stack dump: the float dump header extended with a trailing
// u32 T field (magic "SEMI", u32 height, width, channels, T), then T
// concatenated maps.
void write_stack_dump(const std::filesystem::path& file, const std::vector<Image>& stack);
std::vector<Image> read_stack_dump(const std::filesystem::path& file);

} // namespace semimg
