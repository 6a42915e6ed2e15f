#include "semimg/io.hpp"

#include <algorithm>
#include <cstring>
#include <fstream>
#include <map>
#include <optional>
#include <string>

#include <opencv2/imgcodecs.hpp>

namespace semimg {

namespace fs = std::filesystem;

namespace {

// Last run of digits in the stem, e.g. "frame_0042" -> 42.
std::optional<long> numeric_index(const std::string& stem) {
    int end = -1;
    for (int i = static_cast<int>(stem.size()) - 1; i >= 0; --i) {
        if (std::isdigit(static_cast<unsigned char>(stem[i]))) { end = i; break; }
    }
    if (end < 0) return std::nullopt;
    int begin = end;
    while (begin > 0 && std::isdigit(static_cast<unsigned char>(stem[begin - 1]))) --begin;
    return std::stol(stem.substr(begin, end - begin + 1));
}

bool is_raster(const fs::path& p) {
    auto ext = p.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), ::tolower);
    return ext == ".png" || ext == ".ppm" || ext == ".pgm";
}

Frame decode_frame(const fs::path& file) {
    cv::Mat mat = cv::imread(file.string(), cv::IMREAD_UNCHANGED);
    if (mat.empty())
        throw Error(ErrorKind::DecodeError, "undecodable file: " + file.string());
    if (mat.depth() != CV_8U)
        throw Error(ErrorKind::DecodeError, "expected 8-bit samples: " + file.string());
    const int ch = mat.channels();
    if (ch != 1 && ch != 3)
        throw Error(ErrorKind::DecodeError, "unsupported channel count: " + file.string());
    Frame f(mat.rows, mat.cols, ch);
    for (int y = 0; y < mat.rows; ++y) {
        const std::uint8_t* row = mat.ptr<std::uint8_t>(y);
        for (int x = 0; x < mat.cols; ++x) {
            for (int c = 0; c < ch; ++c) {
                // OpenCV stores BGR; internal order is RGB.
                const int src = (ch == 3) ? (2 - c) : c;
                f.at(y, x, c) = row[x * ch + src] / 255.0;
            }
        }
    }
    return f;
}

std::vector<fs::path> sorted_rasters(const fs::path& directory) {
    std::vector<std::pair<long, fs::path>> entries;
    if (fs::exists(directory)) {
        for (const auto& it : fs::directory_iterator(directory)) {
            if (!it.is_regular_file() || !is_raster(it.path())) continue;
            auto idx = numeric_index(it.path().stem().string());
            entries.emplace_back(idx.value_or(0), it.path());
        }
    }
    std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first < b.first;
        return a.second.filename().string() < b.second.filename().string();
    });
    std::vector<fs::path> files;
    files.reserve(entries.size());
    for (auto& e : entries) files.push_back(e.second);
    return files;
}

} // namespace

FrameSequence load_frames(const fs::path& directory) {
    const auto files = sorted_rasters(directory);
    if (files.empty())
        throw Error(ErrorKind::NoFrames, "no frames in " + directory.string());
    FrameSequence seq;
    seq.reserve(files.size());
    for (const auto& file : files) {
        Frame f = decode_frame(file);
        if (!seq.empty() && !f.same_shape(seq.front()))
            throw Error(ErrorKind::DimensionMismatch,
                        "frame dimensions differ: " + file.string());
        seq.push_back(std::move(f));
    }
    return seq;
}

std::vector<FlowField> load_flows(const fs::path& directory) {
    std::map<long, fs::path> u_files, v_files;
    for (const auto& file : sorted_rasters(directory)) {
        const auto stem = file.stem().string();
        const auto idx = numeric_index(stem);
        if (!idx) continue;
        if (stem.rfind("u_", 0) == 0) u_files[*idx] = file;
        else if (stem.rfind("v_", 0) == 0) v_files[*idx] = file;
    }
    if (u_files.empty() && v_files.empty())
        throw Error(ErrorKind::NoFrames, "no flow images in " + directory.string());
    std::vector<FlowField> flows;
    for (const auto& [idx, u_path] : u_files) {
        auto vit = v_files.find(idx);
        if (vit == v_files.end())
            throw Error(ErrorKind::PairMismatch,
                        "missing v image for index " + std::to_string(idx));
        Frame u = decode_frame(u_path);
        Frame v = decode_frame(vit->second);
        if (u.channels != 1 || v.channels != 1 || !u.same_shape(v))
            throw Error(ErrorKind::PairMismatch,
                        "u/v pair mismatch at index " + std::to_string(idx));
        FlowField field;
        field.height = u.height;
        field.width = u.width;
        field.u.resize(u.data.size());
        field.v.resize(v.data.size());
        for (std::size_t i = 0; i < u.data.size(); ++i) {
            field.u[i] = decode_flow_sample(static_cast<std::uint8_t>(u.data[i] * 255.0 + 0.5));
            field.v[i] = decode_flow_sample(static_cast<std::uint8_t>(v.data[i] * 255.0 + 0.5));
        }
        flows.push_back(std::move(field));
    }
    if (v_files.size() != u_files.size())
        throw Error(ErrorKind::PairMismatch, "unpaired v images present");
    return flows;
}

EncodedImage load_png(const fs::path& file) {
    cv::Mat mat = cv::imread(file.string(), cv::IMREAD_UNCHANGED);
    if (mat.empty() || mat.depth() != CV_8U)
        throw Error(ErrorKind::DecodeError, "undecodable file: " + file.string());
    EncodedImage img;
    img.height = mat.rows;
    img.width = mat.cols;
    img.channels = mat.channels();
    img.data.resize(static_cast<std::size_t>(mat.rows) * mat.cols * mat.channels());
    for (int y = 0; y < mat.rows; ++y) {
        const std::uint8_t* row = mat.ptr<std::uint8_t>(y);
        for (int x = 0; x < mat.cols; ++x)
            for (int c = 0; c < img.channels; ++c) {
                const int src = (img.channels == 3) ? (2 - c) : c;
                img.data[(static_cast<std::size_t>(y) * mat.cols + x) * img.channels + c] =
                    row[x * img.channels + src];
            }
    }
    return img;
}

void save_png(const fs::path& file, const EncodedImage& image) {
    const int type = image.channels == 3 ? CV_8UC3 : CV_8UC1;
    cv::Mat mat(image.height, image.width, type);
    for (int y = 0; y < image.height; ++y) {
        std::uint8_t* row = mat.ptr<std::uint8_t>(y);
        for (int x = 0; x < image.width; ++x)
            for (int c = 0; c < image.channels; ++c) {
                const int dst = (image.channels == 3) ? (2 - c) : c;
                row[x * image.channels + dst] =
                    image.data[(static_cast<std::size_t>(y) * image.width + x) * image.channels + c];
            }
    }
    if (!cv::imwrite(file.string(), mat))
        throw Error(ErrorKind::IoError, "cannot write " + file.string());
}

namespace {

void write_u32(std::ostream& os, std::uint32_t v) {
    unsigned char b[4] = {static_cast<unsigned char>(v & 0xff),
                          static_cast<unsigned char>((v >> 8) & 0xff),
                          static_cast<unsigned char>((v >> 16) & 0xff),
                          static_cast<unsigned char>((v >> 24) & 0xff)};
    os.write(reinterpret_cast<const char*>(b), 4);
}

std::uint32_t read_u32(std::istream& is) {
    unsigned char b[4];
    is.read(reinterpret_cast<char*>(b), 4);
    return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
           (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}

void write_samples(std::ostream& os, const std::vector<double>& data) {
    for (double d : data) {
        float f = static_cast<float>(d);
        std::uint32_t bits;
        std::memcpy(&bits, &f, 4);
        write_u32(os, bits);
    }
}

void read_samples(std::istream& is, std::vector<double>& data) {
    for (double& d : data) {
        std::uint32_t bits = read_u32(is);
        float f;
        std::memcpy(&f, &bits, 4);
        d = f;
    }
}

} // namespace

void write_float_dump(const fs::path& file, const Image& image) {
    std::ofstream os(file, std::ios::binary);
    if (!os) throw Error(ErrorKind::IoError, "cannot open " + file.string());
    os.write("SEMI", 4);
    write_u32(os, static_cast<std::uint32_t>(image.height));
    write_u32(os, static_cast<std::uint32_t>(image.width));
    write_u32(os, static_cast<std::uint32_t>(image.channels));
    write_samples(os, image.data);
    if (!os) throw Error(ErrorKind::IoError, "write failed: " + file.string());
}

Image read_float_dump(const fs::path& file) {
    std::ifstream is(file, std::ios::binary);
    char magic[4] = {};
    is.read(magic, 4);
    if (!is || std::memcmp(magic, "SEMI", 4) != 0)
        throw Error(ErrorKind::DecodeError, "bad float dump: " + file.string());
    const int h = static_cast<int>(read_u32(is));
    const int w = static_cast<int>(read_u32(is));
    const int c = static_cast<int>(read_u32(is));
    Image img(h, w, c);
    read_samples(is, img.data);
    if (!is) throw Error(ErrorKind::DecodeError, "truncated float dump: " + file.string());
    return img;
}

void write_stack_dump(const fs::path& file, const std::vector<Image>& stack) {
    if (stack.empty())
        throw Error(ErrorKind::EmptyInput, "empty stack");
    std::ofstream os(file, std::ios::binary);
    if (!os) throw Error(ErrorKind::IoError, "cannot open " + file.string());
    os.write("SEMI", 4);
    write_u32(os, static_cast<std::uint32_t>(stack.front().height));
    write_u32(os, static_cast<std::uint32_t>(stack.front().width));
    write_u32(os, static_cast<std::uint32_t>(stack.front().channels));
    write_u32(os, static_cast<std::uint32_t>(stack.size()));
    for (const auto& img : stack) {
        if (!img.same_shape(stack.front()))
            throw Error(ErrorKind::DimensionMismatch, "stack slices differ in shape");
        write_samples(os, img.data);
    }
    if (!os) throw Error(ErrorKind::IoError, "write failed: " + file.string());
}

std::vector<Image> read_stack_dump(const fs::path& file) {
    std::ifstream is(file, std::ios::binary);
    char magic[4] = {};
    is.read(magic, 4);
    if (!is || std::memcmp(magic, "SEMI", 4) != 0)
        throw Error(ErrorKind::DecodeError, "bad stack dump: " + file.string());
    const int h = static_cast<int>(read_u32(is));
    const int w = static_cast<int>(read_u32(is));
    const int c = static_cast<int>(read_u32(is));
    const std::uint32_t t = read_u32(is);
    std::vector<Image> stack;
    stack.reserve(t);
    for (std::uint32_t i = 0; i < t; ++i) {
        Image img(h, w, c);
        read_samples(is, img.data);
        stack.push_back(std::move(img));
    }
    if (!is) throw Error(ErrorKind::DecodeError, "truncated stack dump: " + file.string());
    return stack;
}

} // namespace semimg
