#include "sampleahead/idx.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <iterator>
#include <string>

#include "sampleahead/errors.hpp"

namespace sampleahead {

ImagePool::ImagePool(std::vector<Image> images, std::vector<std::size_t> labels)
    : images_(std::move(images)), labels_(std::move(labels)) {
    if (images_.size() != labels_.size()) throw ContractError("image and label counts differ");
    for (std::size_t i = 0; i < labels_.size(); ++i) {
        if (labels_[i] >= by_class_.size()) by_class_.resize(labels_[i] + 1);
        by_class_[labels_[i]].push_back(i);
    }
}

std::span<const std::size_t> ImagePool::of_class(std::size_t c) const noexcept {
    if (c >= by_class_.size()) return {};
    return by_class_[c];
}

ImagePool ImagePool::prefix(std::size_t n) const {
    if (n == 0 || n >= size()) return *this;
    return ImagePool(std::vector<Image>(images_.begin(), images_.begin() + static_cast<long>(n)),
                     std::vector<std::size_t>(labels_.begin(), labels_.begin() + static_cast<long>(n)));
}

namespace {

std::vector<unsigned char> read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open " + path.string());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::uint32_t read_be32(const std::vector<unsigned char>& bytes, std::size_t offset, const std::string& file) {
    if (offset + 4 > bytes.size()) throw ParseError(file, offset, "truncated header");
    return (std::uint32_t{bytes[offset]} << 24) | (std::uint32_t{bytes[offset + 1]} << 16) |
           (std::uint32_t{bytes[offset + 2]} << 8) | std::uint32_t{bytes[offset + 3]};
}

void put_be32(std::ofstream& out, std::uint32_t v) {
    const char b[4] = {static_cast<char>(v >> 24), static_cast<char>(v >> 16), static_cast<char>(v >> 8),
                       static_cast<char>(v)};
    out.write(b, 4);
}

std::string hex(std::uint32_t v) {
    char buf[11];
    std::snprintf(buf, sizeof(buf), "0x%08x", v);
    return buf;
}

}  // namespace

ImagePool load_idx(const std::filesystem::path& images_path, const std::filesystem::path& labels_path) {
    const std::string image_file = images_path.string();
    const std::string label_file = labels_path.string();
    const auto img = read_file(images_path);
    const auto lab = read_file(labels_path);

    const auto image_magic = read_be32(img, 0, image_file);
    if (image_magic != kIdxImageMagic) {
        throw ParseError(image_file, 0, "bad image magic " + hex(image_magic));
    }
    const std::size_t count = read_be32(img, 4, image_file);
    const std::size_t rows = read_be32(img, 8, image_file);
    const std::size_t cols = read_be32(img, 12, image_file);
    constexpr std::size_t image_header = 16;
    constexpr std::size_t limit = std::numeric_limits<std::size_t>::max() / 2;
    if (rows != 0 && cols > limit / rows) throw ParseError(image_file, 8, "image dimensions overflow");
    const std::size_t pixels = rows * cols;
    if (pixels != 0 && count > limit / pixels) throw ParseError(image_file, 4, "image count overflows");
    if (img.size() < image_header + count * pixels) {
        throw ParseError(image_file, img.size(),
                         "truncated payload: expected " + std::to_string(image_header + count * pixels) + " bytes");
    }

    const auto label_magic = read_be32(lab, 0, label_file);
    if (label_magic != kIdxLabelMagic) {
        throw ParseError(label_file, 0, "bad label magic " + hex(label_magic));
    }
    const std::size_t label_count = read_be32(lab, 4, label_file);
    if (label_count != count) {
        throw ParseError(label_file, 4,
                         "label count " + std::to_string(label_count) + " != image count " + std::to_string(count));
    }
    constexpr std::size_t label_header = 8;
    if (lab.size() < label_header + count) {
        throw ParseError(label_file, lab.size(),
                         "truncated payload: expected " + std::to_string(label_header + count) + " bytes");
    }

    std::vector<Image> images(count);
    std::vector<std::size_t> labels(count);
    for (std::size_t i = 0; i < count; ++i) {
        Image& im = images[i];
        im.rows = rows;
        im.cols = cols;
        im.pixels.resize(pixels);
        const std::size_t base = image_header + i * pixels;
        for (std::size_t p = 0; p < pixels; ++p) im.pixels[p] = static_cast<double>(img[base + p]) / 255.0;
        labels[i] = lab[label_header + i];
    }
    return ImagePool(std::move(images), std::move(labels));
}

void write_idx(const ImagePool& pool, const std::filesystem::path& images_path,
               const std::filesystem::path& labels_path) {
    std::ofstream img(images_path, std::ios::binary | std::ios::trunc);
    std::ofstream lab(labels_path, std::ios::binary | std::ios::trunc);
    if (!img || !lab) throw IoError("cannot write IDX files at " + images_path.string());
    const auto n = static_cast<std::uint32_t>(pool.size());
    put_be32(img, kIdxImageMagic);
    put_be32(img, n);
    put_be32(img, static_cast<std::uint32_t>(pool.rows()));
    put_be32(img, static_cast<std::uint32_t>(pool.cols()));
    put_be32(lab, kIdxLabelMagic);
    put_be32(lab, n);
    for (std::size_t i = 0; i < pool.size(); ++i) {
        for (double v : pool.image(i).pixels) {
            img.put(static_cast<char>(static_cast<unsigned char>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0))));
        }
        lab.put(static_cast<char>(pool.label(i)));
    }
    if (!img || !lab) throw IoError("short write on IDX files at " + images_path.string());
}

}  // namespace sampleahead
