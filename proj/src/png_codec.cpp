#include <png.h>
#include <zlib.h>

#include <csetjmp>
#include <cstring>

#include "vpi/error.hpp"
#include "vpi/render.hpp"

namespace vpi {

namespace {

void append_bytes(png_structp png, png_bytep data, png_size_t length) {
  auto* out = static_cast<std::vector<std::uint8_t>*>(png_get_io_ptr(png));
  out->insert(out->end(), data, data + length);
}

void no_flush(png_structp) {}

}  // namespace

std::vector<std::uint8_t> encode_png(const Image& image) {
  if (image.width() <= 0 || image.height() <= 0) {
    throw Error(ErrorKind::kInvalidArgument, "cannot encode an empty image");
  }
  std::vector<std::uint8_t> out;
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (png == nullptr) throw Error(ErrorKind::kIoError, "png_create_write_struct failed");
  png_infop info = png_create_info_struct(png);
  if (info == nullptr) {
    png_destroy_write_struct(&png, nullptr);
    throw Error(ErrorKind::kIoError, "png_create_info_struct failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw Error(ErrorKind::kIoError, "libpng failed while encoding");
  }

  png_set_write_fn(png, &out, append_bytes, no_flush);
  png_set_IHDR(png, info, static_cast<png_uint_32>(image.width()),
               static_cast<png_uint_32>(image.height()), 8, PNG_COLOR_TYPE_RGB,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_set_filter(png, PNG_FILTER_TYPE_BASE, PNG_FILTER_SUB);
  png_set_compression_level(png, 6);
  png_set_compression_strategy(png, Z_DEFAULT_STRATEGY);
  png_write_info(png, info);

  const auto bytes = image.bytes();
  const std::size_t stride = static_cast<std::size_t>(image.width()) * 3;
  for (int row = 0; row < image.height(); ++row) {
    // libpng takes a non-const row pointer but only reads it.
    auto* ptr = const_cast<png_bytep>(bytes.data() + static_cast<std::size_t>(row) * stride);
    png_write_row(png, ptr);
  }
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  return out;
}

Image decode_png(std::span<const std::uint8_t> data) {
  png_image desc;
  std::memset(&desc, 0, sizeof(desc));
  desc.version = PNG_IMAGE_VERSION;
  if (png_image_begin_read_from_memory(&desc, data.data(), data.size()) == 0) {
    throw Error(ErrorKind::kParseError, std::string("png decode: ") + desc.message);
  }
  desc.format = PNG_FORMAT_RGB;
  Image img(static_cast<int>(desc.width), static_cast<int>(desc.height), Rgb{});
  if (png_image_finish_read(&desc, nullptr, img.mutable_bytes().data(), 0, nullptr) == 0) {
    png_image_free(&desc);
    throw Error(ErrorKind::kParseError, std::string("png decode: ") + desc.message);
  }
  return img;
}

}  // namespace vpi
