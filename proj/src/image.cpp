#include "namedcurves/image.hpp"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <memory>
#include <string>
#include <system_error>

#include "namedcurves/error.hpp"

namespace namedcurves {

ImageBuffer::ImageBuffer(int width, int height, double fill)
    : width_(width), height_(height) {
  if (width < 1 || height < 1) {
    throw Error(ErrorKind::kInvalidArgument, "image dimensions must be positive");
  }
  data_.assign(pixel_count() * 3, fill);
}

ImageBuffer::ImageBuffer(int width, int height, std::vector<double> data)
    : width_(width), height_(height), data_(std::move(data)) {
  if (width < 1 || height < 1) {
    throw Error(ErrorKind::kInvalidArgument, "image dimensions must be positive");
  }
  if (data_.size() != pixel_count() * 3) {
    throw Error(ErrorKind::kDimensionMismatch, "image data length does not match width*height*3");
  }
}

void ImageBuffer::set_pixel(std::size_t p, const Rgb& rgb) {
  data_[3 * p] = rgb[0];
  data_[3 * p + 1] = rgb[1];
  data_[3 * p + 2] = rgb[2];
}

void ImageBuffer::clamp() {
  for (double& v : data_) v = clamp01(v);
}

void require_same_shape(const ImageBuffer& a, const ImageBuffer& b, const char* context) {
  if (!a.same_shape(b)) {
    throw Error(ErrorKind::kDimensionMismatch,
                std::string(context) + ": " + std::to_string(a.width()) + "x" +
                    std::to_string(a.height()) + " vs " + std::to_string(b.width()) + "x" +
                    std::to_string(b.height()));
  }
}

namespace {

struct FileCloser {
  void operator()(std::FILE* f) const { std::fclose(f); }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

[[noreturn]] void png_error_handler(png_structp, png_const_charp msg) {
  throw Error(ErrorKind::kUnsupportedFormat, std::string("libpng: ") + msg);
}

void png_warning_handler(png_structp, png_const_charp) {}

}  // namespace

ImageBuffer load_png(const std::filesystem::path& path) {
  std::error_code ec;
  if (!std::filesystem::is_regular_file(path, ec)) {
    throw Error(ErrorKind::kFileNotFound, "no such file: " + path.string());
  }
  FilePtr file(std::fopen(path.c_str(), "rb"));
  if (!file) throw Error(ErrorKind::kIoError, "cannot open " + path.string());

  png_byte sig[8];
  if (std::fread(sig, 1, 8, file.get()) != 8 || png_sig_cmp(sig, 0, 8) != 0) {
    throw Error(ErrorKind::kUnsupportedFormat, "not a PNG file: " + path.string());
  }

  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, png_error_handler,
                                           png_warning_handler);
  if (!png) throw Error(ErrorKind::kIoError, "png_create_read_struct failed");
  png_infop info = png_create_info_struct(png);
  struct ReadGuard {
    png_structp* png;
    png_infop* info;
    ~ReadGuard() { png_destroy_read_struct(png, info, nullptr); }
  } guard{&png, &info};
  if (!info) throw Error(ErrorKind::kIoError, "png_create_info_struct failed");

  png_init_io(png, file.get());
  png_set_sig_bytes(png, 8);
  png_read_info(png, info);

  const int color_type = png_get_color_type(png, info);
  const int bit_depth = png_get_bit_depth(png, info);
  if (color_type == PNG_COLOR_TYPE_PALETTE) {
    throw Error(ErrorKind::kUnsupportedFormat, "palette PNG not supported: " + path.string());
  }
  if (bit_depth != 8 && bit_depth != 16) {
    throw Error(ErrorKind::kUnsupportedFormat,
                "unsupported bit depth " + std::to_string(bit_depth) + ": " + path.string());
  }
  if (color_type == PNG_COLOR_TYPE_GRAY || color_type == PNG_COLOR_TYPE_GRAY_ALPHA) {
    png_set_gray_to_rgb(png);
  }
  if (color_type & PNG_COLOR_MASK_ALPHA) png_set_strip_alpha(png);
  if (bit_depth == 16) png_set_swap(png);  // little-endian hosts
  png_read_update_info(png, info);

  const int width = static_cast<int>(png_get_image_width(png, info));
  const int height = static_cast<int>(png_get_image_height(png, info));
  const std::size_t rowbytes = png_get_rowbytes(png, info);
  std::vector<png_byte> raw(rowbytes * height);
  std::vector<png_bytep> rows(height);
  for (int y = 0; y < height; ++y) rows[y] = raw.data() + y * rowbytes;
  png_read_image(png, rows.data());
  png_read_end(png, nullptr);

  ImageBuffer img(width, height);
  auto out = img.data();
  if (bit_depth == 8) {
    for (int y = 0; y < height; ++y) {
      for (int i = 0; i < width * 3; ++i) {
        out[static_cast<std::size_t>(y) * width * 3 + i] = rows[y][i] / 255.0;
      }
    }
  } else {
    for (int y = 0; y < height; ++y) {
      const auto* row = reinterpret_cast<const std::uint16_t*>(rows[y]);
      for (int i = 0; i < width * 3; ++i) {
        out[static_cast<std::size_t>(y) * width * 3 + i] = row[i] / 65535.0;
      }
    }
  }
  return img;
}

unsigned char quantize8(double v) {
  return static_cast<unsigned char>(std::lround(clamp01(v) * 255.0));
}

void save_png(const ImageBuffer& img, const std::filesystem::path& path) {
  if (img.empty()) throw Error(ErrorKind::kInvalidArgument, "cannot save an empty image");
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    FilePtr file(std::fopen(tmp.c_str(), "wb"));
    if (!file) throw Error(ErrorKind::kIoError, "cannot open for writing: " + tmp.string());

    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, png_error_handler,
                                              png_warning_handler);
    if (!png) throw Error(ErrorKind::kIoError, "png_create_write_struct failed");
    png_infop info = png_create_info_struct(png);
    struct WriteGuard {
      png_structp* png;
      png_infop* info;
      ~WriteGuard() { png_destroy_write_struct(png, info); }
    } guard{&png, &info};

    const int w = img.width();
    const int h = img.height();
    std::vector<png_byte> row(static_cast<std::size_t>(w) * 3);
    try {
      png_init_io(png, file.get());
      png_set_IHDR(png, info, w, h, 8, PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE,
                   PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
      png_write_info(png, info);
      const auto src = img.data();
      for (int y = 0; y < h; ++y) {
        for (int i = 0; i < w * 3; ++i) {
          row[i] = quantize8(src[static_cast<std::size_t>(y) * w * 3 + i]);
        }
        png_write_row(png, row.data());
      }
      png_write_end(png, nullptr);
    } catch (const Error& e) {
      file.reset();
      std::filesystem::remove(tmp);
      throw Error(ErrorKind::kIoError, e.what());
    }
    if (std::fflush(file.get()) != 0) {
      file.reset();
      std::filesystem::remove(tmp);
      throw Error(ErrorKind::kIoError, "write failed: " + tmp.string());
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw Error(ErrorKind::kIoError, "cannot rename into " + path.string() + ": " + ec.message());
  }
}

ImageBuffer downsample_to(const ImageBuffer& img, int max_side) {
  if (max_side < 1) throw Error(ErrorKind::kInvalidArgument, "max_side must be positive");
  const int longest = std::max(img.width(), img.height());
  if (longest <= max_side) return img;
  const int factor = (longest + max_side - 1) / max_side;
  const int ow = (img.width() + factor - 1) / factor;
  const int oh = (img.height() + factor - 1) / factor;
  ImageBuffer out(ow, oh);
  for (int oy = 0; oy < oh; ++oy) {
    const int y1 = std::min(img.height(), (oy + 1) * factor);
    for (int ox = 0; ox < ow; ++ox) {
      const int x1 = std::min(img.width(), (ox + 1) * factor);
      double sum[3] = {0.0, 0.0, 0.0};
      int count = 0;
      for (int y = oy * factor; y < y1; ++y) {
        for (int x = ox * factor; x < x1; ++x) {
          for (int c = 0; c < 3; ++c) sum[c] += img.at(x, y, c);
          ++count;
        }
      }
      for (int c = 0; c < 3; ++c) out.at(ox, oy, c) = sum[c] / count;
    }
  }
  return out;
}

}  // namespace namedcurves
