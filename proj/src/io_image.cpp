#include <png.h>

#include <csetjmp>
#include <cstdio>
#include <cstring>
#include <fstream>

// jpeglib.h expects FILE and size_t to be declared first.
#include <jpeglib.h>

#include "seedlab/io.hpp"

namespace seedlab::io {

namespace {

std::vector<unsigned char> read_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// ---------------------------------------------------------------------------
// PNG

struct PngSource {
  const unsigned char* data;
  std::size_t size;
  std::size_t offset;
};

void png_read_memory(png_structp png, png_bytep out, png_size_t length) {
  auto* src = static_cast<PngSource*>(png_get_io_ptr(png));
  if (src->offset + length > src->size) png_error(png, "unexpected end of PNG data");
  std::memcpy(out, src->data + src->offset, length);
  src->offset += length;
}

struct PngDecoded {
  png_uint_32 width = 0;
  png_uint_32 height = 0;
  std::vector<unsigned char> rgb;
  char message[200] = {};
};

void png_fail(png_structp png, png_const_charp msg) {
  auto* out = static_cast<PngDecoded*>(png_get_error_ptr(png));
  std::snprintf(out->message, sizeof(out->message), "%s", msg);
  png_longjmp(png, 1);
}

void png_warn(png_structp, png_const_charp) {}

// No C++ objects with destructors live between setjmp and any longjmp here.
bool decode_png(const std::vector<unsigned char>& bytes, PngDecoded& out) {
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, &out, png_fail, png_warn);
  if (!png) return false;
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    return false;
  }
  PngSource src{bytes.data(), bytes.size(), 0};
  png_bytep* volatile rows = nullptr;

  if (setjmp(png_jmpbuf(png))) {
    png_free(png, rows);
    png_destroy_read_struct(&png, &info, nullptr);
    return false;
  }
  png_set_read_fn(png, &src, png_read_memory);
  png_read_info(png, info);

  const int color = png_get_color_type(png, info);
  const int depth = png_get_bit_depth(png, info);
  if (depth == 16) png_set_strip_16(png);
  if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
  if (color == PNG_COLOR_TYPE_GRAY && depth < 8) png_set_expand_gray_1_2_4_to_8(png);
  if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
  if (color == PNG_COLOR_TYPE_GRAY || color == PNG_COLOR_TYPE_GRAY_ALPHA) png_set_gray_to_rgb(png);
  png_set_strip_alpha(png);
  png_set_interlace_handling(png);
  png_read_update_info(png, info);

  out.width = png_get_image_width(png, info);
  out.height = png_get_image_height(png, info);
  if (png_get_rowbytes(png, info) != static_cast<png_size_t>(out.width) * 3) {
    png_error(png, "unexpected PNG row layout");
  }
  out.rgb.resize(static_cast<std::size_t>(out.width) * out.height * 3);
  rows = static_cast<png_bytep*>(png_malloc(png, sizeof(png_bytep) * out.height));
  for (png_uint_32 y = 0; y < out.height; ++y) {
    rows[y] = out.rgb.data() + static_cast<std::size_t>(y) * out.width * 3;
  }
  png_read_image(png, rows);
  png_read_end(png, nullptr);
  png_free(png, rows);
  png_destroy_read_struct(&png, &info, nullptr);
  return true;
}

// ---------------------------------------------------------------------------
// JPEG

struct JpegError {
  jpeg_error_mgr base;
  std::jmp_buf jump;
  char message[JMSG_LENGTH_MAX];
};

void jpeg_fail(j_common_ptr cinfo) {
  auto* err = reinterpret_cast<JpegError*>(cinfo->err);
  (*cinfo->err->format_message)(cinfo, err->message);
  std::longjmp(err->jump, 1);
}

void jpeg_quiet(j_common_ptr cinfo, int level) {
  if (level < 0) ++cinfo->err->num_warnings;  // corrupt-data warnings
}

struct JpegDecoded {
  unsigned width = 0;
  unsigned height = 0;
  std::vector<unsigned char> rgb;
  char message[JMSG_LENGTH_MAX] = {};
  bool warned = false;
};

bool decode_jpeg(const std::vector<unsigned char>& bytes, JpegDecoded& out) {
  jpeg_decompress_struct cinfo;
  JpegError err;
  cinfo.err = jpeg_std_error(&err.base);
  err.base.error_exit = jpeg_fail;
  err.base.emit_message = jpeg_quiet;
  if (setjmp(err.jump)) {
    std::memcpy(out.message, err.message, sizeof(out.message));
    jpeg_destroy_decompress(&cinfo);
    return false;
  }
  jpeg_create_decompress(&cinfo);
  jpeg_mem_src(&cinfo, bytes.data(), static_cast<unsigned long>(bytes.size()));
  jpeg_read_header(&cinfo, TRUE);
  const bool gray = cinfo.jpeg_color_space == JCS_GRAYSCALE;
  cinfo.out_color_space = gray ? JCS_GRAYSCALE : JCS_RGB;
  jpeg_start_decompress(&cinfo);
  out.width = cinfo.output_width;
  out.height = cinfo.output_height;
  const unsigned comps = static_cast<unsigned>(cinfo.output_components);
  std::vector<unsigned char> line(static_cast<std::size_t>(out.width) * comps);
  out.rgb.resize(static_cast<std::size_t>(out.width) * out.height * 3);
  while (cinfo.output_scanline < cinfo.output_height) {
    const unsigned y = cinfo.output_scanline;
    JSAMPROW row = line.data();
    jpeg_read_scanlines(&cinfo, &row, 1);
    unsigned char* dst = out.rgb.data() + static_cast<std::size_t>(y) * out.width * 3;
    for (unsigned x = 0; x < out.width; ++x) {
      for (unsigned c = 0; c < 3; ++c) dst[3 * x + c] = line[comps * x + (comps == 1 ? 0 : c)];
    }
  }
  jpeg_finish_decompress(&cinfo);
  out.warned = err.base.num_warnings > 0;
  jpeg_destroy_decompress(&cinfo);
  return true;
}

RgbRaster to_raster(unsigned width, unsigned height, const std::vector<unsigned char>& rgb) {
  std::vector<Rgb> px(static_cast<std::size_t>(width) * height);
  for (std::size_t i = 0; i < px.size(); ++i) px[i] = {rgb[3 * i], rgb[3 * i + 1], rgb[3 * i + 2]};
  return RgbRaster(static_cast<int>(width), static_cast<int>(height), std::move(px));
}

template <typename Px>
void write_png(const std::filesystem::path& path, int width, int height, png_uint_32 format,
               const Px* data) {
  png_image image;
  std::memset(&image, 0, sizeof(image));
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(width);
  image.height = static_cast<png_uint_32>(height);
  image.format = format;
  if (!png_image_write_to_file(&image, path.string().c_str(), 0, data, 0, nullptr)) {
    const std::string msg = image.message;
    png_image_free(&image);
    throw Error(ErrorKind::Io, "cannot write " + path.string() + ": " + msg);
  }
}

}  // namespace

bool is_image_file(const std::filesystem::path& path) {
  std::string ext = path.extension().string();
  for (auto& c : ext) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return ext == ".png" || ext == ".jpg" || ext == ".jpeg";
}

RgbRaster load_image(const std::filesystem::path& path) {
  const auto bytes = read_bytes(path);
  static constexpr unsigned char kPngSig[] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};
  if (bytes.size() >= 8 && std::memcmp(bytes.data(), kPngSig, 8) == 0) {
    PngDecoded out;
    if (!decode_png(bytes, out) || out.width == 0 || out.height == 0) {
      throw Error(ErrorKind::CorruptFile, path.string() + ": " + out.message);
    }
    return to_raster(out.width, out.height, out.rgb);
  }
  if (bytes.size() >= 3 && bytes[0] == 0xFF && bytes[1] == 0xD8 && bytes[2] == 0xFF) {
    JpegDecoded out;
    if (!decode_jpeg(bytes, out) || out.warned || out.width == 0 || out.height == 0) {
      throw Error(ErrorKind::CorruptFile,
                  path.string() + ": " + (out.warned ? "truncated or corrupt JPEG data" : out.message));
    }
    return to_raster(out.width, out.height, out.rgb);
  }
  throw Error(ErrorKind::UnsupportedFormat, path.string() + ": not a PNG or JPEG file");
}

void save_png(const RgbRaster& img, const std::filesystem::path& path) {
  static_assert(sizeof(Rgb) == 3);
  write_png(path, img.width(), img.height(), PNG_FORMAT_RGB, img.pixels().data());
}

void save_png(const GrayRaster& img, const std::filesystem::path& path) {
  write_png(path, img.width(), img.height(), PNG_FORMAT_GRAY, img.pixels().data());
}

}  // namespace seedlab::io
