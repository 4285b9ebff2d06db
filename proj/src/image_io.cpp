#include "covcal/error.hpp"
#include "covcal/image.hpp"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <memory>
#include <string>
#include <vector>

namespace covcal {

namespace {

[[noreturn]] void load_fail(ErrorKind kind, const std::filesystem::path& path,
                            const std::string& what) {
    throw Error(kind, "load_image: " + what + ": " + path.string());
}

int pgm_next_token(std::istream& in, std::string& token) {
    token.clear();
    int c = in.get();
    // Skip whitespace and '#' comment lines between header fields.
    while (c != EOF) {
        if (c == '#') {
            while (c != EOF && c != '\n') c = in.get();
        } else if (std::isspace(c)) {
            c = in.get();
        } else {
            break;
        }
    }
    while (c != EOF && !std::isspace(c)) {
        token.push_back(static_cast<char>(c));
        c = in.get();
    }
    return token.empty() ? EOF : 0;
}

int pgm_int_field(std::istream& in, const std::filesystem::path& path, const char* field) {
    std::string tok;
    if (pgm_next_token(in, tok) == EOF)
        load_fail(ErrorKind::format, path, std::string("truncated PGM header (") + field + ")");
    try {
        std::size_t used = 0;
        const int v = std::stoi(tok, &used);
        if (used != tok.size()) throw std::invalid_argument(tok);
        return v;
    } catch (const std::exception&) {
        load_fail(ErrorKind::format, path, std::string("bad PGM ") + field + " '" + tok + "'");
    }
}

GrayImage load_pgm(std::istream& in, const std::filesystem::path& path) {
    const int width = pgm_int_field(in, path, "width");
    const int height = pgm_int_field(in, path, "height");
    const int maxval = pgm_int_field(in, path, "maxval");
    if (width < 1 || height < 1)
        load_fail(ErrorKind::format, path, "zero-size image");
    if (maxval < 1 || maxval > 255)
        load_fail(ErrorKind::format, path, "only 8-bit PGM is supported");

    const std::size_t count = static_cast<std::size_t>(width) * height;
    std::vector<unsigned char> raw(count);
    in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(count));
    if (static_cast<std::size_t>(in.gcount()) != count)
        load_fail(ErrorKind::format, path, "truncated PGM pixel data");

    GrayImage img(width, height);
    for (std::size_t i = 0; i < count; ++i)
        img.pixels[i] = raw[i] / static_cast<double>(maxval);
    return img;
}

struct PngReader {
    png_structp png = nullptr;
    png_infop info = nullptr;
    std::FILE* fp = nullptr;

    ~PngReader() {
        if (png) png_destroy_read_struct(&png, info ? &info : nullptr, nullptr);
        if (fp) std::fclose(fp);
    }
};

GrayImage load_png(const std::filesystem::path& path, bool convert_grayscale) {
    PngReader r;
    r.fp = std::fopen(path.string().c_str(), "rb");
    if (!r.fp) load_fail(ErrorKind::io, path, "cannot open file");

    unsigned char sig[8];
    if (std::fread(sig, 1, 8, r.fp) != 8 || png_sig_cmp(sig, 0, 8) != 0)
        load_fail(ErrorKind::format, path, "not a PNG file");

    r.png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!r.png) load_fail(ErrorKind::format, path, "libpng init failed");
    r.info = png_create_info_struct(r.png);
    if (!r.info) load_fail(ErrorKind::format, path, "libpng init failed");

    if (setjmp(png_jmpbuf(r.png)))
        load_fail(ErrorKind::format, path, "corrupt PNG data");

    png_init_io(r.png, r.fp);
    png_set_sig_bytes(r.png, 8);
    // Normalize everything to 8-bit gray/RGB (+ possible alpha).
    png_read_png(r.png, r.info,
                 PNG_TRANSFORM_STRIP_16 | PNG_TRANSFORM_PACKING | PNG_TRANSFORM_EXPAND,
                 nullptr);

    const png_uint_32 width = png_get_image_width(r.png, r.info);
    const png_uint_32 height = png_get_image_height(r.png, r.info);
    const int channels = png_get_channels(r.png, r.info);
    if (width == 0 || height == 0) load_fail(ErrorKind::format, path, "zero-size image");
    if (channels < 1 || channels > 4)
        load_fail(ErrorKind::format, path, "unsupported channel layout");
    if (!convert_grayscale && channels >= 3)
        load_fail(ErrorKind::format, path, "color image where grayscale was required");

    png_bytepp rows = png_get_rows(r.png, r.info);
    GrayImage img(static_cast<int>(width), static_cast<int>(height));
    for (png_uint_32 y = 0; y < height; ++y) {
        const png_bytep row = rows[y];
        double* dst = img.row(static_cast<int>(y));
        for (png_uint_32 x = 0; x < width; ++x) {
            const png_bytep px = row + x * channels;
            double v;
            if (channels <= 2) {
                v = px[0];  // gray or gray+alpha
            } else {
                v = 0.299 * px[0] + 0.587 * px[1] + 0.114 * px[2];
            }
            dst[x] = std::clamp(v / 255.0, 0.0, 1.0);
        }
    }
    return img;
}

}  // namespace

GrayImage load_image(const std::filesystem::path& path, bool convert_grayscale) {
    std::ifstream in(path, std::ios::binary);
    if (!in) load_fail(ErrorKind::io, path, "cannot open file");

    char magic[2] = {0, 0};
    in.read(magic, 2);
    if (in.gcount() != 2) load_fail(ErrorKind::format, path, "file too short");

    if (magic[0] == 'P' && magic[1] == '5') return load_pgm(in, path);
    if (static_cast<unsigned char>(magic[0]) == 0x89 && magic[1] == 'P') {
        in.close();
        return load_png(path, convert_grayscale);
    }
    load_fail(ErrorKind::format, path, "unsupported format (want binary PGM or PNG)");
}

void save_pgm(const GrayImage& img, const std::filesystem::path& path) {
    if (img.width < 1 || img.height < 1)
        throw Error(ErrorKind::input, "save_pgm: empty image");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::io, "save_pgm: cannot open " + path.string());

    out << "P5\n" << img.width << " " << img.height << "\n255\n";
    std::vector<unsigned char> raw(img.pixels.size());
    for (std::size_t i = 0; i < img.pixels.size(); ++i) {
        raw[i] = static_cast<unsigned char>(
            std::lround(std::clamp(img.pixels[i], 0.0, 1.0) * 255.0));
    }
    out.write(reinterpret_cast<const char*>(raw.data()),
              static_cast<std::streamsize>(raw.size()));
    if (!out) throw Error(ErrorKind::io, "save_pgm: write failed for " + path.string());
}

}  // namespace covcal
