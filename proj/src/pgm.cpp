#include "ssikit/pgm.hpp"

#include <cctype>
#include <string>

#include "ssikit/error.hpp"
#include "ssikit/util.hpp"

namespace ssikit {

namespace {

// Skips whitespace and '#' comments, returns the next header token.
// pos is advanced past the token.
std::string next_token(const std::string& data, std::size_t& pos, const std::string& where) {
    while (pos < data.size()) {
        char c = data[pos];
        if (c == '#') {
            while (pos < data.size() && data[pos] != '\n') ++pos;
        } else if (std::isspace(static_cast<unsigned char>(c))) {
            ++pos;
        } else {
            break;
        }
    }
    std::size_t start = pos;
    while (pos < data.size() && !std::isspace(static_cast<unsigned char>(data[pos])) &&
           data[pos] != '#')
        ++pos;
    if (start == pos) throw IoError("truncated PGM header in " + where);
    return data.substr(start, pos - start);
}

long token_int(const std::string& data, std::size_t& pos, const std::string& where) {
    std::string tok = next_token(data, pos, where);
    std::size_t used = 0;
    long v = 0;
    try {
        v = std::stol(tok, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != tok.size() || v < 0)
        throw IoError("bad PGM header value '" + tok + "' in " + where);
    return v;
}

}  // namespace

Raster read_pgm(const std::filesystem::path& path) {
    const std::string where = path.string();
    std::string data = read_file(path);
    std::size_t pos = 0;

    std::string magic = next_token(data, pos, where);
    if (magic != "P2" && magic != "P5")
        throw IoError("unsupported PGM magic '" + magic + "' in " + where);
    long width = token_int(data, pos, where);
    long height = token_int(data, pos, where);
    long maxval = token_int(data, pos, where);
    if (width <= 0 || height <= 0)
        throw IoError("bad PGM dimensions in " + where);
    if (maxval <= 0 || maxval > 65535)
        throw IoError("PGM maxval out of range in " + where);

    Raster r;
    r.width = static_cast<int>(width);
    r.height = static_cast<int>(height);
    std::size_t n = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
    r.pixels.reserve(n);

    if (magic == "P2") {
        for (std::size_t i = 0; i < n; ++i) {
            long v = token_int(data, pos, where);
            if (v > maxval) throw IoError("PGM sample exceeds maxval in " + where);
            r.pixels.push_back(static_cast<uint16_t>(v));
        }
    } else {
        if (pos >= data.size() || !std::isspace(static_cast<unsigned char>(data[pos])))
            throw IoError("missing separator after PGM header in " + where);
        ++pos;  // exactly one whitespace byte before the raster
        int bytes = maxval > 255 ? 2 : 1;
        if (data.size() - pos < n * static_cast<std::size_t>(bytes))
            throw IoError("truncated PGM raster data in " + where);
        const unsigned char* p = reinterpret_cast<const unsigned char*>(data.data()) + pos;
        for (std::size_t i = 0; i < n; ++i) {
            uint16_t v;
            if (bytes == 2) {
                v = static_cast<uint16_t>((p[2 * i] << 8) | p[2 * i + 1]);  // big-endian
            } else {
                v = p[i];
            }
            if (v > maxval) throw IoError("PGM sample exceeds maxval in " + where);
            r.pixels.push_back(v);
        }
    }
    return r;
}

void write_pgm(const std::filesystem::path& path, const Raster& raster, int maxval,
               bool binary) {
    if (maxval <= 0 || maxval > 65535)
        throw ValidationError("PGM maxval must be in [1, 65535]");
    if (raster.width <= 0 || raster.height <= 0 ||
        raster.pixels.size() != static_cast<std::size_t>(raster.width) * raster.height)
        throw ValidationError("raster dimensions are inconsistent");
    for (uint16_t v : raster.pixels)
        if (v > maxval)
            throw ValidationError("raster sample " + std::to_string(v) +
                                  " exceeds maxval " + std::to_string(maxval));

    std::string out;
    out += binary ? "P5\n" : "P2\n";
    out += std::to_string(raster.width) + " " + std::to_string(raster.height) + "\n";
    out += std::to_string(maxval) + "\n";
    if (binary) {
        int bytes = maxval > 255 ? 2 : 1;
        out.reserve(out.size() + raster.pixels.size() * bytes);
        for (uint16_t v : raster.pixels) {
            if (bytes == 2) out.push_back(static_cast<char>(v >> 8));
            out.push_back(static_cast<char>(v & 0xff));
        }
    } else {
        for (int r = 0; r < raster.height; ++r) {
            for (int c = 0; c < raster.width; ++c) {
                out += std::to_string(raster.at(r, c));
                out += (c + 1 == raster.width) ? '\n' : ' ';
            }
        }
    }
    atomic_write(path, out);
}

}  // namespace ssikit
