#include "reshuffle/gzipio.hpp"

#include <zlib.h>

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace reshuffle {

namespace {

bool ends_with_gz(const std::string& path) {
  return path.size() > 3 && path.compare(path.size() - 3, 3, ".gz") == 0;
}

std::string inflate_gzip(const std::string& raw, const std::string& path) {
  z_stream zs{};
  if (inflateInit2(&zs, 16 + MAX_WBITS) != Z_OK)
    throw std::runtime_error("zlib init failed for " + path);
  std::string out;
  std::vector<char> buf(1 << 16);
  zs.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(raw.data()));
  zs.avail_in = static_cast<uInt>(raw.size());
  int ret = Z_OK;
  do {
    zs.next_out = reinterpret_cast<Bytef*>(buf.data());
    zs.avail_out = static_cast<uInt>(buf.size());
    ret = inflate(&zs, Z_NO_FLUSH);
    if (ret != Z_OK && ret != Z_STREAM_END) {
      inflateEnd(&zs);
      throw std::runtime_error("gzip decompression failed for " + path);
    }
    out.append(buf.data(), buf.size() - zs.avail_out);
  } while (ret != Z_STREAM_END);
  inflateEnd(&zs);
  return out;
}

}  // namespace

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open input file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  std::string raw = ss.str();
  if (ends_with_gz(path)) return inflate_gzip(raw, path);
  return raw;
}

void write_gzip_file(const std::string& path, const std::string& text) {
  gzFile f = gzopen(path.c_str(), "wb");
  if (!f) throw std::runtime_error("cannot open output file: " + path);
  if (gzwrite(f, text.data(), static_cast<unsigned>(text.size())) !=
      static_cast<int>(text.size())) {
    gzclose(f);
    throw std::runtime_error("gzip write failed: " + path);
  }
  gzclose(f);
}

}  // namespace reshuffle
