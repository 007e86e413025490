#ifndef RESHUFFLE_GZIPIO_HPP
#define RESHUFFLE_GZIPIO_HPP

#include <string>

namespace reshuffle {

// Reads a whole file; paths ending in ".gz" are inflated transparently.
std::string read_text_file(const std::string& path);

// gzip-compresses `text` to `path` (test/fixture helper).
void write_gzip_file(const std::string& path, const std::string& text);

}  // namespace reshuffle

#endif
