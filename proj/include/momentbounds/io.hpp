#ifndef MOMENTBOUNDS_IO_HPP
#define MOMENTBOUNDS_IO_HPP

#include <string>

namespace momentbounds {

// Writes to a sibling temporary file and renames it over path.
void atomic_write_file(const std::string& path, const std::string& content);

std::string read_text_file(const std::string& path);

} // namespace momentbounds

#endif
