#pragma once

#include <stdexcept>
#include <string>

namespace dab {

// Error taxonomy shared by the library and the command line tool.
// Each category carries the process exit code the tool maps it to.
struct error : std::runtime_error {
  int exit_code;
  error(const std::string& msg, int code) : std::runtime_error(msg), exit_code(code) {}
};

// Malformed configuration: unknown/duplicate keys, unparsable values,
// values outside their documented domain.
struct config_error : error {
  explicit config_error(const std::string& msg) : error(msg, 1) {}
};

// Structurally valid input that fails a runtime precondition:
// degenerate design matrices, mismatched dimensions, violated certificates.
struct validation_error : error {
  explicit validation_error(const std::string& msg) : error(msg, 2) {}
};

// Filesystem problems: unreadable input, unwritable output.
struct io_error : error {
  explicit io_error(const std::string& msg) : error(msg, 3) {}
};

}  // namespace dab
